#!/usr/bin/env python3
"""Regenerate the bundled sample corpus and pairs files.

The corpus is 1,000 synthetic sentences over a Zipf-weighted vocabulary of
pseudo-words, with enough casing and punctuation to exercise the
tokenizer. Each pair line keeps a corpus sentence as the anchor and swaps
one word for the positive side. Output is deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

CONSONANTS = "bcdfglmnprstvz"
VOWELS = "aeiou"
N_WORDS = 500
N_SENTENCES = 1000
N_PAIRS = 120
SEED = 20240809


def make_words(rng: np.random.Generator) -> list[str]:
    syllables = [c + v for c in CONSONANTS for v in VOWELS]
    words: list[str] = []
    seen = set()
    while len(words) < N_WORDS:
        count = int(rng.integers(2, 5))
        word = "".join(syllables[int(rng.integers(len(syllables)))] for _ in range(count))
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def make_sentences(rng: np.random.Generator, words: list[str]) -> list[str]:
    weights = 1.0 / np.arange(1, len(words) + 1)
    weights /= weights.sum()
    sentences = []
    for _ in range(N_SENTENCES):
        length = int(rng.integers(5, 12))
        picks = rng.choice(len(words), size=length, p=weights)
        tokens = [words[int(i)] for i in picks]
        tokens[0] = tokens[0].capitalize()
        if length > 7 and rng.random() < 0.3:
            tokens[3] = tokens[3] + ","
        sentences.append(" ".join(tokens) + ".")
    return sentences


def make_pairs(rng: np.random.Generator, sentences: list[str], words: list[str]) -> list[str]:
    pairs = []
    for index in range(N_PAIRS):
        anchor = sentences[index]
        tokens = anchor.split()
        position = int(rng.integers(1, len(tokens)))
        replacement = words[int(rng.integers(len(words)))]
        if position == len(tokens) - 1:
            replacement += "."
        tokens[position] = replacement
        pairs.append(f"{anchor}\t{' '.join(tokens)}")
    return pairs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=Path(__file__).resolve().parent.parent / "data")
    args = parser.parse_args()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rng = np.random.default_rng(SEED)
    words = make_words(rng)
    sentences = make_sentences(rng, words)
    pairs = make_pairs(rng, sentences, words)

    (out_dir / "sample_corpus.txt").write_text("\n".join(sentences) + "\n", encoding="utf-8")
    (out_dir / "sample_pairs.tsv").write_text("\n".join(pairs) + "\n", encoding="utf-8")
    print(f"wrote {len(sentences)} sentences and {len(pairs)} pairs to {out_dir}")


if __name__ == "__main__":
    main()
