"""Contrastive-objective math and a deterministic toy sentence encoder.

The loss follows the instance-discrimination form: the numerator is the
anchor/positive similarity, the denominator sums over the batch entries
that are neither the anchor nor its positive. Generated hard negatives
simply extend that denominator. A hashing-based bag-of-words encoder
stands in for a trained network so the whole pipeline can be exercised
without one.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .corpus import Vocabulary, read_nonblank_lines, tokenize


class PairsFormatError(ValueError):
    """Raised when a pairs TSV line cannot be used; carries the line number."""

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {reason}")


@dataclass(frozen=True)
class ContrastiveConfig:
    tau: float = 0.05
    batch_size: int = 64

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


def cosine_similarity(u, v) -> float:
    """dot(u, v) / (|u| * |v|) for two same-dimension non-zero vectors."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        raise ValueError("cosine similarity is undefined for zero vectors")
    return float(u @ v) / (norm_u * norm_v)


def _logsumexp(values: np.ndarray) -> float:
    shift = float(np.max(values))
    return shift + float(np.log(np.sum(np.exp(values - shift))))


def info_nce(
    anchor,
    positive,
    negatives: Sequence,
    tau: float,
    include_positive_in_denominator: bool = False,
) -> float:
    """Single-anchor contrastive loss.

    -log(exp(sim(anchor, positive) / tau) / sum_k exp(sim(anchor, neg_k) / tau)),
    with the positive kept out of the denominator sum. The optional switch
    adds it back for the more common softmax variant. Computed with a
    max-shifted log-sum-exp, so extreme tau values stay finite. Negative
    loss values are possible: a positive closer than every negative makes
    the numerator exceed the denominator.
    """
    if tau <= 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if len(negatives) == 0:
        raise ValueError("at least one negative is required")
    anchor = np.asarray(anchor, dtype=np.float64)
    if not np.all(np.isfinite(anchor)):
        raise ValueError("anchor embedding has non-finite entries")

    logits = []
    for negative in negatives:
        negative = np.asarray(negative, dtype=np.float64)
        if not np.all(np.isfinite(negative)):
            raise ValueError("negative embedding has non-finite entries")
        logits.append(cosine_similarity(anchor, negative) / tau)
    positive = np.asarray(positive, dtype=np.float64)
    if not np.all(np.isfinite(positive)):
        raise ValueError("positive embedding has non-finite entries")
    positive_logit = cosine_similarity(anchor, positive) / tau
    if include_positive_in_denominator:
        logits.append(positive_logit)
    return _logsumexp(np.array(logits)) - positive_logit


def batch_loss(
    anchors: Sequence,
    positives: Sequence,
    in_batch_negatives: Sequence | None = None,
    una_negatives: Sequence = (),
    config: ContrastiveConfig = ContrastiveConfig(),
) -> float:
    """Mean contrastive loss over a batch.

    Anchor i is contrasted against every other batch embedding (its own
    entry is skipped; positives are not part of the pool) plus all
    generated negatives. in_batch_negatives defaults to the anchors
    themselves, which is the usual single-view batch.
    """
    anchors = list(anchors)
    positives = list(positives)
    if len(anchors) != len(positives):
        raise ValueError(
            f"anchors and positives must align, got {len(anchors)} vs {len(positives)}"
        )
    if not anchors:
        raise ValueError("batch must be non-empty")
    pool = anchors if in_batch_negatives is None else list(in_batch_negatives)
    if in_batch_negatives is not None and len(pool) != len(anchors):
        raise ValueError("in_batch_negatives must align with anchors")
    extra = list(una_negatives)
    if len(anchors) < 2 and not extra:
        raise ValueError("a batch of fewer than 2 needs generated negatives")

    losses = []
    for index, anchor in enumerate(anchors):
        negatives = [pool[k] for k in range(len(pool)) if k != index] + extra
        losses.append(info_nce(anchor, positives[index], negatives, config.tau))
    return float(np.mean(losses))


class ToyEncoder:
    """Deterministic bag-of-words encoder over fixed random term vectors.

    Every vocabulary term maps to a unit vector drawn from a stream seeded
    by (encoder seed, stable hash of the term string), so embeddings
    depend only on the seed, never on process state or insertion order.
    A sentence embeds as the normalized sum of its in-vocabulary token
    vectors; a sentence with none gets the first basis vector. The
    term-vector cache is write-once: concurrent encoders recompute the
    same value at worst.
    """

    def __init__(self, vocabulary: Vocabulary, dim: int = 256, seed: int = 0):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.vocabulary = vocabulary
        self.dim = dim
        self.seed = seed
        self._vectors: dict[str, np.ndarray] = {}

    def _term_vector(self, term: str) -> np.ndarray:
        vector = self._vectors.get(term)
        if vector is None:
            digest = hashlib.blake2b(term.encode("utf-8"), digest_size=8).digest()
            sequence = np.random.SeedSequence([self.seed, int.from_bytes(digest, "big")])
            raw = np.random.default_rng(sequence).standard_normal(self.dim)
            vector = raw / np.linalg.norm(raw)
            self._vectors[term] = vector
        return vector

    def _fallback(self) -> np.ndarray:
        vector = np.zeros(self.dim)
        vector[0] = 1.0
        return vector

    def encode(self, tokens: Iterable[str]) -> np.ndarray:
        counts: dict[str, int] = {}
        for token in tokens:
            if token in self.vocabulary:
                counts[token] = counts.get(token, 0) + 1
        if not counts:
            return self._fallback()
        # Summing in sorted term order makes the embedding bit-identical
        # under any permutation of the input tokens.
        total = np.zeros(self.dim)
        for token in sorted(counts):
            total += counts[token] * self._term_vector(token)
        norm = np.linalg.norm(total)
        if norm == 0.0:
            return self._fallback()
        return total / norm

    __call__ = encode


Encoder = Callable[[Iterable[str]], np.ndarray]


@dataclass
class PositivePairSet:
    """(anchor, positive) sentence pairs ingested from a TSV file."""

    pairs: list[tuple[str, str]]

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def load_pairs(source) -> PositivePairSet:
    """Read anchor<TAB>positive lines.

    Blank lines are skipped. Lines with the wrong column count, or with a
    side that tokenizes to nothing, are rejected with their line number.
    """
    lines, _ = read_nonblank_lines(source)
    pairs: list[tuple[str, str]] = []
    for line_number, text in lines:
        fields = text.split("\t")
        if len(fields) != 2:
            raise PairsFormatError(line_number, f"expected 2 tab-separated columns, got {len(fields)}")
        anchor, positive = fields
        if not tokenize(anchor) or not tokenize(positive):
            raise PairsFormatError(line_number, "pair side is empty after tokenization")
        pairs.append((anchor, positive))
    return PositivePairSet(pairs)
