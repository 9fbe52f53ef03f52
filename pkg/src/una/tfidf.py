"""TF-IDF fitting, sentence scoring, and model (de)serialization.

The fitted model keeps three things per term: its inverse document
frequency, the maximum tf-idf score it reaches in any document, and the
rank of that maximum among all terms. The full documents-by-terms score
matrix is never materialized; sentence vectors are recomputed on demand
from the idf values and the sentence's own term counts.

Conventions fixed here (they must match the serialized files and the test
oracles): natural logarithms everywhere, tf(c, n) = log(1 + c/n),
idf(df, N) = -log(df / N), rank ties broken by ascending term id.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus, Vocabulary

_HEADER_RE = re.compile(r"^UNA-TFIDF v1 N=(\d+) m=(\d+)$")


class ModelFormatError(ValueError):
    """Raised when a model file cannot be parsed; carries the line number."""

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {reason}")


def tf(term_count: int, total_count: int) -> float:
    """Within-document term frequency, log(1 + term_count / total_count)."""
    if total_count < 1:
        raise ValueError(f"total_count must be >= 1, got {total_count}")
    if not 0 <= term_count <= total_count:
        raise ValueError(
            f"term_count must lie in [0, {total_count}], got {term_count}"
        )
    return math.log1p(term_count / total_count)


def idf(docs_with_term: int, total_docs: int) -> float:
    """Inverse document frequency, -log(docs_with_term / total_docs)."""
    if total_docs < 1:
        raise ValueError(f"total_docs must be >= 1, got {total_docs}")
    if not 1 <= docs_with_term <= total_docs:
        raise ValueError(
            f"docs_with_term must lie in [1, {total_docs}], got {docs_with_term}"
        )
    # The +0.0 turns the -0.0 produced when docs_with_term == total_docs
    # into a plain 0.0 so serialization stays tidy.
    return -math.log(docs_with_term / total_docs) + 0.0


class TfIdfModel:
    """Fitted corpus statistics: per-term idf, max score, and score ranks."""

    def __init__(
        self,
        vocabulary: Vocabulary,
        n_docs: int,
        idf_values: Sequence[float],
        max_score: Sequence[float],
        rank_by_score: Sequence[int] | None = None,
    ):
        self.vocabulary = vocabulary
        self.n_docs = int(n_docs)
        self.idf = np.asarray(idf_values, dtype=np.float64)
        self.max_score = np.asarray(max_score, dtype=np.float64)
        if self.idf.shape != (len(vocabulary),) or self.max_score.shape != self.idf.shape:
            raise ValueError("idf and max_score must have one entry per vocabulary term")
        if rank_by_score is None:
            rank_by_score = rank_terms_by_score(self.max_score)
        self.rank_by_score = np.asarray(rank_by_score, dtype=np.int64)
        self._rank_of = np.empty(self.m, dtype=np.int64)
        self._rank_of[self.rank_by_score] = np.arange(self.m)

    @property
    def m(self) -> int:
        """Vocabulary size."""
        return len(self.vocabulary)

    def rank_of(self, term_id: int) -> int:
        """Position of a term in the ascending max-score order."""
        if not 0 <= term_id < self.m:
            raise ValueError(f"unknown term id {term_id}")
        return int(self._rank_of[term_id])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TfIdfModel):
            return NotImplemented
        return (
            self.vocabulary == other.vocabulary
            and self.n_docs == other.n_docs
            and np.array_equal(self.idf, other.idf)
            and np.array_equal(self.max_score, other.max_score)
            and np.array_equal(self.rank_by_score, other.rank_by_score)
        )

    def __repr__(self) -> str:
        return f"TfIdfModel(N={self.n_docs}, m={self.m})"


def rank_terms_by_score(max_score: np.ndarray) -> np.ndarray:
    """Term ids sorted by (max_score, term id) ascending.

    The id tie-break keeps the order identical across runs and platforms.
    """
    scores = np.asarray(max_score, dtype=np.float64)
    return np.lexsort((np.arange(scores.size), scores)).astype(np.int64)


def fit(corpus: Corpus) -> TfIdfModel:
    """Fit idf and per-term maximum tf-idf scores over a corpus.

    One pass counts document frequencies, a second takes per-term maxima
    of tf * idf over the documents. Vocabulary terms that occur in no
    document (possible only with a hand-built corpus) score zero.
    """
    if corpus.n_docs == 0:
        raise ValueError("cannot fit a TF-IDF model on an empty corpus")
    m = len(corpus.vocabulary)
    n_docs = corpus.n_docs

    doc_freq = np.zeros(m, dtype=np.int64)
    for document in corpus.documents:
        for token in set(document.tokens):
            doc_freq[corpus.vocabulary.id_of(token)] += 1

    idf_values = np.zeros(m, dtype=np.float64)
    for term_id in range(m):
        if doc_freq[term_id] > 0:
            idf_values[term_id] = idf(int(doc_freq[term_id]), n_docs)

    max_score = np.zeros(m, dtype=np.float64)
    for document in corpus.documents:
        total = len(document.tokens)
        if total == 0:
            continue
        for token, count in Counter(document.tokens).items():
            term_id = corpus.vocabulary.id_of(token)
            score = tf(count, total) * idf_values[term_id]
            if score > max_score[term_id]:
                max_score[term_id] = score

    return TfIdfModel(corpus.vocabulary, n_docs, idf_values, max_score)


@dataclass
class SentenceScores:
    """Sentence-restricted tf-idf vector over its distinct in-vocab terms.

    term_ids are strictly increasing, which makes "first maximum" the same
    thing as "maximum with lowest term id" for every argmax taken later.
    """

    term_ids: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        self.term_ids = np.asarray(self.term_ids, dtype=np.int64)
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.term_ids.shape != self.scores.shape or self.term_ids.ndim != 1:
            raise ValueError("term_ids and scores must be parallel 1-D arrays")
        if self.term_ids.size > 1 and not np.all(np.diff(self.term_ids) > 0):
            raise ValueError("term_ids must be strictly increasing")

    @property
    def n_terms(self) -> int:
        return int(self.term_ids.size)


def sentence_scores(model: TfIdfModel, tokens: Iterable[str]) -> SentenceScores:
    """Score a sentence against the fitted model.

    Only in-vocabulary tokens are counted; out-of-vocabulary tokens
    contribute neither to the sentence length used by tf nor to the
    returned terms. A sentence with no known tokens yields an empty vector.
    """
    counts: Counter[int] = Counter()
    for token in tokens:
        term_id = model.vocabulary.get(token)
        if term_id is not None:
            counts[term_id] += 1
    if not counts:
        return SentenceScores(np.empty(0, np.int64), np.empty(0, np.float64))
    total = sum(counts.values())
    term_ids = sorted(counts)
    scores = [tf(counts[i], total) * float(model.idf[i]) for i in term_ids]
    return SentenceScores(np.array(term_ids), np.array(scores))


def save_model(model: TfIdfModel, sink) -> None:
    """Write a model as UTF-8 text; reals use shortest round-trip decimals."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="\n") as handle:
            save_model(model, handle)
        return
    sink.write(f"UNA-TFIDF v1 N={model.n_docs} m={model.m}\n")
    for term_id, term in enumerate(model.vocabulary):
        sink.write(
            f"{term}\t{float(model.idf[term_id])!r}\t{float(model.max_score[term_id])!r}\n"
        )
    sink.write("ranks:\n")
    sink.write(" ".join(str(int(i)) for i in model.rank_by_score))
    sink.write("\n")


def _parse_score(value: str, line_number: int, label: str) -> float:
    try:
        parsed = float(value)
    except ValueError:
        raise ModelFormatError(line_number, f"bad {label} value {value!r}") from None
    if not math.isfinite(parsed) or parsed < 0:
        raise ModelFormatError(line_number, f"{label} must be finite and >= 0, got {value}")
    return parsed


def load_model(source) -> TfIdfModel:
    """Parse a model file produced by save_model; inverse up to float repr."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as handle:
            return load_model(handle)

    lines = source.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [line.rstrip("\r") for line in lines]

    if not lines:
        raise ModelFormatError(1, "empty model file")
    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise ModelFormatError(1, f"bad header {lines[0]!r} (expected 'UNA-TFIDF v1 N=<int> m=<int>')")
    n_docs, m = int(header.group(1)), int(header.group(2))
    if n_docs < 1:
        raise ModelFormatError(1, f"N must be >= 1, got {n_docs}")

    if len(lines) < 1 + m + 1:
        raise ModelFormatError(len(lines) + 1, "truncated file: missing term or rank lines")

    vocabulary = Vocabulary()
    idf_values = np.zeros(m, dtype=np.float64)
    max_score = np.zeros(m, dtype=np.float64)
    for term_id in range(m):
        line_number = 2 + term_id
        fields = lines[1 + term_id].split("\t")
        if len(fields) != 3:
            raise ModelFormatError(line_number, f"expected 3 tab-separated fields, got {len(fields)}")
        term, idf_text, score_text = fields
        if term == "":
            raise ModelFormatError(line_number, "empty term")
        if term in vocabulary:
            raise ModelFormatError(line_number, f"duplicate term {term!r}")
        vocabulary.add(term)
        idf_values[term_id] = _parse_score(idf_text, line_number, "idf")
        max_score[term_id] = _parse_score(score_text, line_number, "max_score")

    ranks_line = 1 + m
    if lines[ranks_line] != "ranks:":
        raise ModelFormatError(ranks_line + 1, f"expected 'ranks:' section, got {lines[ranks_line]!r}")

    rank_ids: list[int] = []
    seen = np.zeros(m, dtype=bool)
    previous_score = -math.inf
    for extra, line in enumerate(lines[ranks_line + 1 :]):
        line_number = ranks_line + 2 + extra
        for token in line.split():
            if not token.isdigit():
                raise ModelFormatError(line_number, f"bad term id {token!r} in rank section")
            term_id = int(token)
            if term_id >= m:
                raise ModelFormatError(line_number, f"term id {term_id} out of range [0, {m})")
            if seen[term_id]:
                raise ModelFormatError(line_number, f"duplicated id {term_id} in rank section")
            seen[term_id] = True
            score = float(max_score[term_id])
            if score < previous_score:
                raise ModelFormatError(
                    line_number,
                    f"non-monotone rank section: score of term {term_id} decreases",
                )
            previous_score = score
            rank_ids.append(term_id)
    if len(rank_ids) != m:
        raise ModelFormatError(len(lines), f"rank section lists {len(rank_ids)} ids, expected {m}")

    return TfIdfModel(vocabulary, n_docs, idf_values, max_score, np.array(rank_ids))
