"""Shared test utilities: independent oracles and synthetic corpora.

The oracles here intentionally re-derive results through a different
route than the library (dense matrices, quadratic rank counting) so the
two sides stay independent checks of each other.
"""

from __future__ import annotations

import math

import numpy as np

from una.corpus import Corpus, Document, Vocabulary, build_vocabulary
from una.tfidf import TfIdfModel


def corpus_from_token_lists(token_lists) -> Corpus:
    documents = [
        Document(index, " ".join(tokens), list(tokens))
        for index, tokens in enumerate(token_lists)
    ]
    return Corpus(documents, build_vocabulary(documents))


def brute_force_tfidf(corpus: Corpus) -> tuple[np.ndarray, np.ndarray]:
    """Dense documents-by-terms matrix; returns (idf, column maxima)."""
    n_docs = corpus.n_docs
    m = len(corpus.vocabulary)
    doc_freq = np.zeros(m)
    for document in corpus.documents:
        for term in set(document.tokens):
            doc_freq[corpus.vocabulary.id_of(term)] += 1
    idf = np.zeros(m)
    for j in range(m):
        if doc_freq[j] > 0:
            idf[j] = -math.log(doc_freq[j] / n_docs)
    matrix = np.zeros((n_docs, m))
    for i, document in enumerate(corpus.documents):
        n = len(document.tokens)
        if n == 0:
            continue
        for term in document.tokens:
            j = corpus.vocabulary.id_of(term)
            matrix[i, j] += 1
        for j in range(m):
            if matrix[i, j] > 0:
                matrix[i, j] = math.log(1 + matrix[i, j] / n) * idf[j]
    max_score = matrix.max(axis=0) if n_docs else np.zeros(m)
    return idf, np.maximum(max_score, 0.0)


def random_corpus(rng: np.random.Generator, max_docs: int = 20, max_terms: int = 50) -> Corpus:
    """Small random corpus for oracle comparisons."""
    pool_size = int(rng.integers(2, max_terms + 1))
    pool = [f"t{k}" for k in range(pool_size)]
    n_docs = int(rng.integers(1, max_docs + 1))
    docs = []
    for _ in range(n_docs):
        length = int(rng.integers(1, 9))
        docs.append([pool[int(rng.integers(pool_size))] for _ in range(length)])
    return corpus_from_token_lists(docs)


def zipf_corpus(
    rng: np.random.Generator,
    n_sentences: int = 1000,
    vocab_size: int = 300,
    terms_per_sentence: int = 8,
) -> Corpus:
    """Sentences of distinct terms drawn from a Zipf-weighted pool.

    The skewed frequencies make document frequencies (and hence scores)
    vary widely, which the selection-bias checks rely on.
    """
    weights = 1.0 / np.arange(1, vocab_size + 1)
    weights /= weights.sum()
    pool = [f"w{k:03d}" for k in range(vocab_size)]
    docs = []
    for _ in range(n_sentences):
        picks = rng.choice(vocab_size, size=terms_per_sentence, replace=False, p=weights)
        docs.append([pool[int(k)] for k in picks])
    return corpus_from_token_lists(docs)


def synthetic_model(max_scores, idf_values=None) -> TfIdfModel:
    """Model with hand-picked per-term maxima (terms named t0, t1, ...)."""
    max_scores = np.asarray(max_scores, dtype=float)
    vocabulary = Vocabulary(f"t{k}" for k in range(max_scores.size))
    if idf_values is None:
        idf_values = np.ones(max_scores.size)
    return TfIdfModel(vocabulary, 1, idf_values, max_scores)


def spearman_oracle(xs, ys) -> float:
    """Quadratic-time fractional ranks plus the explicit Pearson formula."""

    def ranks(values):
        out = []
        for v in values:
            below = sum(1 for w in values if w < v)
            equal = sum(1 for w in values if w == v)
            out.append(below + (equal - 1) / 2.0 + 1.0)
        return out

    rx = ranks(list(xs))
    ry = ranks(list(ys))
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    return cov / math.sqrt(vx * vy)
