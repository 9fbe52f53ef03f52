"""Hard negative generation by score-guided term replacement.

For each sentence the distinct in-vocabulary terms get replacement
probabilities proportional to how far their tf-idf score sits above the
sentence minimum, scaled by the magnitude `beta` and clamped at 1; the
highest-scoring term is always replaced so the output provably differs
from the input. Replacements are drawn from the terms whose maximum
corpus tf-idf score ranks within `radius` positions of the original
term's, weighted by those scores, so a replaced word swaps against a word
of comparable importance. Batches are augmented once every `alpha`
batches.

Both the term-selection step and the term-replacement step can be
switched to a purely random baseline for ablation experiments.

Randomness comes from counter-based Philox streams derived from
(master seed, batch index, position in batch), so results are identical
no matter how many workers process a batch or in what order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .corpus import Document
from .tfidf import SentenceScores, TfIdfModel, sentence_scores

MODE_TFIDF = "tfidf"
MODE_RANDOM = "random"
_MODES = (MODE_TFIDF, MODE_RANDOM)

THREADS_ENV_VAR = "UNA_THREADS"


class EmptySentenceError(ValueError):
    """A sentence with no in-vocabulary terms cannot be scored for replacement."""


class NoReplacementError(ValueError):
    """No candidate term exists (vocabulary of size one)."""


@dataclass(frozen=True)
class AugmentationConfig:
    """Knobs of the augmentation run.

    beta: replacement-probability magnitude in (0, 1]; the per-sentence
        mean of the unclamped probabilities equals beta.
    radius: how many rank positions below and above a term's max-score
        rank the candidate replacements may come from.
    alpha: negatives are generated for every alpha-th batch (1-based).
    seed: master seed for all per-sentence random streams.
    selection_mode / replacement_mode: "tfidf" for the score-guided
        behavior, "random" for the ablation baselines.
    """

    beta: float = 0.5
    radius: int = 4000
    alpha: int = 5
    seed: int = 0
    selection_mode: str = MODE_TFIDF
    replacement_mode: str = MODE_TFIDF

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if self.radius < 1:
            raise ValueError(f"radius must be >= 1, got {self.radius}")
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit non-negative integer, got {self.seed}")
        for mode in (self.selection_mode, self.replacement_mode):
            if mode not in _MODES:
                raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")


@dataclass
class TermReplacement:
    """Outcome of the replacement decision for one distinct sentence term."""

    term_id: int
    probability: float
    forced: bool
    replaced: bool
    # Candidate window, materialized only when a replacement was actually
    # sampled from it (random replacement mode never uses one).
    window: np.ndarray | None = None
    replacement_id: int | None = None


@dataclass
class ReplacementPlan:
    """Per-term probabilities and sampled outcomes for one sentence."""

    entries: list[TermReplacement] = field(default_factory=list)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass
class AugmentedSentence:
    """A negative sample generated from one source document."""

    source_id: int
    tokens: list[str]
    plan: ReplacementPlan | None
    unaugmentable: bool = False


@dataclass
class NegativeBatch:
    """The negative samples emitted for one injected batch."""

    batch_index: int
    sentences: list[AugmentedSentence]

    def __len__(self):
        return len(self.sentences)


def _unclamped_probabilities(scores: np.ndarray, beta: float) -> np.ndarray:
    """beta * (z - min z) / C with C the mean of (z - min z); needs C > 0."""
    centered = scores - np.min(scores)
    return beta * centered / centered.mean()


def replacement_probabilities(
    scores: SentenceScores,
    beta: float,
    selection_mode: str = MODE_TFIDF,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, int]:
    """Replacement probability per distinct term, plus the forced index.

    In tfidf mode the probabilities are beta * (z - min z) / C clamped at
    1, and the term with the highest score (lowest id on ties) is forced
    to 1 so at least one term is always replaced. When all scores are
    equal (including single-term sentences) the formula degenerates, and
    only the forced term keeps probability 1.

    In random mode every term gets probability beta and the forced term is
    chosen uniformly, which consumes one draw from `rng`.

    Returns (probabilities aligned with scores.term_ids, forced position).
    """
    if scores.n_terms == 0:
        raise EmptySentenceError("sentence has no in-vocabulary terms")
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if selection_mode not in _MODES:
        raise ValueError(f"selection_mode must be one of {_MODES}, got {selection_mode!r}")

    if selection_mode == MODE_RANDOM:
        if rng is None:
            raise ValueError("random selection mode requires an rng")
        probabilities = np.full(scores.n_terms, float(beta))
        forced = int(rng.integers(scores.n_terms))
    else:
        z = scores.scores
        if np.ptp(z) > 0:
            probabilities = np.minimum(_unclamped_probabilities(z, beta), 1.0)
        else:
            probabilities = np.zeros(scores.n_terms)
        forced = int(np.argmax(z))  # first maximum == lowest term id
    probabilities[forced] = 1.0
    return probabilities, forced


def candidate_window(model: TfIdfModel, term_id: int, radius: int) -> np.ndarray:
    """Term ids whose max-score rank is within `radius` of the given term's.

    The window clamps at the vocabulary boundaries (no wrap-around) and
    never contains the term itself, so it holds at most 2 * radius ids.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    rank = model.rank_of(term_id)
    low = max(0, rank - radius)
    high = min(model.m - 1, rank + radius)
    order = model.rank_by_score
    return np.concatenate([order[low:rank], order[rank + 1 : high + 1]])


def sample_replacement(
    model: TfIdfModel,
    window: Sequence[int] | np.ndarray,
    replacement_mode: str,
    rng: np.random.Generator,
    original_term_id: int | None = None,
) -> int:
    """Draw one replacement term id.

    tfidf mode samples from the window with probability proportional to
    each candidate's maximum corpus score, falling back to uniform when
    every weight is zero. random mode ignores the window and draws
    uniformly from the whole vocabulary minus the original term.
    """
    if replacement_mode not in _MODES:
        raise ValueError(f"replacement_mode must be one of {_MODES}, got {replacement_mode!r}")

    if replacement_mode == MODE_RANDOM:
        if original_term_id is None:
            raise ValueError("random replacement mode requires the original term id")
        if model.m <= 1:
            raise NoReplacementError("vocabulary has no other term to replace with")
        drawn = int(rng.integers(model.m - 1))
        return drawn if drawn < original_term_id else drawn + 1

    window = np.asarray(window, dtype=np.int64)
    if window.size == 0:
        raise NoReplacementError("empty candidate window")
    weights = model.max_score[window]
    total = float(weights.sum())
    if total > 0:
        return int(rng.choice(window, p=weights / total))
    return int(window[rng.integers(window.size)])


def augment_sentence(
    model: TfIdfModel,
    document: Document,
    config: AugmentationConfig,
    rng: np.random.Generator,
) -> AugmentedSentence:
    """Generate one negative sentence by stochastic term replacement.

    Replacement is decided once per distinct term; every occurrence of a
    replaced term is rewritten to the same sampled substitute. Tokens the
    model has never seen pass through untouched. Sentences with no
    in-vocabulary terms, or a single-term vocabulary, come back unchanged
    and flagged unaugmentable.
    """
    scores = sentence_scores(model, document.tokens)
    if scores.n_terms == 0 or model.m <= 1:
        return AugmentedSentence(document.doc_id, list(document.tokens), None, unaugmentable=True)

    probabilities, forced = replacement_probabilities(
        scores, config.beta, config.selection_mode, rng
    )

    plan = ReplacementPlan()
    substitutions: dict[str, str] = {}
    for position in range(scores.n_terms):
        term_id = int(scores.term_ids[position])
        probability = float(probabilities[position])
        replaced = bool(rng.random() < probability)
        window = None
        replacement_id = None
        if replaced:
            if config.replacement_mode == MODE_RANDOM:
                replacement_id = sample_replacement(
                    model, (), MODE_RANDOM, rng, original_term_id=term_id
                )
            else:
                window = candidate_window(model, term_id, config.radius)
                replacement_id = sample_replacement(
                    model, window, MODE_TFIDF, rng, original_term_id=term_id
                )
            substitutions[model.vocabulary.term(term_id)] = model.vocabulary.term(replacement_id)
        plan.entries.append(
            TermReplacement(term_id, probability, position == forced, replaced, window, replacement_id)
        )

    tokens = [substitutions.get(token, token) for token in document.tokens]
    return AugmentedSentence(document.doc_id, tokens, plan)


def sentence_rng(master_seed: int, batch_index: int, position: int) -> np.random.Generator:
    """Philox stream for one (batch, sentence) slot.

    Streams are a pure function of their coordinates, which is what makes
    batch augmentation independent of worker count and execution order.
    """
    sequence = np.random.SeedSequence(master_seed, spawn_key=(batch_index, position))
    return np.random.Generator(np.random.Philox(sequence))


def _worker_count() -> int:
    value = os.environ.get(THREADS_ENV_VAR, "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def augment_batch(
    model: TfIdfModel,
    documents: Sequence[Document],
    config: AugmentationConfig,
    batch_index: int,
) -> NegativeBatch | None:
    """Augment one training batch if it falls on the injection schedule.

    Batches are numbered from 1; negatives are produced for batch indices
    that are multiples of alpha and the result has exactly one augmented
    sentence per input document. Off-schedule batches yield None.
    """
    if not documents:
        raise ValueError("batch must be non-empty")
    if batch_index < 1:
        raise ValueError(f"batch_index is 1-based, got {batch_index}")
    if batch_index % config.alpha != 0:
        return None

    def run(position: int) -> AugmentedSentence:
        rng = sentence_rng(config.seed, batch_index, position)
        return augment_sentence(model, documents[position], config, rng)

    workers = min(_worker_count(), len(documents))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sentences = list(pool.map(run, range(len(documents))))
    else:
        sentences = [run(position) for position in range(len(documents))]
    return NegativeBatch(batch_index, sentences)


def iter_negative_batches(
    model: TfIdfModel,
    documents: Iterable[Document],
    config: AugmentationConfig,
    batch_size: int,
) -> Iterator[NegativeBatch]:
    """Partition documents into batches and yield negatives on schedule."""
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    batch: list[Document] = []
    batch_index = 0
    for document in documents:
        batch.append(document)
        if len(batch) == batch_size:
            batch_index += 1
            negatives = augment_batch(model, batch, config, batch_index)
            if negatives is not None:
                yield negatives
            batch = []
    if batch:
        batch_index += 1
        negatives = augment_batch(model, batch, config, batch_index)
        if negatives is not None:
            yield negatives
