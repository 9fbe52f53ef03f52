"""TF-IDF math, fitting against a dense oracle, and model serialization."""

import io
import math

import numpy as np
import pytest

from helpers import brute_force_tfidf, corpus_from_token_lists, random_corpus
from una.corpus import load_corpus
from una.tfidf import (
    ModelFormatError,
    TfIdfModel,
    fit,
    idf,
    load_model,
    save_model,
    sentence_scores,
    tf,
)


@pytest.fixture
def two_doc_corpus():
    return load_corpus(io.StringIO("a b b\na c\n"))


@pytest.fixture
def two_doc_model(two_doc_corpus):
    return fit(two_doc_corpus)


class TestTf:
    def test_absent_term_scores_zero(self):
        assert tf(0, 5) == 0.0

    def test_all_occurrences(self):
        assert tf(3, 3) == pytest.approx(math.log(2), abs=1e-12)

    def test_partial(self):
        assert tf(2, 3) == pytest.approx(math.log(5 / 3), abs=1e-12)

    def test_rejects_empty_document(self):
        with pytest.raises(ValueError):
            tf(0, 0)

    def test_rejects_count_above_total(self):
        with pytest.raises(ValueError):
            tf(4, 3)


class TestIdf:
    def test_term_in_every_document(self):
        value = idf(7, 7)
        assert value == 0.0
        assert math.copysign(1.0, value) == 1.0  # plain zero, not -0.0

    def test_half_of_documents(self):
        assert idf(1, 2) == pytest.approx(math.log(2), abs=1e-12)

    def test_rare_term(self):
        assert idf(1, 1000) == pytest.approx(math.log(1000), abs=1e-12)

    def test_rejects_zero_and_excess(self):
        with pytest.raises(ValueError):
            idf(0, 5)
        with pytest.raises(ValueError):
            idf(6, 5)
        with pytest.raises(ValueError):
            idf(1, 0)


class TestFit:
    def test_two_document_example(self, two_doc_model):
        model = two_doc_model
        voc = model.vocabulary
        a, b, c = voc.id_of("a"), voc.id_of("b"), voc.id_of("c")
        assert model.idf[a] == 0.0
        assert model.idf[b] == pytest.approx(math.log(2), abs=1e-12)
        assert model.idf[c] == pytest.approx(math.log(2), abs=1e-12)
        assert model.max_score[a] == 0.0
        assert model.max_score[b] == pytest.approx(math.log(1 + 2 / 3) * math.log(2), abs=1e-12)
        assert model.max_score[c] == pytest.approx(math.log(1 + 1 / 2) * math.log(2), abs=1e-12)

    def test_matches_dense_oracle(self, two_doc_corpus):
        model = fit(two_doc_corpus)
        oracle_idf, oracle_max = brute_force_tfidf(two_doc_corpus)
        np.testing.assert_allclose(model.idf, oracle_idf, atol=1e-12)
        np.testing.assert_allclose(model.max_score, oracle_max, atol=1e-12)

    def test_universal_term_scores_zero(self):
        corpus = corpus_from_token_lists([["x"], ["x"]])
        model = fit(corpus)
        assert model.idf[0] == 0.0 and model.max_score[0] == 0.0

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            fit(corpus_from_token_lists([]))

    def test_random_corpora_match_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            corpus = random_corpus(rng)
            model = fit(corpus)
            oracle_idf, oracle_max = brute_force_tfidf(corpus)
            np.testing.assert_allclose(model.idf, oracle_idf, atol=1e-12)
            np.testing.assert_allclose(model.max_score, oracle_max, atol=1e-12)

    def test_idf_monotone_in_document_frequency(self):
        rng = np.random.default_rng(11)
        corpus = random_corpus(rng, max_docs=15, max_terms=20)
        model = fit(corpus)
        doc_freq = np.zeros(len(corpus.vocabulary))
        for document in corpus.documents:
            for term in set(document.tokens):
                doc_freq[corpus.vocabulary.id_of(term)] += 1
        for u in range(len(doc_freq)):
            for v in range(len(doc_freq)):
                if doc_freq[u] and doc_freq[v] and doc_freq[u] < doc_freq[v]:
                    assert model.idf[u] > model.idf[v]

    def test_rank_order_non_decreasing_with_id_ties(self):
        corpus = corpus_from_token_lists([["a", "c"], ["b", "c"]])
        model = fit(corpus)
        scores = model.max_score[model.rank_by_score]
        assert np.all(np.diff(scores) >= 0)
        # a (id 0) and b (id 2) share the same score; a must come first
        assert list(model.rank_by_score) == [1, 0, 2]

    def test_rank_of_inverts_ranking(self, two_doc_model):
        for rank, term_id in enumerate(two_doc_model.rank_by_score):
            assert two_doc_model.rank_of(int(term_id)) == rank
        with pytest.raises(ValueError):
            two_doc_model.rank_of(99)


class TestSentenceScores:
    def test_empty_tokens(self, two_doc_model):
        scores = sentence_scores(two_doc_model, [])
        assert scores.n_terms == 0

    def test_example_values(self, two_doc_model):
        scores = sentence_scores(two_doc_model, ["a", "b"])
        voc = two_doc_model.vocabulary
        assert list(scores.term_ids) == sorted([voc.id_of("a"), voc.id_of("b")])
        by_term = dict(zip(scores.term_ids, scores.scores))
        assert by_term[voc.id_of("a")] == 0.0
        assert by_term[voc.id_of("b")] == pytest.approx(
            math.log(1 + 1 / 2) * math.log(2), abs=1e-12
        )

    def test_oov_only(self, two_doc_model):
        assert sentence_scores(two_doc_model, ["zzz"]).n_terms == 0

    def test_oov_excluded_from_length(self, two_doc_model):
        # "zzz" must not count toward the sentence length used by tf
        with_oov = sentence_scores(two_doc_model, ["a", "zzz", "b"])
        without = sentence_scores(two_doc_model, ["a", "b"])
        np.testing.assert_array_equal(with_oov.term_ids, without.term_ids)
        np.testing.assert_array_equal(with_oov.scores, without.scores)

    def test_scores_non_negative(self, two_doc_model):
        scores = sentence_scores(two_doc_model, ["a", "b", "b", "c", "c", "c"])
        assert np.all(scores.scores >= 0)


class TestSerialization:
    def test_round_trip_identity(self, two_doc_model, tmp_path):
        path = tmp_path / "model.txt"
        save_model(two_doc_model, path)
        assert load_model(path) == two_doc_model

    def test_round_trip_random_model(self, tmp_path):
        corpus = random_corpus(np.random.default_rng(3))
        model = fit(corpus)
        buffer = io.StringIO()
        save_model(model, buffer)
        assert load_model(io.StringIO(buffer.getvalue())) == model

    def test_round_trip_without_trailing_newline(self, two_doc_model):
        buffer = io.StringIO()
        save_model(two_doc_model, buffer)
        assert load_model(io.StringIO(buffer.getvalue().rstrip("\n"))) == two_doc_model

    def _lines(self, model):
        buffer = io.StringIO()
        save_model(model, buffer)
        return buffer.getvalue().split("\n")

    def test_rejects_zero_documents(self, two_doc_model):
        lines = self._lines(two_doc_model)
        lines[0] = "UNA-TFIDF v1 N=0 m=3"
        with pytest.raises(ModelFormatError) as err:
            load_model(io.StringIO("\n".join(lines)))
        assert err.value.line_number == 1

    def test_rejects_unknown_version(self, two_doc_model):
        lines = self._lines(two_doc_model)
        lines[0] = "UNA-TFIDF v2 N=2 m=3"
        with pytest.raises(ModelFormatError):
            load_model(io.StringIO("\n".join(lines)))

    def test_rejects_duplicate_rank_id(self, two_doc_model):
        lines = self._lines(two_doc_model)
        lines[5] = "0 2 2"
        with pytest.raises(ModelFormatError) as err:
            load_model(io.StringIO("\n".join(lines)))
        assert "duplicated id 2" in str(err.value)

    def test_rejects_incomplete_permutation(self, two_doc_model):
        lines = self._lines(two_doc_model)
        lines[5] = "0 2"
        with pytest.raises(ModelFormatError):
            load_model(io.StringIO("\n".join(lines)))

    def test_rejects_non_monotone_ranks(self, two_doc_model):
        lines = self._lines(two_doc_model)
        lines[5] = "1 2 0"  # highest score first
        with pytest.raises(ModelFormatError) as err:
            load_model(io.StringIO("\n".join(lines)))
        assert "non-monotone" in str(err.value)

    def test_rejects_truncated_file(self, two_doc_model):
        lines = self._lines(two_doc_model)
        with pytest.raises(ModelFormatError):
            load_model(io.StringIO("\n".join(lines[:3])))

    def test_rejects_bad_field_count(self, two_doc_model):
        lines = self._lines(two_doc_model)
        lines[1] = "a\t0.0"
        with pytest.raises(ModelFormatError) as err:
            load_model(io.StringIO("\n".join(lines)))
        assert err.value.line_number == 2

    def test_rejects_bad_float(self, two_doc_model):
        lines = self._lines(two_doc_model)
        lines[2] = "b\tnot-a-number\t0.1"
        with pytest.raises(ModelFormatError) as err:
            load_model(io.StringIO("\n".join(lines)))
        assert err.value.line_number == 3

    def test_accepts_wrapped_rank_lines(self, two_doc_model):
        lines = self._lines(two_doc_model)
        ids = lines[5].split()
        rebuilt = "\n".join(lines[:5] + ids) + "\n"
        assert load_model(io.StringIO(rebuilt)) == two_doc_model

    def test_equality_is_field_for_field(self, two_doc_model):
        other = TfIdfModel(
            two_doc_model.vocabulary,
            two_doc_model.n_docs + 1,
            two_doc_model.idf,
            two_doc_model.max_score,
            two_doc_model.rank_by_score,
        )
        assert other != two_doc_model
