"""Subword trainer: n-gram extraction, hashing, composition, gradients."""

from __future__ import annotations

import numpy as np
import pytest
from conftest import assert_gradients_close, numeric_gradient

from kgtyper.corpus import build_vocabulary
from kgtyper.embeddings import (
    NGramConfig,
    NGramTable,
    TokenNotFoundError,
    TrainingConfig,
    train_fasttext,
)
from kgtyper.embeddings.fasttext import (
    fasttext_loss,
    fasttext_loss_and_grads,
    fnv1a_32,
    ngrams_of,
)
from kgtyper.errors import DataError


def reference_fnv1a_32(text: str) -> int:
    """Independent FNV-1a reimplementation for cross-checking."""
    value = 0x811C9DC5
    for byte in text.encode("utf-8"):
        value ^= byte
        value = (value * 0x01000193) % 2**32
    return value


def reference_ngrams(token: str, n_min: int, n_max: int) -> list[str]:
    wrapped = f"<{token}>"
    grams = []
    for n in range(n_min, n_max + 1):
        for i in range(len(wrapped) - n + 1):
            grams.append(wrapped[i : i + n])
    return grams


def tiny_corpus(sentences: int, alphabet: int, seed: int):
    rng = np.random.default_rng(seed)
    tokens = [f"tok{i}" for i in range(alphabet)]
    return [
        tuple(tokens[j] for j in rng.integers(0, alphabet, size=3))
        for _ in range(sentences)
    ]


SMALL_NGRAMS = NGramConfig(n_min=2, n_max=3, bucket_count=101)


def test_trigrams_of_three_letter_token():
    assert ngrams_of("abc", 3, 3) == ["<ab", "abc", "bc>"]


def test_ngram_range_covers_all_lengths():
    assert ngrams_of("ab", 2, 3) == ["<a", "ab", "b>", "<ab", "ab>"]


def test_duplicate_ngrams_are_kept():
    grams = ngrams_of("aaa", 2, 2)
    assert grams == ["<a", "aa", "aa", "a>"]


def test_too_short_token_has_no_ngrams():
    assert ngrams_of("a", 4, 6) == []


@pytest.mark.parametrize(
    "text,expected",
    [
        ("", 0x811C9DC5),  # offset basis: published FNV-1a test vector
        ("a", 0xE40C292C),
        ("foobar", 0xBF9CF968),
    ],
)
def test_fnv1a_published_vectors(text, expected):
    assert fnv1a_32(text) == expected


def test_fnv1a_matches_independent_reimplementation():
    for text in ["", "a", "kg", "http://dbpedia.org/resource/Berlin", "日本語"]:
        assert fnv1a_32(text) == reference_fnv1a_32(text)


def trained_model(seed: int = 1, epochs: int = 2):
    corpus = tiny_corpus(60, 6, seed=5)
    vocab = build_vocabulary(corpus)
    config = TrainingConfig(dimension=4, epochs=epochs, seed=seed)
    return corpus, vocab, train_fasttext(corpus, vocab, config, SMALL_NGRAMS)


def test_oov_vector_is_bucket_mean_recomputed_independently():
    _, _, model = trained_model()
    oov = "tok999"
    grams = reference_ngrams(oov, SMALL_NGRAMS.n_min, SMALL_NGRAMS.n_max)
    indices = [reference_fnv1a_32(g) % SMALL_NGRAMS.bucket_count for g in grams]
    expected = model.ngrams.bucket_vectors[indices].mean(axis=0)
    assert oov not in model.vocabulary
    assert np.allclose(model.vector_of(oov), expected, rtol=0, atol=1e-12)


def test_in_vocabulary_vector_is_word_plus_bucket_mean():
    _, vocab, model = trained_model()
    token = vocab.token_of(0)
    grams = reference_ngrams(token, SMALL_NGRAMS.n_min, SMALL_NGRAMS.n_max)
    indices = [reference_fnv1a_32(g) % SMALL_NGRAMS.bucket_count for g in grams]
    word = model.matrix.input_vectors[0]
    expected = (word + model.ngrams.bucket_vectors[indices].sum(axis=0)) / (1 + len(indices))
    assert np.allclose(model.vector_of(token), expected, rtol=0, atol=1e-12)
    # Composition genuinely differs from the raw word row.
    assert not np.allclose(model.vector_of(token), word)


def test_identical_strings_share_all_buckets():
    _, _, model = trained_model()
    first = model.ngrams.bucket_indices("tok0")
    second = NGramTable(SMALL_NGRAMS, model.ngrams.bucket_vectors).bucket_indices("tok0")
    assert np.array_equal(first, second)


def test_oov_without_extractable_ngrams_raises():
    corpus = tiny_corpus(20, 4, seed=5)
    vocab = build_vocabulary(corpus)
    model = train_fasttext(
        corpus, vocab, TrainingConfig(dimension=4, epochs=1), NGramConfig(4, 5, 101)
    )
    with pytest.raises(TokenNotFoundError):
        model.vector_of("a")  # wrapped form "<a>" is shorter than n_min


def test_gradient_check_word_buckets_and_output():
    config = NGramConfig(n_min=2, n_max=2, bucket_count=5)
    rng = np.random.default_rng(9)
    w_word = rng.normal(0.0, 0.4, size=(2, 2))
    buckets = rng.normal(0.0, 0.4, size=(5, 2))
    w_out = rng.normal(0.0, 0.4, size=(2, 2))
    # 4 + 10 + 4 = 18 parameters in total.
    table = NGramTable(config, buckets)
    token_buckets = [table.bucket_indices("ab"), table.bucket_indices("cd")]
    samples = [
        (0, np.array([1]), np.array([0, 1])),
        (1, np.array([0, 0]), np.array([1])),
    ]

    loss, g_word, g_buckets, g_out = fasttext_loss_and_grads(
        w_word, buckets, w_out, token_buckets, samples
    )
    assert loss == pytest.approx(
        fasttext_loss(w_word, buckets, w_out, token_buckets, samples)
    )

    def current():
        return fasttext_loss(w_word, buckets, w_out, token_buckets, samples)

    assert_gradients_close(g_word, numeric_gradient(current, w_word))
    assert_gradients_close(g_buckets, numeric_gradient(current, buckets))
    assert_gradients_close(g_out, numeric_gradient(current, w_out))


def test_epoch_loss_decreases_over_training():
    corpus = tiny_corpus(200, 8, seed=2)
    vocab = build_vocabulary(corpus)
    config = TrainingConfig(dimension=6, epochs=10, seed=1)
    model = train_fasttext(corpus, vocab, config, SMALL_NGRAMS)
    assert len(model.epoch_losses) == 10
    assert model.epoch_losses[9] < model.epoch_losses[0]


def test_same_seed_is_bitwise_identical():
    _, _, first = trained_model(seed=7)
    _, _, second = trained_model(seed=7)
    assert np.array_equal(first.matrix.input_vectors, second.matrix.input_vectors)
    assert np.array_equal(first.ngrams.bucket_vectors, second.ngrams.bucket_vectors)
    assert first.epoch_losses == second.epoch_losses


def test_different_seeds_differ():
    _, _, first = trained_model(seed=1)
    _, _, second = trained_model(seed=2)
    assert not np.array_equal(first.matrix.input_vectors, second.matrix.input_vectors)


def test_empty_corpus_rejected():
    vocab = build_vocabulary([("a", "b", "c")])
    with pytest.raises(DataError):
        train_fasttext([], vocab, TrainingConfig(dimension=4, epochs=1), SMALL_NGRAMS)


def test_empty_vocabulary_rejected():
    vocab = build_vocabulary([])
    with pytest.raises(DataError):
        train_fasttext(
            [("a", "b", "c")], vocab, TrainingConfig(dimension=4, epochs=1), SMALL_NGRAMS
        )


@pytest.mark.parametrize(
    "bad",
    [
        NGramConfig(n_min=0, n_max=3, bucket_count=10),
        NGramConfig(n_min=4, n_max=3, bucket_count=10),
        NGramConfig(n_min=2, n_max=3, bucket_count=0),
    ],
)
def test_invalid_ngram_config_rejected(bad):
    vocab = build_vocabulary([("ab", "cd", "ef")])
    with pytest.raises(ValueError):
        train_fasttext([("ab", "cd", "ef")], vocab, TrainingConfig(dimension=4, epochs=1), bad)
