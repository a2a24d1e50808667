"""Subword trainer: CBOW objective over word-plus-n-gram compositions.

Each token's input vector is the mean of its own word vector and the
bucket vectors of its character n-grams; the token string is wrapped in
boundary markers before extraction, so token "abc" with n=3 contributes
"<ab", "abc", "bc>". N-grams are hashed into a fixed bucket table with
FNV-1a, which keeps the mapping stable across runs and gives unseen
tokens a vector made purely of their n-gram buckets.

N-grams run over the full IRI string: there is no reliable way to segment
a URI into words, and namespace prefixes are exactly the kind of
regularity the buckets can pick up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..corpus import Sentence, Vocabulary
from ..errors import DataError, NumericalError
from .base import (
    EmbeddingMatrix,
    TokenNotFoundError,
    TrainingConfig,
    UnigramSampler,
    encode_corpus,
    init_input_vectors,
    linear_lr,
    ns_position_grads,
    ns_position_loss,
)

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193


def fnv1a_32(text: str) -> int:
    """32-bit FNV-1a over the UTF-8 bytes of ``text``."""
    value = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        value = ((value ^ byte) * _FNV_PRIME) & 0xFFFFFFFF
    return value


def ngrams_of(token: str, n_min: int, n_max: int) -> list[str]:
    """Character n-grams of the boundary-wrapped token, duplicates kept."""
    wrapped = f"<{token}>"
    out = []
    for n in range(n_min, n_max + 1):
        for start in range(0, len(wrapped) - n + 1):
            out.append(wrapped[start : start + n])
    return out


@dataclass
class NGramConfig:
    n_min: int = 3
    n_max: int = 6
    bucket_count: int = 2_000_000

    def validate(self) -> None:
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError("need 1 <= n_min <= n_max")
        if self.bucket_count < 1:
            raise ValueError("bucket_count must be >= 1")


class NGramTable:
    """Bucketed n-gram vectors plus the deterministic hash."""

    def __init__(self, config: NGramConfig, bucket_vectors: np.ndarray):
        config.validate()
        if bucket_vectors.shape[0] != config.bucket_count:
            raise ValueError("bucket_vectors row count must equal bucket_count")
        self.config = config
        self.bucket_vectors = bucket_vectors
        self._cache: dict[str, np.ndarray] = {}

    @property
    def n_min(self) -> int:
        return self.config.n_min

    @property
    def n_max(self) -> int:
        return self.config.n_max

    @property
    def bucket_count(self) -> int:
        return self.config.bucket_count

    def bucket_indices(self, token: str) -> np.ndarray:
        """Bucket index per n-gram occurrence of ``token`` (cached)."""
        cached = self._cache.get(token)
        if cached is None:
            grams = ngrams_of(token, self.n_min, self.n_max)
            cached = np.asarray(
                [fnv1a_32(g) % self.bucket_count for g in grams], dtype=np.intp
            )
            self._cache[token] = cached
        return cached

    def ngram_mean(self, token: str) -> np.ndarray:
        """Mean of the token's bucket vectors; the out-of-vocabulary vector."""
        buckets = self.bucket_indices(token)
        if not len(buckets):
            raise TokenNotFoundError(token)
        return self.bucket_vectors[buckets].mean(axis=0)


@dataclass
class FastTextEmbeddings:
    """Trained word matrix together with its n-gram bucket table."""

    matrix: EmbeddingMatrix
    ngrams: NGramTable

    @property
    def vocabulary(self) -> Vocabulary:
        return self.matrix.vocabulary

    @property
    def dimension(self) -> int:
        return self.matrix.dimension

    @property
    def epoch_losses(self) -> list[float]:
        return self.matrix.epoch_losses

    def __contains__(self, token: str) -> bool:
        return token in self.vocabulary

    def vector_of(self, token: str) -> np.ndarray:
        """Word-plus-n-gram mean in vocabulary, pure n-gram mean otherwise."""
        if token in self.vocabulary:
            word = self.matrix.input_vectors[self.vocabulary.id_of(token)]
            buckets = self.ngrams.bucket_indices(token)
            return (word + self.ngrams.bucket_vectors[buckets].sum(axis=0)) / (
                1 + len(buckets)
            )
        return self.ngrams.ngram_mean(token)


def compose_inputs(
    w_word: np.ndarray, buckets: np.ndarray, token_buckets: Sequence[np.ndarray], ids: np.ndarray
) -> np.ndarray:
    """Composed input vectors for the given token ids, one row per id."""
    rows = np.empty((len(ids), w_word.shape[1]))
    for row, token_id in enumerate(ids):
        idx = token_buckets[token_id]
        rows[row] = (w_word[token_id] + buckets[idx].sum(axis=0)) / (1 + len(idx))
    return rows


Sample = tuple[int, np.ndarray, np.ndarray]  # (center, context ids, negative ids)


def fasttext_loss(
    w_word: np.ndarray,
    buckets: np.ndarray,
    w_out: np.ndarray,
    token_buckets: Sequence[np.ndarray],
    samples: Sequence[Sample],
) -> float:
    """Total loss over fixed samples (for the finite-difference check)."""
    total = 0.0
    for center, context, negatives in samples:
        hidden = compose_inputs(w_word, buckets, token_buckets, context).mean(axis=0)
        total += ns_position_loss(hidden, w_out, center, negatives)
    return total


def fasttext_loss_and_grads(
    w_word: np.ndarray,
    buckets: np.ndarray,
    w_out: np.ndarray,
    token_buckets: Sequence[np.ndarray],
    samples: Sequence[Sample],
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Loss plus dense gradients for word, bucket, and output matrices."""
    g_word = np.zeros_like(w_word)
    g_buckets = np.zeros_like(buckets)
    g_out = np.zeros_like(w_out)
    total = 0.0
    for center, context, negatives in samples:
        hidden = compose_inputs(w_word, buckets, token_buckets, context).mean(axis=0)
        loss, g_hidden, g_center, g_negatives = ns_position_grads(
            hidden, w_out, center, negatives
        )
        total += loss
        g_out[center] += g_center
        np.add.at(g_out, negatives, g_negatives)
        g_context = g_hidden / len(context)
        for token_id in context:
            idx = token_buckets[token_id]
            share = g_context / (1 + len(idx))
            g_word[token_id] += share
            np.add.at(g_buckets, idx, share)
    return total, g_word, g_buckets, g_out


def train_fasttext(
    corpus: Iterable[Sentence],
    vocab: Vocabulary,
    config: TrainingConfig,
    ngram_config: NGramConfig | None = None,
) -> FastTextEmbeddings:
    """Same objective and schedule as the CBOW trainer, with composed inputs.

    Gradients on a composed context vector distribute to the word vector
    and every constituent bucket vector, scaled by the composition mean.
    """
    config.validate()
    ngram_config = ngram_config or NGramConfig()
    ngram_config.validate()
    sentences = list(corpus)
    if not sentences:
        raise DataError("cannot train on an empty corpus")
    if len(vocab) == 0:
        raise DataError("cannot train with an empty vocabulary")
    encoded = encode_corpus(sentences, vocab)
    positions_per_epoch = sum(len(ids) for ids in encoded)
    if positions_per_epoch == 0:
        raise DataError("corpus and vocabulary share no tokens")

    rng = np.random.default_rng(config.seed)
    w_word = init_input_vectors(rng, len(vocab), config.dimension)
    buckets = init_input_vectors(rng, ngram_config.bucket_count, config.dimension)
    w_out = np.zeros((len(vocab), config.dimension))
    table = NGramTable(ngram_config, buckets)
    token_buckets = [table.bucket_indices(vocab.token_of(i)) for i in range(len(vocab))]
    sampler = UnigramSampler(vocab)
    total_steps = positions_per_epoch * config.epochs

    step = 0
    epoch_losses: list[float] = []
    for _ in range(config.epochs):
        epoch_loss = 0.0
        trained = 0
        for ids in encoded:
            n = len(ids)
            for i in range(n):
                lr = linear_lr(config.initial_learning_rate, step, total_steps)
                step += 1
                context = np.concatenate(
                    (ids[max(0, i - config.window) : i], ids[i + 1 : i + 1 + config.window])
                )
                if not len(context):
                    continue
                center = int(ids[i])
                negatives = sampler.draw(rng, config.negative_samples)
                negatives = negatives[negatives != center]
                hidden = compose_inputs(w_word, buckets, token_buckets, context).mean(axis=0)
                loss, g_hidden, g_center, g_negatives = ns_position_grads(
                    hidden, w_out, center, negatives
                )
                w_out[center] -= lr * g_center
                np.subtract.at(w_out, negatives, lr * g_negatives)
                g_context = g_hidden / len(context)
                for token_id in context:
                    idx = token_buckets[token_id]
                    share = lr * g_context / (1 + len(idx))
                    w_word[token_id] -= share
                    np.subtract.at(buckets, idx, share)
                epoch_loss += loss
                trained += 1
        epoch_losses.append(epoch_loss / max(trained, 1))

    matrix = EmbeddingMatrix(w_word, w_out, vocab, epoch_losses)
    matrix.check_finite()
    if not np.all(np.isfinite(buckets)):
        raise NumericalError("n-gram bucket vectors contain non-finite values")
    return FastTextEmbeddings(matrix, table)
