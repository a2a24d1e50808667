"""Continuous bag-of-words trainer with negative sampling.

One stochastic gradient step per token position: the in-window context
input vectors are averaged, the center token is scored against that
average through a sigmoid, and the negative-sampling objective

    L = -log sigmoid(u_c . h) - sum_n log sigmoid(-u_n . h)

is minimized, with the context gradient split evenly over the averaged
context rows. Training is single-threaded and bitwise deterministic for a
fixed seed.

The exported vector of a token is the sum of its input and output rows,
the same convention the co-occurrence trainer uses for w + w-tilde; the
sum averages out per-side sampling noise, which matters on small corpora
where each entity token is seen only a handful of times.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..corpus import Sentence, Vocabulary
from ..errors import DataError
from .base import (
    EmbeddingMatrix,
    TrainingConfig,
    UnigramSampler,
    encode_corpus,
    init_input_vectors,
    iter_positions,
    linear_lr,
    ns_position_grads,
    ns_position_loss,
)

# A training sample freezes the sampled negatives together with the
# position; the gradient check recomputes the loss from the same samples.
Sample = tuple[int, np.ndarray, np.ndarray]  # (center, context ids, negative ids)


def context_average(w_in: np.ndarray, context_ids: np.ndarray) -> np.ndarray:
    """Mean of the context input vectors (the CBOW hidden state)."""
    return w_in[context_ids].mean(axis=0)


def cbow_loss(w_in: np.ndarray, w_out: np.ndarray, samples: Sequence[Sample]) -> float:
    """Total negative-sampling loss over fixed samples (for checking)."""
    total = 0.0
    for center, context, negatives in samples:
        total += ns_position_loss(context_average(w_in, context), w_out, center, negatives)
    return total


def cbow_loss_and_grads(
    w_in: np.ndarray, w_out: np.ndarray, samples: Sequence[Sample]
) -> tuple[float, np.ndarray, np.ndarray]:
    """Loss and dense analytic gradients over fixed samples."""
    g_in = np.zeros_like(w_in)
    g_out = np.zeros_like(w_out)
    total = 0.0
    for center, context, negatives in samples:
        hidden = context_average(w_in, context)
        loss, g_hidden, g_center, g_negatives = ns_position_grads(
            hidden, w_out, center, negatives
        )
        total += loss
        np.add.at(g_in, context, g_hidden / len(context))
        g_out[center] += g_center
        np.add.at(g_out, negatives, g_negatives)
    return total, g_in, g_out


def train_cbow(
    corpus: Iterable[Sentence], vocab: Vocabulary, config: TrainingConfig
) -> EmbeddingMatrix:
    """Train input/output vectors for every vocabulary token.

    The learning rate decays linearly over ``total positions x epochs``
    down to 1e-4 of the initial rate. Negatives drawn equal to the center
    token are dropped for that step. Mean per-position loss is recorded
    per epoch on the returned matrix, whose served vectors are the
    input + output sums.
    """
    config.validate()
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
    w_in = init_input_vectors(rng, len(vocab), config.dimension)
    w_out = np.zeros((len(vocab), config.dimension))
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
                hidden = context_average(w_in, context)
                loss, g_hidden, g_center, g_negatives = ns_position_grads(
                    hidden, w_out, center, negatives
                )
                w_out[center] -= lr * g_center
                np.subtract.at(w_out, negatives, lr * g_negatives)
                np.subtract.at(w_in, context, lr * g_hidden / len(context))
                epoch_loss += loss
                trained += 1
        epoch_losses.append(epoch_loss / max(trained, 1))

    matrix = EmbeddingMatrix(w_in + w_out, w_out, vocab, epoch_losses)
    matrix.check_finite()
    return matrix
