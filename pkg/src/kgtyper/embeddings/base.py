"""Shared pieces of the embedding trainers.

All trainers accumulate in float64 (the gradient checks demand it), start
their input vectors uniform in [-0.5/dim, +0.5/dim] from a seeded
generator, and keep the output/context side at zero. Negative samples are
drawn from the unigram distribution raised to 3/4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from ..corpus import Sentence, Vocabulary
from ..errors import DataError, NumericalError

LR_FLOOR_FACTOR = 1e-4  # learning rate decays linearly to 1e-4 of initial
NEGATIVE_POWER = 0.75


@dataclass
class TrainingConfig:
    """Hyperparameters shared by all trainers.

    The vector dimension is the headline setting; the rest are standard
    defaults for the underlying methods (a 3-token sentence is fully
    covered by window 2).
    """

    dimension: int = 100
    window: int = 2
    epochs: int = 5
    initial_learning_rate: float = 0.05
    negative_samples: int = 5
    seed: int = 1

    def validate(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.initial_learning_rate <= 0:
            raise ValueError("initial_learning_rate must be > 0")
        if self.negative_samples < 1:
            raise ValueError("negative_samples must be >= 1")


class TokenNotFoundError(DataError):
    def __init__(self, token: str):
        super().__init__(f"no vector for token: {token}")
        self.token = token


@dataclass
class EmbeddingMatrix:
    """Dense token-id -> vector map plus the context-side matrix.

    ``input_vectors`` holds whatever composition the trainer exports as
    its final vectors (CBOW: input + output sums; co-occurrence: w plus
    w-tilde); ``output_vectors`` keeps the raw context side for
    inspection.
    """

    input_vectors: np.ndarray
    output_vectors: np.ndarray
    vocabulary: Vocabulary
    epoch_losses: list[float] = field(default_factory=list)

    def __contains__(self, token: str) -> bool:
        return token in self.vocabulary

    def vector_of(self, token: str) -> np.ndarray:
        if token not in self.vocabulary:
            raise TokenNotFoundError(token)
        return self.input_vectors[self.vocabulary.id_of(token)]

    @property
    def dimension(self) -> int:
        return self.input_vectors.shape[1]

    def check_finite(self) -> None:
        if not (
            np.all(np.isfinite(self.input_vectors))
            and np.all(np.isfinite(self.output_vectors))
        ):
            raise NumericalError("embedding matrices contain non-finite values")


def init_input_vectors(
    rng: np.random.Generator, count: int, dimension: int
) -> np.ndarray:
    bound = 0.5 / dimension
    return rng.uniform(-bound, bound, size=(count, dimension))


class UnigramSampler:
    """Negative sampler over the vocabulary's unigram^(3/4) distribution."""

    def __init__(self, vocab: Vocabulary, power: float = NEGATIVE_POWER):
        weights = np.asarray(vocab.frequency, dtype=np.float64) ** power
        total = weights.sum()
        if total <= 0:
            raise DataError("cannot build negative sampler over empty vocabulary")
        self._cumulative = np.cumsum(weights / total)
        self._cumulative[-1] = 1.0

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return np.searchsorted(self._cumulative, rng.random(count), side="right")


def encode_corpus(corpus: Iterable[Sentence], vocab: Vocabulary) -> list[np.ndarray]:
    """Map sentences to id arrays, dropping out-of-vocabulary tokens."""
    token_to_id = vocab.token_to_id
    encoded = []
    for sentence in corpus:
        ids = [token_to_id[t] for t in sentence if t in token_to_id]
        encoded.append(np.asarray(ids, dtype=np.intp))
    return encoded


def iter_positions(
    encoded: Sequence[np.ndarray], window: int
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (center id, context ids) for every position with context."""
    for ids in encoded:
        n = len(ids)
        for i in range(n):
            context = np.concatenate((ids[max(0, i - window) : i], ids[i + 1 : i + 1 + window]))
            if len(context):
                yield int(ids[i]), context


def _softplus(x: np.ndarray | float) -> np.ndarray | float:
    return np.logaddexp(0.0, x)


def _sigmoid(x: np.ndarray | float) -> np.ndarray | float:
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def ns_position_loss(
    hidden: np.ndarray, w_out: np.ndarray, center: int, negatives: np.ndarray
) -> float:
    """Negative-sampling loss of one position given its context average."""
    s_pos = w_out[center] @ hidden
    s_neg = w_out[negatives] @ hidden
    return float(_softplus(-s_pos) + _softplus(s_neg).sum())


def ns_position_grads(
    hidden: np.ndarray, w_out: np.ndarray, center: int, negatives: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Loss plus gradients of one negative-sampling step.

    Returns ``(loss, g_hidden, g_center_row, g_negative_rows)`` where the
    row gradients are with respect to the output vectors of the center and
    each negative (one row per drawn negative, duplicates included).
    """
    u_pos = w_out[center]
    u_neg = w_out[negatives]
    s_pos = u_pos @ hidden
    s_neg = u_neg @ hidden
    loss = float(_softplus(-s_pos) + _softplus(s_neg).sum())
    coef_pos = _sigmoid(s_pos) - 1.0  # d loss / d s_pos
    coef_neg = _sigmoid(s_neg)  # d loss / d s_neg
    g_hidden = coef_pos * u_pos + coef_neg @ u_neg
    g_center = coef_pos * hidden
    g_negatives = np.outer(coef_neg, hidden)
    return loss, g_hidden, g_center, g_negatives


def linear_lr(initial: float, step: int, total_steps: int) -> float:
    """Linear decay over the whole run, floored at 1e-4 of the initial rate."""
    return initial * max(LR_FLOOR_FACTOR, 1.0 - step / max(total_steps, 1))
