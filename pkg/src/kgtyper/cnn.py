"""1D convolutional multi-label classifier over entity vectors.

The entity's embedding is the input sequence itself: one channel of
length ``dimension``, convolved with a bank of filters per kernel width
(valid padding, ReLU, global max pool), concatenated, passed through one
fully connected ReLU layer and a sigmoid output layer. Targets are
one-hot over the fine-grained classes and the loss is the mean per-class
binary cross-entropy; evaluation takes the argmax.

Raw embedding coordinates are small (roughly 0.1 in magnitude), which
leaves the initial logits so close to zero that gradient steps stall in
the all-classes-at-base-rate regime. The trainer therefore standardizes
each input coordinate on the training set and records the shift and
scale on the model, so prediction applies the same conditioning;
hand-constructed models default to the identity.

Backpropagation is hand-rolled in numpy so the analytic gradients can be
validated against central finite differences.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DataError, NumericalError
from .prediction import Prediction

logger = logging.getLogger(__name__)

_MAGIC = b"KGTYPER-CNN:v1\n"


@dataclass
class CnnConfig:
    """Architecture and training settings of the classifier."""

    kernel_widths: tuple[int, ...] = (3, 4, 6)
    filters_per_width: int = 128
    hidden_units: int = 125
    batch_size: int = 32
    epochs: int = 1000
    learning_rate: float = 0.01
    seed: int = 1

    def validate(self, input_dim: int | None = None) -> None:
        if not self.kernel_widths:
            raise ValueError("need at least one kernel width")
        if min(self.kernel_widths) < 1:
            raise ValueError("kernel widths must be >= 1")
        if input_dim is not None and max(self.kernel_widths) > input_dim:
            raise ValueError(
                f"kernel width {max(self.kernel_widths)} exceeds input length {input_dim}"
            )
        for name in ("filters_per_width", "hidden_units", "batch_size", "epochs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")

    @property
    def pooled_features(self) -> int:
        return len(self.kernel_widths) * self.filters_per_width


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def _bce_mean(logits: np.ndarray, targets: np.ndarray) -> float:
    """Mean per-class binary cross-entropy, computed from logits."""
    per_element = targets * np.logaddexp(0.0, -logits) + (1.0 - targets) * np.logaddexp(
        0.0, logits
    )
    return float(per_element.mean())


class CnnModel:
    """Parameters of the classifier plus the class <-> output-position map."""

    def __init__(
        self,
        config: CnnConfig,
        classes: list[str],
        conv_w: dict[int, np.ndarray],
        conv_b: dict[int, np.ndarray],
        hidden_w: np.ndarray,
        hidden_b: np.ndarray,
        out_w: np.ndarray,
        out_b: np.ndarray,
    ):
        self.config = config
        self.classes = list(classes)
        self.class_index = {c: i for i, c in enumerate(self.classes)}
        if len(self.class_index) != len(self.classes):
            raise DataError("duplicate class in class index")
        self.conv_w = conv_w
        self.conv_b = conv_b
        self.hidden_w = hidden_w
        self.hidden_b = hidden_b
        self.out_w = out_w
        self.out_b = out_b
        # Optional input conditioning fitted on the training set: inputs
        # are shifted and scaled per coordinate before the first
        # convolution. None means identity (hand-built models).
        self.feature_shift: np.ndarray | None = None
        self.feature_scale: np.ndarray | None = None
        self.epoch_losses: list[float] = []
        self.skipped_examples = 0

    @classmethod
    def initialize(
        cls, config: CnnConfig, classes: list[str], input_dim: int, rng: np.random.Generator
    ) -> "CnnModel":
        """Glorot-uniform weights, zero biases, classes in sorted order."""
        config.validate(input_dim)
        classes = sorted(classes)

        def glorot(fan_in, fan_out, shape):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            return rng.uniform(-bound, bound, size=shape)

        conv_w = {}
        conv_b = {}
        for w in config.kernel_widths:
            conv_w[w] = glorot(w, config.filters_per_width, (config.filters_per_width, w))
            conv_b[w] = np.zeros(config.filters_per_width)
        hidden_w = glorot(
            config.pooled_features,
            config.hidden_units,
            (config.pooled_features, config.hidden_units),
        )
        out_w = glorot(config.hidden_units, len(classes), (config.hidden_units, len(classes)))
        return cls(
            config,
            classes,
            conv_w,
            conv_b,
            hidden_w,
            np.zeros(config.hidden_units),
            out_w,
            np.zeros(len(classes)),
        )

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def parameter_arrays(self) -> list[tuple[str, np.ndarray]]:
        """All trainable arrays in a fixed order (shared by SGD and checks)."""
        arrays: list[tuple[str, np.ndarray]] = []
        for w in self.config.kernel_widths:
            arrays.append((f"conv_w_{w}", self.conv_w[w]))
            arrays.append((f"conv_b_{w}", self.conv_b[w]))
        arrays.extend(
            [
                ("hidden_w", self.hidden_w),
                ("hidden_b", self.hidden_b),
                ("out_w", self.out_w),
                ("out_b", self.out_b),
            ]
        )
        return arrays

    def condition(self, inputs: np.ndarray) -> np.ndarray:
        """Apply the fitted per-coordinate shift and scale, if any."""
        if self.feature_shift is None:
            return inputs
        return (inputs - self.feature_shift) * self.feature_scale

    def fit_conditioning(self, inputs: np.ndarray) -> None:
        """Standardize each input coordinate to zero mean and unit spread,
        measured on the given training design matrix."""
        self.feature_shift = inputs.mean(axis=0)
        self.feature_scale = 1.0 / np.maximum(inputs.std(axis=0), 1e-8)

    def _forward_cached(self, inputs: np.ndarray) -> dict:
        inputs = self.condition(inputs)
        cache: dict = {"inputs": inputs}
        pooled_parts = []
        for w in self.config.kernel_widths:
            windows = sliding_window_view(inputs, w, axis=1)  # (N, P, w)
            pre = windows @ self.conv_w[w].T + self.conv_b[w]  # (N, P, F)
            act = np.maximum(pre, 0.0)
            argmax = act.argmax(axis=1)  # (N, F); first index wins ties
            pooled = np.take_along_axis(act, argmax[:, None, :], axis=1)[:, 0, :]
            cache[w] = (windows, pre, argmax)
            pooled_parts.append(pooled)
        features = np.concatenate(pooled_parts, axis=1)  # (N, pooled_features)
        hidden_pre = features @ self.hidden_w + self.hidden_b
        hidden = np.maximum(hidden_pre, 0.0)
        logits = hidden @ self.out_w + self.out_b
        cache.update(features=features, hidden_pre=hidden_pre, hidden=hidden, logits=logits)
        return cache

    def forward(self, inputs: np.ndarray) -> np.ndarray:
        """Per-class sigmoid scores for a batch of entity vectors (N, dim)."""
        inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
        if max(self.config.kernel_widths) > inputs.shape[1]:
            raise DataError(
                f"input length {inputs.shape[1]} shorter than kernel width "
                f"{max(self.config.kernel_widths)}"
            )
        return _sigmoid(self._forward_cached(inputs)["logits"])

    def predict(self, entity: str, vector: np.ndarray) -> Prediction:
        scores = self.forward(vector)[0]
        return Prediction.from_scores(
            entity, {c: float(scores[i]) for i, c in enumerate(self.classes)}
        )

    def loss(self, inputs: np.ndarray, targets: np.ndarray) -> float:
        return _bce_mean(self._forward_cached(np.atleast_2d(inputs))["logits"], targets)

    def loss_and_grads(
        self, inputs: np.ndarray, targets: np.ndarray
    ) -> tuple[float, dict[str, np.ndarray]]:
        """Mean BCE plus analytic gradients for every parameter array."""
        inputs = np.atleast_2d(inputs)
        cache = self._forward_cached(inputs)
        logits = cache["logits"]
        n, c = logits.shape
        loss = _bce_mean(logits, targets)

        d_logits = (_sigmoid(logits) - targets) / (n * c)
        grads: dict[str, np.ndarray] = {
            "out_w": cache["hidden"].T @ d_logits,
            "out_b": d_logits.sum(axis=0),
        }
        d_hidden = d_logits @ self.out_w.T
        d_hidden_pre = d_hidden * (cache["hidden_pre"] > 0.0)
        grads["hidden_w"] = cache["features"].T @ d_hidden_pre
        grads["hidden_b"] = d_hidden_pre.sum(axis=0)

        d_features = d_hidden_pre @ self.hidden_w.T
        offset = 0
        filters = self.config.filters_per_width
        for w in self.config.kernel_widths:
            d_pool = d_features[:, offset : offset + filters]  # (N, F)
            offset += filters
            windows, pre, argmax = cache[w]
            d_act = np.zeros_like(pre)
            np.put_along_axis(d_act, argmax[:, None, :], d_pool[:, None, :], axis=1)
            d_pre = d_act * (pre > 0.0)
            grads[f"conv_w_{w}"] = np.einsum("npf,npw->fw", d_pre, windows)
            grads[f"conv_b_{w}"] = d_pre.sum(axis=(0, 1))
        return loss, grads

    def _persisted_arrays(self) -> list[tuple[str, np.ndarray]]:
        arrays = self.parameter_arrays()
        if self.feature_shift is not None:
            arrays.append(("feature_shift", self.feature_shift))
            arrays.append(("feature_scale", self.feature_scale))
        return arrays

    def check_finite(self) -> None:
        for name, array in self._persisted_arrays():
            if not np.all(np.isfinite(array)):
                raise NumericalError(f"non-finite values in {name}")

    def save(self, path) -> None:
        """Versioned header (JSON) followed by raw little-endian float64 blobs."""
        arrays = self._persisted_arrays()
        header = {
            "format_version": 1,
            "config": {
                "kernel_widths": list(self.config.kernel_widths),
                "filters_per_width": self.config.filters_per_width,
                "hidden_units": self.config.hidden_units,
                "batch_size": self.config.batch_size,
                "epochs": self.config.epochs,
                "learning_rate": self.config.learning_rate,
                "seed": self.config.seed,
            },
            "classes": self.classes,
            "arrays": [{"name": name, "shape": list(a.shape)} for name, a in arrays],
        }
        with open(path, "wb") as handle:
            handle.write(_MAGIC)
            handle.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
            for _, array in arrays:
                handle.write(np.ascontiguousarray(array, dtype="<f8").tobytes())

    @classmethod
    def load(cls, path) -> "CnnModel":
        with open(path, "rb") as handle:
            magic = handle.readline()
            if magic != _MAGIC:
                raise DataError(f"{path}: not a classifier model file")
            try:
                header = json.loads(handle.readline().decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise DataError(f"{path}: corrupt model header: {exc}") from None
            cfg = header["config"]
            config = CnnConfig(
                kernel_widths=tuple(cfg["kernel_widths"]),
                filters_per_width=cfg["filters_per_width"],
                hidden_units=cfg["hidden_units"],
                batch_size=cfg["batch_size"],
                epochs=cfg["epochs"],
                learning_rate=cfg["learning_rate"],
                seed=cfg["seed"],
            )
            loaded: dict[str, np.ndarray] = {}
            for spec in header["arrays"]:
                shape = tuple(spec["shape"])
                count = int(np.prod(shape)) if shape else 1
                raw = handle.read(count * 8)
                if len(raw) != count * 8:
                    raise DataError(f"{path}: truncated model file at {spec['name']}")
                loaded[spec["name"]] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
        conv_w = {w: loaded[f"conv_w_{w}"] for w in config.kernel_widths}
        conv_b = {w: loaded[f"conv_b_{w}"] for w in config.kernel_widths}
        model = cls(
            config,
            header["classes"],
            conv_w,
            conv_b,
            loaded["hidden_w"],
            loaded["hidden_b"],
            loaded["out_w"],
            loaded["out_b"],
        )
        if "feature_shift" in loaded:
            model.feature_shift = loaded["feature_shift"]
            model.feature_scale = loaded["feature_scale"]
        return model


def train_cnn(examples, embeddings, config: CnnConfig) -> CnnModel:
    """Mini-batch SGD over a seeded shuffle of the labeled entities.

    ``examples`` is a sequence of (entity IRI, gold class IRI) pairs;
    entities without a vector are skipped and counted on the returned
    model. Mean per-element loss is recorded per epoch.
    """
    examples = list(examples)
    if not examples:
        raise DataError("empty training split")
    vectors = []
    labels = []
    skipped = 0
    for entity, class_iri in examples:
        if entity not in embeddings:
            skipped += 1
            continue
        vectors.append(np.asarray(embeddings.vector_of(entity), dtype=np.float64))
        labels.append(class_iri)
    if not vectors:
        raise DataError("no training entity has an embedding vector")
    if skipped:
        logger.warning("skipped %d training entities without vectors", skipped)

    classes = sorted(set(labels))
    if len(classes) < 2:
        raise DataError("training requires at least 2 distinct classes")
    inputs = np.vstack(vectors)
    config.validate(inputs.shape[1])

    rng = np.random.default_rng(config.seed)
    model = CnnModel.initialize(config, classes, inputs.shape[1], rng)
    model.fit_conditioning(inputs)
    model.skipped_examples = skipped
    index = model.class_index
    targets = np.zeros((len(labels), len(classes)))
    targets[np.arange(len(labels)), [index[c] for c in labels]] = 1.0

    params = model.parameter_arrays()
    for _ in range(config.epochs):
        order = rng.permutation(len(labels))
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            loss, grads = model.loss_and_grads(inputs[batch], targets[batch])
            for name, array in params:
                array -= config.learning_rate * grads[name]
            epoch_loss += loss * len(batch)
        model.epoch_losses.append(epoch_loss / len(labels))
    model.check_finite()
    return model
