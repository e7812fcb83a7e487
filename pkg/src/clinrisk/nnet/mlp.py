"""Feed-forward two-logit classifier with hand-derived gradients."""

import json
import logging
import os
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from clinrisk.nnet.losses import UNIT_WEIGHTS, CostWeights, cs_logit_gradient, cs_loss_per_sample

logger = logging.getLogger(__name__)

DEFAULT_HIDDEN = (64, 64)
CHECKPOINT_FORMAT = "clinrisk-mlp/1"


class NonFiniteError(FloatingPointError):
    """Raised when a forward or backward pass produces non-finite values."""

    def __init__(self, message: str, layer: int) -> None:
        super().__init__(f"{message} (layer {layer})")
        self.layer = layer


@dataclass(frozen=True, eq=False)
class MlpParams:
    """Layer weights ``(fan_in, fan_out)`` and biases ``(fan_out,)``.

    Hidden layers use the rectifier; the last layer emits two logits. The same type
    holds gradients, which mirror the parameter shapes.
    """

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        weights = tuple(np.asarray(w, dtype=np.float64) for w in self.weights)
        biases = tuple(np.asarray(b, dtype=np.float64) for b in self.biases)
        if not weights or len(weights) != len(biases):
            raise ValueError(
                f"{len(weights)} weight matrices but {len(biases)} bias vectors"
            )
        for k, (w, b) in enumerate(zip(weights, biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ValueError(f"Layer {k} weight {w.shape} / bias {b.shape} mismatch")
            if k > 0 and weights[k - 1].shape[1] != w.shape[0]:
                raise ValueError(
                    f"Layer {k} fan_in {w.shape[0]} does not chain from "
                    f"fan_out {weights[k - 1].shape[1]}"
                )
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise NonFiniteError("Non-finite parameter", layer=k)
        if weights[-1].shape[1] != 2:
            raise ValueError(f"Final layer must emit 2 logits, not {weights[-1].shape[1]}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "biases", biases)

    @property
    def n_layers(self) -> int:
        """Number of affine layers."""
        return len(self.weights)

    @property
    def n_features(self) -> int:
        """Expected input width."""
        return self.weights[0].shape[0]

    def arrays(self) -> list[np.ndarray]:
        """Flat list ``[W0, b0, W1, b1, ...]``."""
        return [a for pair in zip(self.weights, self.biases) for a in pair]

    @classmethod
    def from_arrays(cls, arrays: Sequence[np.ndarray]) -> "MlpParams":
        """Inverse of :meth:`arrays`."""
        return cls(weights=tuple(arrays[0::2]), biases=tuple(arrays[1::2]))

    def scaled(self, factor: float) -> "MlpParams":
        """Every entry multiplied by ``factor``."""
        return MlpParams.from_arrays([a * factor for a in self.arrays()])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MlpParams):
            return NotImplemented
        mine, theirs = self.arrays(), other.arrays()
        return len(mine) == len(theirs) and all(
            a.shape == b.shape and np.array_equal(a, b) for a, b in zip(mine, theirs)
        )

    __hash__ = None


def init_mlp(
    n_features: int,
    rng: np.random.Generator,
    hidden_sizes: Sequence[int] = DEFAULT_HIDDEN,
) -> MlpParams:
    """Initialize weights and biases uniformly in ``+-1/sqrt(fan_in)``.

    Args:
        n_features: Input width.
        rng: Seeded generator.
        hidden_sizes: Widths of the rectifier layers.
    """
    sizes = [n_features, *hidden_sizes, 2]
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return MlpParams(tuple(weights), tuple(biases))


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax, shifted by the row maximum."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class ForwardCache:
    """Layer inputs kept by :func:`forward_cached` for backpropagation."""

    inputs: tuple[np.ndarray, ...]
    logits: np.ndarray
    probs: np.ndarray


def _check_input(params: MlpParams, features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[1] != params.n_features:
        raise ValueError(
            f"Expected features of shape (n, {params.n_features}), got {features.shape}"
        )
    if not np.isfinite(features).all():
        raise NonFiniteError("Non-finite input features", layer=0)
    return features


def forward_cached(params: MlpParams, features: np.ndarray) -> ForwardCache:
    """Forward pass that keeps every layer input."""
    activation = _check_input(params, features)
    inputs = []
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        inputs.append(activation)
        pre = activation @ w + b
        activation = pre if k == params.n_layers - 1 else np.maximum(pre, 0.0)
    logits = activation
    if not np.isfinite(logits).all():
        raise NonFiniteError("Non-finite logits", layer=params.n_layers - 1)
    return ForwardCache(tuple(inputs), logits, softmax(logits))


def forward(params: MlpParams, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Logits and softmax probabilities of every row of ``features``."""
    cache = forward_cached(params, features)
    return cache.logits, cache.probs


def backprop(params: MlpParams, cache: ForwardCache, dlogits: np.ndarray) -> MlpParams:
    """Propagate a logit gradient back through the network.

    Args:
        params: Parameters used for the forward pass.
        cache: The forward pass's cache.
        dlogits: Gradient of the objective w.r.t. the logits, ``(n, 2)``.

    Returns:
        Gradients of the objective with the shapes of ``params``.
    """
    grad_w = [None] * params.n_layers
    grad_b = [None] * params.n_layers
    delta = dlogits
    for k in reversed(range(params.n_layers)):
        layer_input = cache.inputs[k]
        grad_w[k] = layer_input.T @ delta
        grad_b[k] = delta.sum(axis=0)
        if not (np.isfinite(grad_w[k]).all() and np.isfinite(grad_b[k]).all()):
            raise NonFiniteError("Non-finite gradient", layer=k)
        if k > 0:
            # layer_input is the rectifier output of layer k-1
            delta = (delta @ params.weights[k].T) * (layer_input > 0.0)
    return MlpParams(tuple(grad_w), tuple(grad_b))


def loss_and_gradients(
    params: MlpParams,
    features: np.ndarray,
    labels: np.ndarray,
    weights: CostWeights = UNIT_WEIGHTS,
) -> tuple[float, MlpParams, np.ndarray]:
    """Mean cost-sensitive loss of a batch, its gradients and the batch probabilities.

    Args:
        params: Network parameters.
        features: Batch features.
        labels: Hard labels ``(n,)`` or soft targets ``(n, 2)``.
        weights: Class cost weights; ``(1, 1)`` gives plain cross-entropy.
    """
    if len(labels) == 0:
        raise ValueError("Cannot compute gradients of an empty batch")
    cache = forward_cached(params, features)
    loss = float(cs_loss_per_sample(cache.probs, labels, weights).mean())
    grads = backprop(params, cache, cs_logit_gradient(cache.probs, labels, weights))
    return loss, grads, cache.probs


def backward(
    params: MlpParams,
    features: np.ndarray,
    labels: np.ndarray,
    weights: CostWeights = UNIT_WEIGHTS,
) -> MlpParams:
    """Gradients of the mean cost-sensitive loss over a batch."""
    return loss_and_gradients(params, features, labels, weights)[1]


def predict(params: MlpParams, features: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Predict 1 iff the positive-class probability reaches ``threshold``."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"Threshold must lie in (0, 1), got {threshold}")
    _, probs = forward(params, features)
    return (probs[:, 1] >= threshold).astype(np.int64)


def params_to_dict(params: MlpParams) -> dict:
    """JSON-able checkpoint: layer shapes and row-major values."""
    return {
        "format": CHECKPOINT_FORMAT,
        "layers": [
            {
                "shape": list(w.shape),
                "weights": w.ravel().tolist(),
                "bias": b.tolist(),
            }
            for w, b in zip(params.weights, params.biases)
        ],
    }


def params_from_dict(checkpoint: dict) -> MlpParams:
    """Rebuild parameters from :func:`params_to_dict` output."""
    if checkpoint.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"Unknown checkpoint format {checkpoint.get('format')!r}")
    weights, biases = [], []
    for layer in checkpoint["layers"]:
        weights.append(np.array(layer["weights"], dtype=np.float64).reshape(layer["shape"]))
        biases.append(np.array(layer["bias"], dtype=np.float64))
    return MlpParams(tuple(weights), tuple(biases))


def save_params(params: MlpParams, path: Union[str, os.PathLike]) -> None:
    """Write a JSON checkpoint; float64 values round-trip bit-exactly."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(params_to_dict(params), f)


def load_params(path: Union[str, os.PathLike]) -> MlpParams:
    """Read a checkpoint written by :func:`save_params`."""
    with open(path, encoding="utf-8") as f:
        return params_from_dict(json.load(f))


__doc_title__ = "Multilayer Perceptron"
__all__ = [
    "MlpParams",
    "NonFiniteError",
    "ForwardCache",
    "init_mlp",
    "softmax",
    "forward",
    "forward_cached",
    "backprop",
    "backward",
    "loss_and_gradients",
    "predict",
    "save_params",
    "load_params",
    "params_to_dict",
    "params_from_dict",
]
