"""Plain and cost-sensitive cross-entropy on two-class probabilities."""

from dataclasses import dataclass

import numpy as np

#: Floor applied to probabilities inside the logarithm.
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class CostWeights:
    """Per-class loss weights; ``(1, 1)`` is plain cross-entropy.

    Args:
        w0: Weight of class 0 (benign).
        w1: Weight of class 1 (malignant).
    """

    w0: float = 1.0
    w1: float = 1.0

    def __post_init__(self) -> None:
        if not (self.w0 > 0 and self.w1 > 0):
            raise ValueError(f"Cost weights must be positive, got ({self.w0}, {self.w1})")

    def as_array(self) -> np.ndarray:
        """Weights as ``[w0, w1]``."""
        return np.array([self.w0, self.w1], dtype=np.float64)

    def expected(self, targets: np.ndarray) -> np.ndarray:
        """Expected weight ``q0 * w0 + q1 * w1`` of each soft target row."""
        return np.asarray(targets, dtype=np.float64) @ self.as_array()


UNIT_WEIGHTS = CostWeights(1.0, 1.0)


def one_hot(labels: np.ndarray) -> np.ndarray:
    """Two-class one-hot rows of integer labels."""
    labels = np.asarray(labels)
    out = np.zeros((labels.shape[0], 2), dtype=np.float64)
    out[np.arange(labels.shape[0]), labels.astype(np.int64)] = 1.0
    return out


def as_targets(labels: np.ndarray) -> np.ndarray:
    """Accept hard labels ``(n,)`` or soft targets ``(n, 2)`` and return soft targets."""
    labels = np.asarray(labels)
    if labels.ndim == 1:
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise ValueError("Hard labels must be binary (0/1)")
        return one_hot(labels)
    if labels.ndim == 2 and labels.shape[1] == 2:
        return labels.astype(np.float64, copy=False)
    raise ValueError(f"Targets must have shape (n,) or (n, 2), got {labels.shape}")


def cs_loss_per_sample(
    probs: np.ndarray, labels: np.ndarray, weights: CostWeights = UNIT_WEIGHTS
) -> np.ndarray:
    """Cost-sensitive cross-entropy of each sample.

    ``loss_i = -w_{y_i} * ln(p_i[y_i])`` for hard labels. Soft targets ``q_i`` use the
    expected weight ``w(q_i)`` and the soft cross-entropy ``-sum_k q_ik ln p_ik``,
    which reduce to the hard form on one-hot rows. Probabilities are floored at
    :data:`PROB_FLOOR` inside the logarithm.
    """
    probs = np.asarray(probs, dtype=np.float64)
    targets = as_targets(labels)
    if probs.shape != targets.shape:
        raise ValueError(f"probs {probs.shape} do not match targets {targets.shape}")
    log_p = np.log(np.maximum(probs, PROB_FLOOR))
    return -weights.expected(targets) * np.sum(targets * log_p, axis=1)


def cross_entropy_per_sample(probs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Unweighted cross-entropy of each sample."""
    return cs_loss_per_sample(probs, labels, UNIT_WEIGHTS)


def cs_logit_gradient(
    probs: np.ndarray, labels: np.ndarray, weights: CostWeights = UNIT_WEIGHTS
) -> np.ndarray:
    """Gradient of the batch-mean cost-sensitive loss w.r.t. the logits.

    ``d/dz_i = w(q_i) * (p_i - q_i) / n`` (soft targets sum to one).
    """
    targets = as_targets(labels)
    n = targets.shape[0]
    return weights.expected(targets)[:, None] * (probs - targets) / n


__doc_title__ = "Losses"
__all__ = [
    "CostWeights",
    "UNIT_WEIGHTS",
    "PROB_FLOOR",
    "one_hot",
    "as_targets",
    "cs_loss_per_sample",
    "cross_entropy_per_sample",
    "cs_logit_gradient",
]
