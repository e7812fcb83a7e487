"""Co-refinement, co-guessing, sharpening, mixup and the semi-supervised objective.

Soft labels are ``(n, 2)`` arrays whose rows lie on the probability simplex; a
single label is a length-2 vector.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from clinrisk.nnet.losses import (
    PROB_FLOOR,
    UNIT_WEIGHTS,
    CostWeights,
    cs_logit_gradient,
    cs_loss_per_sample,
    one_hot,
)
from clinrisk.nnet.mlp import softmax

logger = logging.getLogger(__name__)

SoftLabels = np.ndarray
SIMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class SemiConfig:
    """Hyperparameters of the semi-supervised stage.

    Args:
        temperature: Sharpening temperature ``T``.
        alpha: Mixup Beta concentration.
        n_augment: Augmented views per sample.
        aug_scale: Augmentation noise as a multiple of each feature's standard
            deviation.
        lambda_u: Final weight of the unlabeled loss.
        ramp_epochs: Epochs after warmup over which the unlabeled weight ramps up.
        sharpen_labeled: Also sharpen co-refined labeled targets.
    """

    temperature: float = 0.5
    alpha: float = 4.0
    n_augment: int = 2
    aug_scale: float = 0.1
    lambda_u: float = 25.0
    ramp_epochs: int = 16
    sharpen_labeled: bool = True

    def validate(self) -> None:
        """Raise ``ValueError`` on out-of-range hyperparameters."""
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not isinstance(self.n_augment, (int, np.integer)) or self.n_augment < 1:
            raise ValueError(f"n_augment must be an integer >= 1, got {self.n_augment!r}")
        if not self.aug_scale >= 0:
            raise ValueError(f"aug_scale must be non-negative, got {self.aug_scale}")
        if not self.lambda_u >= 0:
            raise ValueError(f"lambda_u must be non-negative, got {self.lambda_u}")
        if self.ramp_epochs < 1:
            raise ValueError(f"ramp_epochs must be at least 1, got {self.ramp_epochs}")


def check_simplex(labels: SoftLabels, name: str = "soft labels") -> SoftLabels:
    """Validate that every row is a distribution over the two classes."""
    labels = np.atleast_2d(np.asarray(labels, dtype=np.float64))
    if labels.shape[1] != 2:
        raise ValueError(f"{name} must have two columns, got shape {labels.shape}")
    if (labels < -SIMPLEX_TOL).any() or (labels > 1 + SIMPLEX_TOL).any():
        raise ValueError(f"{name} have entries outside [0, 1]")
    if np.abs(labels.sum(axis=1) - 1.0).max(initial=0.0) > SIMPLEX_TOL:
        raise ValueError(f"{name} rows must sum to one")
    return labels


def augment(
    features: np.ndarray, sigma: Union[float, np.ndarray], rng: np.random.Generator
) -> np.ndarray:
    """Add zero-mean Gaussian noise of scale ``sigma`` to each feature.

    Args:
        features: A row or a batch of rows.
        sigma: Scalar or per-dimension noise scale; zero returns the input unchanged.
        rng: Augmentation stream.
    """
    features = np.asarray(features, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    if (sigma < 0).any():
        raise ValueError("Augmentation scale must be non-negative")
    if not sigma.any():
        return features.copy()
    return features + rng.normal(size=features.shape) * sigma


def co_refine(
    observed_labels: np.ndarray, clean_posterior: np.ndarray, avg_pred: SoftLabels
) -> SoftLabels:
    """Blend observed labels with predictions: ``q = w * onehot(y) + (1 - w) * p``."""
    w = np.asarray(clean_posterior, dtype=np.float64).reshape(-1, 1)
    if ((w < 0) | (w > 1)).any():
        raise ValueError("Clean posteriors must lie in [0, 1]")
    avg_pred = check_simplex(avg_pred, "averaged predictions")
    return w * one_hot(np.atleast_1d(observed_labels)) + (1.0 - w) * avg_pred


def co_guess(predictions: Sequence[SoftLabels]) -> SoftLabels:
    """Average predictions from several networks and views, renormalized."""
    if len(predictions) == 0:
        raise ValueError("co_guess needs at least one prediction")
    mean = np.mean([np.atleast_2d(p) for p in predictions], axis=0)
    return mean / mean.sum(axis=1, keepdims=True)


def sharpen(probs: SoftLabels, temperature: float) -> SoftLabels:
    """Temperature sharpening ``q_k = p_k^(1/T) / sum_j p_j^(1/T)``.

    Entries are floored before the power, so zero probabilities are safe for any
    ``T``.
    """
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    probs = np.atleast_2d(np.asarray(probs, dtype=np.float64))
    return softmax(np.log(np.maximum(probs, PROB_FLOOR)) / temperature)


def mix_coefficient(alpha: float, rng: np.random.Generator) -> float:
    """Draw ``lam ~ Beta(alpha, alpha)`` and return ``max(lam, 1 - lam)``."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    lam = rng.beta(alpha, alpha)
    return float(max(lam, 1.0 - lam))


def mixup(
    first: tuple[np.ndarray, SoftLabels],
    second: tuple[np.ndarray, SoftLabels],
    alpha: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, SoftLabels, float]:
    """Convexly mix two (features, soft labels) samples or batches.

    One coefficient is drawn per call and applied to features and labels alike;
    since it is at least 0.5 the result stays closer to ``first``.

    Returns:
        Mixed features, mixed soft labels and the coefficient used.
    """
    lam = mix_coefficient(alpha, rng)
    features = lam * np.asarray(first[0]) + (1.0 - lam) * np.asarray(second[0])
    labels = lam * np.asarray(first[1]) + (1.0 - lam) * np.asarray(second[1])
    return features, labels, lam


def lambda_u_at(progress: float, warmup_epochs: int, config: SemiConfig) -> float:
    """Unlabeled-loss weight ramping linearly from 0 after warmup.

    Args:
        progress: Fractional epoch, e.g. ``epoch + batch / n_batches``.
        warmup_epochs: Epochs before the semi-supervised stage starts.
        config: Semi-supervised hyperparameters.
    """
    ramp = np.clip((progress - warmup_epochs) / config.ramp_epochs, 0.0, 1.0)
    return float(config.lambda_u * ramp)


def semi_loss_terms(
    labeled_probs: np.ndarray,
    labeled_targets: SoftLabels,
    unlabeled_probs: np.ndarray,
    unlabeled_targets: SoftLabels,
    weights: CostWeights = UNIT_WEIGHTS,
) -> tuple[float, float]:
    """Labeled soft cross-entropy and unlabeled squared error, separately."""
    if len(labeled_probs) == 0:
        raise ValueError("semi_loss needs a nonempty labeled batch")
    labeled_term = float(cs_loss_per_sample(labeled_probs, labeled_targets, weights).mean())
    if len(unlabeled_probs) == 0:
        return labeled_term, 0.0
    residual = np.asarray(unlabeled_probs) - np.asarray(unlabeled_targets)
    return labeled_term, float(np.mean(residual**2))


def semi_loss(
    labeled_probs: np.ndarray,
    labeled_targets: SoftLabels,
    unlabeled_probs: np.ndarray,
    unlabeled_targets: SoftLabels,
    lambda_u: float,
    weights: CostWeights = UNIT_WEIGHTS,
) -> float:
    """Semi-supervised objective ``Lx + lambda_u * Lu``.

    ``Lx`` is the mean soft-target cross-entropy of the labeled batch, each sample
    weighted by its expected class weight ``q0 * w0 + q1 * w1``; ``Lu`` is the mean
    squared error between unlabeled probabilities and guessed targets over every
    entry.
    """
    if not lambda_u >= 0:
        raise ValueError(f"lambda_u must be non-negative, got {lambda_u}")
    labeled_term, unlabeled_term = semi_loss_terms(
        labeled_probs, labeled_targets, unlabeled_probs, unlabeled_targets, weights
    )
    return labeled_term + lambda_u * unlabeled_term


def semi_loss_logit_gradient(
    labeled_probs: np.ndarray,
    labeled_targets: SoftLabels,
    unlabeled_probs: np.ndarray,
    unlabeled_targets: SoftLabels,
    lambda_u: float,
    weights: CostWeights = UNIT_WEIGHTS,
) -> tuple[np.ndarray, np.ndarray]:
    """Gradients of :func:`semi_loss` w.r.t. the labeled and unlabeled logits."""
    labeled_grad = cs_logit_gradient(labeled_probs, labeled_targets, weights)
    unlabeled_probs = np.asarray(unlabeled_probs, dtype=np.float64)
    if unlabeled_probs.shape[0] == 0:
        return labeled_grad, np.zeros_like(unlabeled_probs)
    # d/dp of mean squared error over n_u * 2 entries
    dprobs = lambda_u * (unlabeled_probs - unlabeled_targets) / unlabeled_probs.shape[0]
    inner = np.sum(dprobs * unlabeled_probs, axis=1, keepdims=True)
    return labeled_grad, unlabeled_probs * (dprobs - inner)


__doc_title__ = "MixMatch Components"
__all__ = [
    "SemiConfig",
    "SoftLabels",
    "check_simplex",
    "augment",
    "co_refine",
    "co_guess",
    "sharpen",
    "mix_coefficient",
    "mixup",
    "lambda_u_at",
    "semi_loss_terms",
    "semi_loss",
    "semi_loss_logit_gradient",
]
