"""Two-component 1-D Gaussian mixture over per-sample losses."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm

logger = logging.getLogger(__name__)

VARIANCE_FLOOR = 1e-6


class DegenerateLossError(ValueError):
    """Raised when losses carry no information to separate; select every sample."""


@dataclass(frozen=True)
class Gmm1d:
    """Fitted mixture with the low-loss (clean) component first.

    Args:
        means: ``(mu_clean, mu_noisy)`` with ``mu_clean <= mu_noisy``.
        variances: ``(var_clean, var_noisy)``, each at least the variance floor.
        weights: ``(pi_clean, pi_noisy)`` summing to one.
        log_likelihoods: Mean per-sample log-likelihood after initialization and
            after every EM iteration.
        converged: Whether the improvement dropped below the tolerance.
    """

    means: tuple[float, float]
    variances: tuple[float, float]
    weights: tuple[float, float]
    log_likelihoods: tuple[float, ...] = field(default=(), compare=False)
    converged: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if self.means[0] > self.means[1]:
            raise ValueError(f"Clean component must have the lower mean, got {self.means}")
        if min(self.variances) <= 0:
            raise ValueError(f"Variances must be positive, got {self.variances}")
        if min(self.weights) < 0 or abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError(f"Mixing weights must be a distribution, got {self.weights}")

    @property
    def pi_clean(self) -> float:
        """Estimated clean mass."""
        return self.weights[0]

    @property
    def n_iter(self) -> int:
        """Number of EM iterations run."""
        return max(len(self.log_likelihoods) - 1, 0)

    def component_log_joint(self, losses: np.ndarray) -> np.ndarray:
        """``log pi_k + log N(loss; mu_k, var_k)`` as an ``(n, 2)`` array."""
        losses = np.asarray(losses, dtype=np.float64)
        return np.stack(
            [
                np.log(self.weights[k])
                + norm.logpdf(losses, self.means[k], np.sqrt(self.variances[k]))
                for k in (0, 1)
            ],
            axis=1,
        )


def _estimate(
    losses: np.ndarray, resp: np.ndarray, var_floor: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    totals = np.maximum(resp.sum(axis=0), np.finfo(np.float64).tiny)
    means = resp.T @ losses / totals
    variances = np.einsum("nk,nk->k", resp, (losses[:, None] - means) ** 2) / totals
    return means, np.maximum(variances, var_floor), totals / totals.sum()


def _log_joint(
    losses: np.ndarray, means: np.ndarray, variances: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    with np.errstate(divide="ignore"):
        log_weights = np.log(weights)
    return log_weights + norm.logpdf(losses[:, None], means, np.sqrt(variances))


def fit_gmm_em(
    losses: Sequence[float],
    tol: float = 1e-6,
    max_iter: int = 100,
    var_floor: float = VARIANCE_FLOOR,
) -> Gmm1d:
    """Fit a two-component Gaussian mixture to losses by expectation-maximization.

    The mixture is initialized by splitting the sorted losses at the median (the lower
    ``n // 2`` versus the rest) and taking each half's mean and variance. Iteration
    stops once the mean log-likelihood improves by less than ``tol`` or after
    ``max_iter`` iterations. Variances are floored at ``var_floor``, which keeps the
    likelihood non-decreasing.

    Args:
        losses: Per-sample losses, usually min-max normalized.
        tol: Convergence threshold on the mean log-likelihood improvement.
        max_iter: Maximum EM iterations.
        var_floor: Lower bound on component variances.

    Raises:
        DegenerateLossError: Fewer than two distinct loss values.
    """
    losses = np.asarray(losses, dtype=np.float64)
    if losses.ndim != 1:
        raise ValueError(f"Losses must be a vector, got shape {losses.shape}")
    if not np.isfinite(losses).all():
        raise ValueError("Losses must be finite")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")
    if losses.size < 2 or np.ptp(losses) == 0.0:
        raise DegenerateLossError(
            f"Cannot fit a mixture to {losses.size} losses with no spread; "
            "fall back to selecting all samples"
        )

    order = np.argsort(losses, kind="stable")
    resp = np.zeros((losses.size, 2))
    half = losses.size // 2
    resp[order[:half], 0] = 1.0
    resp[order[half:], 1] = 1.0
    means, variances, weights = _estimate(losses, resp, var_floor)

    history = []
    converged = False
    for _ in range(max_iter):
        log_joint = _log_joint(losses, means, variances, weights)
        log_norm = logsumexp(log_joint, axis=1)
        history.append(float(log_norm.mean()))
        if len(history) > 1 and history[-1] - history[-2] < tol:
            converged = True
            break
        resp = np.exp(log_joint - log_norm[:, None])
        means, variances, weights = _estimate(losses, resp, var_floor)
    else:
        log_joint = _log_joint(losses, means, variances, weights)
        history.append(float(logsumexp(log_joint, axis=1).mean()))

    if means[0] > means[1]:
        means, variances, weights = means[::-1], variances[::-1], weights[::-1]
    gmm = Gmm1d(
        means=(float(means[0]), float(means[1])),
        variances=(float(variances[0]), float(variances[1])),
        weights=(float(weights[0]), float(1.0 - weights[0])),
        log_likelihoods=tuple(history),
        converged=converged,
    )
    logger.debug(
        f"EM {'converged' if converged else 'stopped'} after {gmm.n_iter} iterations: "
        f"means={gmm.means}, weights={gmm.weights}"
    )
    return gmm


def posteriors(losses: Sequence[float], gmm: Gmm1d) -> np.ndarray:
    """Component responsibilities ``(clean, noisy)`` of each loss, ``(n, 2)``."""
    log_joint = gmm.component_log_joint(np.atleast_1d(losses))
    return np.exp(log_joint - logsumexp(log_joint, axis=1, keepdims=True))


def clean_posterior(losses, gmm: Gmm1d) -> np.ndarray:
    """Probability that each loss belongs to the low-loss component."""
    return posteriors(losses, gmm)[:, 0]


def normalize_losses(losses: Sequence[float]) -> np.ndarray:
    """Min-max normalize losses to ``[0, 1]``; flat losses map to zeros."""
    losses = np.asarray(losses, dtype=np.float64)
    spread = np.ptp(losses) if losses.size else 0.0
    if spread == 0.0:
        return np.zeros_like(losses)
    return (losses - losses.min()) / spread


@dataclass(frozen=True, eq=False)
class SelectionMask:
    """Clean-sample selection over the training set.

    Args:
        mask: Selected samples.
        clean_posterior: Per-sample clean probability ``w_i`` the mask was built from.
        threshold: The ``tau`` with ``mask == (clean_posterior >= tau)``, if the mask
            is a plain threshold.
        capped_classes: Classes whose per-class budget exceeded their size.
    """

    mask: np.ndarray
    clean_posterior: np.ndarray
    threshold: Optional[float] = None
    capped_classes: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        mask = np.asarray(self.mask, dtype=bool)
        posterior = np.asarray(self.clean_posterior, dtype=np.float64)
        if mask.shape != posterior.shape or mask.ndim != 1:
            raise ValueError(
                f"Mask {mask.shape} and posterior {posterior.shape} must be equal-length vectors"
            )
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "clean_posterior", posterior)

    @classmethod
    def select_all(cls, n: int) -> "SelectionMask":
        """Every sample selected with posterior one."""
        return cls(np.ones(n, dtype=bool), np.ones(n))

    @property
    def n_selected(self) -> int:
        """Number of selected samples."""
        return int(self.mask.sum())

    @property
    def selected_fraction(self) -> float:
        """Fraction of samples selected."""
        return self.n_selected / self.mask.size if self.mask.size else 0.0

    def indices(self) -> np.ndarray:
        """Indices of selected samples in ascending order."""
        return np.flatnonzero(self.mask)


def gmm_select(
    losses: Sequence[float],
    gmm: Gmm1d,
    threshold: float = 0.5,
    labels: Optional[np.ndarray] = None,
    class_thresholds: Optional[Sequence[float]] = None,
) -> SelectionMask:
    """Select samples whose clean posterior reaches the threshold.

    Args:
        losses: Losses on the scale ``gmm`` was fit on.
        gmm: Fitted mixture.
        threshold: ``tau`` in ``(0, 1)``.
        labels: Observed labels, required with ``class_thresholds``.
        class_thresholds: Optional ``(tau_0, tau_1)`` replacing ``threshold`` per
            observed class.
    """
    w = clean_posterior(losses, gmm)
    if class_thresholds is None:
        if not 0.0 < threshold < 1.0:
            raise ValueError(f"Threshold must lie in (0, 1), got {threshold}")
        return SelectionMask(w >= threshold, w, threshold=threshold)

    if labels is None:
        raise ValueError("Per-class thresholds need the observed labels")
    tau = np.asarray(class_thresholds, dtype=np.float64)
    if tau.shape != (2,) or not ((tau > 0) & (tau < 1)).all():
        raise ValueError(f"class_thresholds must be two values in (0, 1), got {tau}")
    per_sample = tau[np.asarray(labels, dtype=np.int64)]
    return SelectionMask(w >= per_sample, w)


def loss_posteriors(
    losses: Sequence[float],
    tol: float = 1e-6,
    max_iter: int = 100,
    var_floor: float = VARIANCE_FLOOR,
) -> tuple[Optional[Gmm1d], np.ndarray]:
    """Normalize losses, fit the mixture and return it with the clean posteriors.

    On degenerate losses the mixture is ``None`` and every posterior is one, so any
    threshold selects all samples.
    """
    normalized = normalize_losses(losses)
    try:
        gmm = fit_gmm_em(normalized, tol=tol, max_iter=max_iter, var_floor=var_floor)
    except DegenerateLossError as e:
        logger.warning(f"{e}")
        return None, np.ones_like(normalized)
    return gmm, clean_posterior(normalized, gmm)


__doc_title__ = "Loss Mixture"
__all__ = [
    "VARIANCE_FLOOR",
    "DegenerateLossError",
    "Gmm1d",
    "fit_gmm_em",
    "posteriors",
    "clean_posterior",
    "normalize_losses",
    "SelectionMask",
    "gmm_select",
    "loss_posteriors",
]
