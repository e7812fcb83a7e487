"""Small-loss selection and the co-teaching keep schedule."""

import math
from typing import Sequence

import numpy as np


def small_loss_select(losses: Sequence[float], keep_fraction: float) -> np.ndarray:
    """Indices of the ``ceil(keep_fraction * n)`` smallest losses, ascending.

    Ties are broken toward the lower index.

    Args:
        losses: Per-sample losses.
        keep_fraction: Fraction to keep, in ``(0, 1]``.
    """
    losses = np.asarray(losses, dtype=np.float64)
    if losses.size == 0:
        raise ValueError("Cannot select from an empty loss vector")
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError(f"keep_fraction must lie in (0, 1], got {keep_fraction}")
    # the epsilon absorbs products such as 0.7 * 10 = 7.000000000000001
    k = max(1, math.ceil(keep_fraction * losses.size - 1e-9))
    return np.sort(np.argsort(losses, kind="stable")[:k])


def forget_rate(epoch: int, noise_rate: float, ramp_epochs: int) -> float:
    """Keep fraction ``1 - eta * min(epoch / ramp_epochs, 1)`` of co-teaching.

    The fraction of samples forgotten grows linearly from zero to ``eta`` over
    ``ramp_epochs`` and stays there.

    Args:
        epoch: Current epoch, from 0.
        noise_rate: Assumed noise rate ``eta`` in ``[0, 1)``.
        ramp_epochs: Epochs to reach the plateau, at least 1.

    Returns:
        The fraction of small-loss samples to keep.
    """
    if not 0.0 <= noise_rate < 1.0:
        raise ValueError(f"noise_rate must lie in [0, 1), got {noise_rate}")
    if ramp_epochs < 1:
        raise ValueError(f"ramp_epochs must be at least 1, got {ramp_epochs}")
    return 1.0 - noise_rate * min(max(epoch, 0) / ramp_epochs, 1.0)


__doc_title__ = "Small-Loss Selection"
__all__ = ["small_loss_select", "forget_rate"]
