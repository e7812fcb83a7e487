"""Class-uniform clean-sample selection."""

import logging
import math

import numpy as np

from clinrisk.selection.gmm import SelectionMask

logger = logging.getLogger(__name__)


def uniform_class_select(
    clean_posterior: np.ndarray, observed_labels: np.ndarray, overall_budget: float
) -> SelectionMask:
    """Select the same number of highest-posterior samples from each observed class.

    Each class receives ``b = floor(overall_budget * n / 2)`` slots and fills them
    with its highest clean posteriors, ties going to the lower index. A class smaller
    than ``b`` is selected entirely and reported in ``capped_classes``.

    Args:
        clean_posterior: Per-sample clean probability.
        observed_labels: Observed binary labels.
        overall_budget: Fraction of the training set to select, in ``(0, 1]``.

    Raises:
        ValueError: A class is absent or the budget is out of range.
    """
    posterior = np.asarray(clean_posterior, dtype=np.float64)
    labels = np.asarray(observed_labels, dtype=np.int64)
    if posterior.shape != labels.shape:
        raise ValueError(f"{posterior.shape} posteriors for {labels.shape} labels")
    if not 0.0 < overall_budget <= 1.0:
        raise ValueError(f"overall_budget must lie in (0, 1], got {overall_budget}")

    per_class = math.floor(overall_budget * labels.size / 2 + 1e-9)
    mask = np.zeros(labels.size, dtype=bool)
    capped = []
    for cls in (0, 1):
        members = np.flatnonzero(labels == cls)
        if members.size == 0:
            raise ValueError(f"Class {cls} is absent from the observed labels")
        if members.size < per_class:
            capped.append(cls)
        ranked = members[np.argsort(-posterior[members], kind="stable")]
        mask[ranked[:per_class]] = True
    if capped:
        logger.warning(
            f"Per-class budget {per_class} exceeds the size of class(es) {capped}; "
            "selected them entirely"
        )
    return SelectionMask(mask, posterior, capped_classes=tuple(capped))


__doc_title__ = "Uniform Selection"
__all__ = ["uniform_class_select"]
