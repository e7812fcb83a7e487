"""Confusion counts and the rates derived from them.

Rates whose denominator is zero are ``None`` rather than a silent zero.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    """Binary confusion tally with class 1 (malignant) as the positive class."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "tn", "fn"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @property
    def n(self) -> int:
        """Total number of samples."""
        return self.tp + self.fp + self.tn + self.fn

    @property
    def errors(self) -> int:
        """Misclassified samples."""
        return self.fp + self.fn

    def scaled(self, factor: int) -> "ConfusionCounts":
        """Every count multiplied by ``factor``."""
        return ConfusionCounts(
            self.tp * factor, self.fp * factor, self.tn * factor, self.fn * factor
        )


def _binary(values, name: str) -> np.ndarray:
    values = np.asarray(values)
    if values.ndim != 1:
        raise ValueError(f"{name} must be a vector, got shape {values.shape}")
    if values.size and not np.isin(values, (0, 1)).all():
        raise ValueError(f"{name} must be binary (0/1)")
    return values.astype(np.int64)


def confusion(predictions, labels) -> ConfusionCounts:
    """Tally predictions against labels."""
    predictions = _binary(predictions, "predictions")
    labels = _binary(labels, "labels")
    if predictions.shape != labels.shape:
        raise ValueError(
            f"{predictions.size} predictions for {labels.size} labels"
        )
    tn, fp, fn, tp = np.bincount(2 * labels + predictions, minlength=4)
    return ConfusionCounts(tp=int(tp), fp=int(fp), tn=int(tn), fn=int(fn))


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    return numerator / denominator if denominator > 0 else None


def sensitivity(c: ConfusionCounts) -> Optional[float]:
    """``tp / (tp + fn)``: recall on the malignant class."""
    return _ratio(c.tp, c.tp + c.fn)


def specificity(c: ConfusionCounts) -> Optional[float]:
    """``tn / (tn + fp)``: recall on the benign class."""
    return _ratio(c.tn, c.tn + c.fp)


def bac_from_rates(
    sensitivity: Optional[float], specificity: Optional[float]
) -> Optional[float]:
    """Arithmetic mean of two rates, undefined if either is."""
    if sensitivity is None or specificity is None:
        return None
    return (sensitivity + specificity) / 2


def bac(c: ConfusionCounts) -> Optional[float]:
    """Balanced accuracy."""
    return bac_from_rates(sensitivity(c), specificity(c))


def f1(c: ConfusionCounts) -> Optional[float]:
    """``2 tp / (2 tp + fp + fn)``."""
    return _ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn)


def accuracy(c: ConfusionCounts) -> Optional[float]:
    """Fraction of correct predictions."""
    return _ratio(c.tp + c.tn, c.n)


__doc_title__ = "Confusion Counts"
__all__ = [
    "ConfusionCounts",
    "confusion",
    "sensitivity",
    "specificity",
    "bac",
    "bac_from_rates",
    "f1",
    "accuracy",
]
