"""Cost-weighted clinical risk, cost-ratio sweeps and prediction collapse."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from clinrisk.metrics.confusion import ConfusionCounts

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RiskScenario:
    """Costs of a missed malignancy (``c_fn``) and of a false alarm (``c_fp``).

    Args:
        name: Identifier used as the metric key, e.g. ``risk_II``.
        c_fn: False-negative cost.
        c_fp: False-positive cost.
    """

    name: str
    c_fn: float
    c_fp: float

    def __post_init__(self) -> None:
        if self.c_fn < 0 or self.c_fp < 0:
            raise ValueError(f"{self.name}: costs must be non-negative")
        if self.c_fn == 0 and self.c_fp == 0:
            raise ValueError(f"{self.name}: costs must not both be zero")
        if not self.name.isidentifier():
            raise ValueError(f"Scenario name {self.name!r} must be an identifier")

    @property
    def ratio(self) -> Optional[float]:
        """Cost ratio ``lambda = c_fn / c_fp``, undefined without a false-positive cost."""
        return self.c_fn / self.c_fp if self.c_fp > 0 else None


#: Symmetric costs: the plain error rate.
RISK_I = RiskScenario("risk_I", 1.0, 1.0)
#: A missed malignancy costs twenty false alarms.
RISK_II = RiskScenario("risk_II", 20.0, 1.0)
DEFAULT_SCENARIOS = (RISK_I, RISK_II)


def risk_exact(c: ConfusionCounts, scenario: RiskScenario) -> Fraction:
    """``(c_fn * fn + c_fp * fp) / N`` in rational arithmetic."""
    if c.n == 0:
        raise ValueError("Risk is undefined for an empty confusion tally")
    cost = Fraction(scenario.c_fn) * c.fn + Fraction(scenario.c_fp) * c.fp
    return cost / c.n


def risk(c: ConfusionCounts, scenario: RiskScenario) -> float:
    """Expected misclassification cost per sample under ``scenario``."""
    return float(risk_exact(c, scenario))


def risk_sweep(
    c: ConfusionCounts, ratios: Iterable[float], c_fp: float = 1.0
) -> list[tuple[float, float]]:
    """Risk for each cost ratio ``lambda`` with ``c_fn = lambda * c_fp``.

    Returns:
        ``(lambda, risk)`` pairs in input order.
    """
    sweep = []
    for ratio in ratios:
        if ratio < 0:
            raise ValueError(f"Cost ratios must be non-negative, got {ratio}")
        scenario = RiskScenario(f"lambda_{len(sweep)}", ratio * c_fp, c_fp)
        sweep.append((ratio, risk(c, scenario)))
    return sweep


def collapse_flag(predictions, rate_threshold: float = 0.9) -> tuple[bool, float]:
    """Detect a classifier predicting (almost) a single class.

    Returns:
        Whether the positive or negative prediction rate reaches ``rate_threshold``,
        and the positive prediction rate.
    """
    predictions = np.asarray(predictions)
    if predictions.size == 0:
        raise ValueError("Cannot check collapse of an empty prediction vector")
    ppr = float(np.mean(predictions == 1))
    npr = float(np.mean(predictions == 0))
    flagged = ppr >= rate_threshold or npr >= rate_threshold
    if flagged:
        logger.info(f"Prediction collapse: positive prediction rate {ppr:.3f}")
    return flagged, ppr


__doc_title__ = "Clinical Risk"
__all__ = [
    "RiskScenario",
    "RISK_I",
    "RISK_II",
    "DEFAULT_SCENARIOS",
    "risk_exact",
    "risk",
    "risk_sweep",
    "collapse_flag",
]
