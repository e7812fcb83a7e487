"""Final test-set metrics of a run and their flat serialization."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from clinrisk.metrics.confusion import (
    ConfusionCounts,
    bac_from_rates,
    confusion,
    f1,
    sensitivity,
    specificity,
)
from clinrisk.metrics.ranking import auc
from clinrisk.metrics.risk import DEFAULT_SCENARIOS, RiskScenario, risk

logger = logging.getLogger(__name__)

RATE_KEYS = ("sensitivity", "specificity", "bac", "f1", "auc")
COUNT_KEYS = ("tp", "fp", "tn", "fn", "n")


@dataclass(frozen=True)
class MetricsRecord:
    """Test metrics of one classifier.

    Rates are ``None`` when undefined. ``risks`` maps scenario names (``risk_I``,
    ``risk_II`` and any configured extras) to their risk.
    """

    counts: ConfusionCounts
    sensitivity: Optional[float]
    specificity: Optional[float]
    bac: Optional[float]
    f1: Optional[float]
    auc: Optional[float]
    ppr: float
    risks: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for key in ("sensitivity", "specificity", "bac", "f1", "auc", "ppr"):
            value = getattr(self, key)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{key} = {value} lies outside [0, 1]")
        expected = bac_from_rates(self.sensitivity, self.specificity)
        if (expected is None) != (self.bac is None) or (
            expected is not None and abs(expected - self.bac) > 1e-12
        ):
            raise ValueError(
                f"bac {self.bac} is not the mean of {self.sensitivity} and {self.specificity}"
            )

    def to_dict(self) -> dict:
        """Flat JSON-able dict keyed by metric, risk scenario and count names."""
        out = {key: getattr(self, key) for key in RATE_KEYS}
        out.update(self.risks)
        out["ppr"] = self.ppr
        out.update(
            tp=self.counts.tp,
            fp=self.counts.fp,
            tn=self.counts.tn,
            fn=self.counts.fn,
            n=self.counts.n,
        )
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "MetricsRecord":
        """Inverse of :meth:`to_dict`."""
        missing = [k for k in (*RATE_KEYS, "ppr", *COUNT_KEYS) if k not in data]
        if missing:
            raise KeyError(f"Metrics record lacks {', '.join(missing)}")
        counts = ConfusionCounts(tp=data["tp"], fp=data["fp"], tn=data["tn"], fn=data["fn"])
        if counts.n != data["n"]:
            raise ValueError(f"Counts sum to {counts.n}, record says n = {data['n']}")
        fixed = {*RATE_KEYS, "ppr", *COUNT_KEYS}
        return cls(
            counts=counts,
            ppr=data["ppr"],
            risks={k: v for k, v in data.items() if k not in fixed},
            **{key: data[key] for key in RATE_KEYS},
        )


def evaluate(
    scores: np.ndarray,
    labels: np.ndarray,
    threshold: float = 0.5,
    scenarios: Sequence[RiskScenario] = DEFAULT_SCENARIOS,
) -> MetricsRecord:
    """Score positive-class probabilities against clean labels.

    Args:
        scores: ``p_1`` of each sample.
        labels: True binary labels.
        threshold: Predict positive iff ``p_1 >= threshold``.
        scenarios: Risk scenarios to evaluate.
    """
    scores = np.asarray(scores, dtype=np.float64)
    predictions = (scores >= threshold).astype(np.int64)
    counts = confusion(predictions, labels)
    try:
        area = auc(scores, labels)
    except ValueError as e:
        logger.warning(f"AUC undefined: {e}")
        area = None
    sens, spec = sensitivity(counts), specificity(counts)
    return MetricsRecord(
        counts=counts,
        sensitivity=sens,
        specificity=spec,
        bac=bac_from_rates(sens, spec),
        f1=f1(counts),
        auc=area,
        ppr=float(predictions.mean()) if predictions.size else 0.0,
        risks={s.name: risk(counts, s) for s in scenarios},
    )


__doc_title__ = "Metrics Record"
__all__ = ["MetricsRecord", "evaluate", "RATE_KEYS", "COUNT_KEYS"]
