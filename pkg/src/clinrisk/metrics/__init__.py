"""Clinical evaluation metrics are computed by ``clinrisk.metrics``.

Rates
-----

Sensitivity (recall on malignant cases), specificity, balanced accuracy and F1 come
from a :class:`ConfusionCounts` tally. A rate whose denominator is zero is ``None``
and reports render it as ``n/a``. :func:`auc` is the exact Mann-Whitney area with
ties counted one half.

Clinical Risk
-------------

The global risk of a :class:`RiskScenario` is the expected misclassification cost per
sample, ``(c_fn * FN + c_fp * FP) / N``:

+-------------+-------+-------+------------------------------------------+
| Scenario    | c_fn  | c_fp  | Meaning                                  |
+=============+=======+=======+==========================================+
| ``risk_I``  | 1     | 1     | Plain error rate                         |
+-------------+-------+-------+------------------------------------------+
| ``risk_II`` | 20    | 1     | A missed malignancy costs 20 false alarms|
+-------------+-------+-------+------------------------------------------+

Risk is computed in rational arithmetic and converted to float at the end.
:func:`risk_sweep` evaluates a range of cost ratios. Because Risk II rewards
predicting positive, a collapsed classifier can look *safer*;
:func:`collapse_flag` detects classifiers predicting (almost) one class so that
reports can call this out.

:func:`evaluate` bundles everything into a :class:`MetricsRecord`, whose
:meth:`~MetricsRecord.to_dict` has the fixed keys ``sensitivity``, ``specificity``,
``bac``, ``f1``, ``auc``, ``risk_I``, ``risk_II``, ``ppr``, ``tp``, ``fp``, ``tn``,
``fn`` and ``n``.
"""

from clinrisk.metrics.confusion import (
    ConfusionCounts,
    accuracy,
    bac,
    bac_from_rates,
    confusion,
    f1,
    sensitivity,
    specificity,
)
from clinrisk.metrics.ranking import auc
from clinrisk.metrics.record import MetricsRecord, evaluate
from clinrisk.metrics.risk import (
    DEFAULT_SCENARIOS,
    RISK_I,
    RISK_II,
    RiskScenario,
    collapse_flag,
    risk,
    risk_exact,
    risk_sweep,
)

__doc_title__ = "Metrics"
__all__ = [
    "ConfusionCounts",
    "confusion",
    "sensitivity",
    "specificity",
    "bac",
    "bac_from_rates",
    "f1",
    "accuracy",
    "auc",
    "RiskScenario",
    "RISK_I",
    "RISK_II",
    "DEFAULT_SCENARIOS",
    "risk",
    "risk_exact",
    "risk_sweep",
    "collapse_flag",
    "MetricsRecord",
    "evaluate",
]
