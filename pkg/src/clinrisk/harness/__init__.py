"""Experiments are configured, run, stored and reported by ``clinrisk.harness``.

Configuration
-------------

An :class:`ExperimentConfig` describes one run completely. It is read from TOML, where
unknown keys at any level are errors:

.. code-block:: toml

    method = "unicon"
    cost_sensitive = true
    noise_rate = 0.2
    seed = 3
    epochs = 60
    warmup_epochs = 10

    [cost_weights]
    w0 = 1.0
    w1 = 20.0

    [data]
    kind = "synthetic"
    preset = "derma"

    [matrix]
    methods = ["baseline", "co_teaching", "unicon", "unicon+cs"]
    noise_rates = [0.0, 0.2, 0.4]
    seeds = [0, 1, 2, 3, 4]
    parallelism = 4

The ``[matrix]`` table is only read by :func:`load_matrix`. A ``+cs`` suffix on a
method enables cost-sensitive training for that row of the matrix.

Runs
----

:func:`run_single` builds the splits (synthetic data and label noise are both keyed by
``seed``), trains the configured :class:`~clinrisk.methods.TrainingMethod` and
evaluates the clean test split. Invalid configurations, single-class data and
non-finite losses produce a :class:`RunResult` with ``status = "failed"`` instead of
an exception. :func:`run_matrix` runs the product of methods, noise rates and seeds,
optionally in worker processes; cell ``i`` trains with a seed derived from the base
seed and ``i``, so results do not depend on the degree of parallelism.

Results and Reports
-------------------

:func:`persist` writes one JSON object per line with sorted keys and a schema
version; :func:`load` reverses it. The report emitters average over seeds:

+-----------------------------------+------------------------------------------------+
| **Emitter**                       | **Output**                                     |
+-----------------------------------+------------------------------------------------+
| :func:`emit_method_table`         | Method x noise table of rates and risks, with  |
|                                   | the best labels per column in a footer.        |
+-----------------------------------+------------------------------------------------+
| :func:`emit_tradeoff_data`        | CSV and SVG scatter of BAC against a risk.     |
+-----------------------------------+------------------------------------------------+
| :func:`emit_noise_impact_report`  | FN/FP/risk/collapse per noise rate of one      |
|                                   | method, annotating collapse-driven risk drops. |
+-----------------------------------+------------------------------------------------+
| :func:`emit_sweep_report`         | Mean risk across cost ratios.                  |
+-----------------------------------+------------------------------------------------+
| :func:`emit_risk_report`          | Risk I / Risk II per method and noise rate.    |
+-----------------------------------+------------------------------------------------+

The same operations are available from the ``clinrisk`` command line.
"""

from clinrisk.harness.config import (
    ConfigError,
    CsvSource,
    ExperimentConfig,
    MatrixSpec,
    load_config,
    load_matrix,
    parse_method_label,
)
from clinrisk.harness.reports import (
    ReportError,
    emit_method_table,
    emit_noise_impact_report,
    emit_risk_report,
    emit_sweep_report,
    emit_tradeoff_data,
)
from clinrisk.harness.runner import (
    EpochTrace,
    RunResult,
    load_splits,
    matrix_configs,
    run_matrix,
    run_single,
)
from clinrisk.harness.store import ResultsFormatError, load, persist

__doc_title__ = "Harness"
__all__ = [
    "ConfigError",
    "CsvSource",
    "ExperimentConfig",
    "MatrixSpec",
    "load_config",
    "load_matrix",
    "parse_method_label",
    "EpochTrace",
    "RunResult",
    "load_splits",
    "matrix_configs",
    "run_single",
    "run_matrix",
    "ResultsFormatError",
    "persist",
    "load",
    "ReportError",
    "emit_method_table",
    "emit_tradeoff_data",
    "emit_noise_impact_report",
    "emit_sweep_report",
    "emit_risk_report",
]
