import pytest

from clinrisk.harness.runner import RunResult
from clinrisk.metrics.confusion import ConfusionCounts, bac, f1, sensitivity, specificity
from clinrisk.metrics.record import MetricsRecord
from clinrisk.metrics.risk import DEFAULT_SCENARIOS, risk


def make_result(
    method="baseline",
    cs=False,
    noise=0.0,
    seed=0,
    counts=(70, 100, 900, 30),
    auc=0.5,
    collapse=False,
    dataset="d0",
    status="ok",
):
    """A persisted-looking result with metrics derived from ``(tp, fp, tn, fn)``."""
    config = dict(method=method, cost_sensitive=cs, noise_rate=noise, seed=seed)
    if status != "ok":
        return RunResult(
            fingerprint=f"{method}-{cs}-{noise}-{seed}",
            config=config,
            status=status,
            error="ConfigError: bad",
            dataset_fingerprint=dataset,
        )
    c = ConfusionCounts(*counts)
    metrics = MetricsRecord(
        counts=c,
        sensitivity=sensitivity(c),
        specificity=specificity(c),
        bac=bac(c),
        f1=f1(c),
        auc=auc,
        ppr=(c.tp + c.fp) / c.n,
        risks={s.name: risk(c, s) for s in DEFAULT_SCENARIOS},
    )
    return RunResult(
        fingerprint=f"{method}-{cs}-{noise}-{seed}",
        config=config,
        status="ok",
        metrics=metrics,
        collapse=collapse,
        dataset_fingerprint=dataset,
    )


@pytest.fixture
def result_factory():
    return make_result
