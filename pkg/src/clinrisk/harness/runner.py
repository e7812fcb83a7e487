"""Single runs and experiment matrices."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from itertools import product
from typing import Any, Optional, Sequence

import numpy as np

from clinrisk.data.dataset import DatasetError, LabeledDataset, NoiseSpec
from clinrisk.data.ingest import ingest_csv
from clinrisk.data.noise import inject_symmetric_noise
from clinrisk.data.synthetic import SyntheticSpec, generate_synthetic
from clinrisk.harness.config import ExperimentConfig, parse_method_label
from clinrisk.methods import METHODS
from clinrisk.metrics.record import MetricsRecord, evaluate
from clinrisk.metrics.risk import collapse_flag
from clinrisk.selection.quality import selection_quality
from clinrisk.utils.logging_config import set_run_context
from clinrisk.utils.streams import Stream, derive_seed

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class EpochTrace:
    """Per-epoch record of a run.

    Selection precision, recall and agreement compare the epoch's clean selection
    with the hidden flip mask; they are ``None`` without ground truth or selection.
    """

    epoch: int
    train_loss: float
    selected_fraction: float
    val_bac: Optional[float]
    lr: float
    precision: Optional[float] = None
    recall: Optional[float] = None
    agreement: Optional[float] = None


@dataclass(frozen=True)
class RunResult:
    """Persisted outcome of one run.

    Args:
        fingerprint: Content hash of the configuration.
        config: The configuration as a JSON-normalized dict.
        status: ``ok`` or ``failed``.
        error: Failure message of a failed run.
        trace: Per-epoch trace (up to the failing epoch for failed runs).
        metrics: Final test metrics.
        collapse: Whether test predictions collapsed onto one class.
        selection: Last epoch's selection quality, when measurable.
        dataset_fingerprint: Content hash of the data source.
        wall_clock_seconds: Run duration; ``None`` when not recorded.
    """

    fingerprint: str
    config: dict[str, Any]
    status: str
    error: Optional[str] = None
    trace: tuple[EpochTrace, ...] = ()
    metrics: Optional[MetricsRecord] = None
    collapse: Optional[bool] = None
    selection: Optional[dict[str, Optional[float]]] = None
    dataset_fingerprint: str = ""
    wall_clock_seconds: Optional[float] = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        """Whether the run completed."""
        return self.status == "ok"

    @property
    def method(self) -> str:
        """Method name."""
        return self.config["method"]

    @property
    def cost_sensitive(self) -> bool:
        """Whether the run was cost-sensitive."""
        return bool(self.config["cost_sensitive"])

    @property
    def label(self) -> str:
        """Method name with ``+CS`` for cost-sensitive runs."""
        return f"{self.method}+CS" if self.cost_sensitive else self.method

    @property
    def noise_rate(self) -> float:
        """Injected noise rate."""
        return float(self.config["noise_rate"])

    def to_dict(self, include_wall_clock: bool = True) -> dict[str, Any]:
        """JSON-able dict with fixed field names."""
        return {
            "schema_version": SCHEMA_VERSION,
            "fingerprint": self.fingerprint,
            "dataset_fingerprint": self.dataset_fingerprint,
            "config": self.config,
            "status": self.status,
            "error": self.error,
            "trace": [asdict(t) for t in self.trace],
            "metrics": None if self.metrics is None else self.metrics.to_dict(),
            "collapse": self.collapse,
            "selection": self.selection,
            "wall_clock_seconds": self.wall_clock_seconds if include_wall_clock else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunResult":
        """Inverse of :meth:`to_dict`."""
        return cls(
            fingerprint=data["fingerprint"],
            config=data["config"],
            status=data["status"],
            error=data["error"],
            trace=tuple(EpochTrace(**t) for t in data["trace"]),
            metrics=None if data["metrics"] is None else MetricsRecord.from_dict(data["metrics"]),
            collapse=data["collapse"],
            selection=data["selection"],
            dataset_fingerprint=data["dataset_fingerprint"],
            wall_clock_seconds=data["wall_clock_seconds"],
        )


def load_splits(
    config: ExperimentConfig,
) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """Build the run's splits and inject noise into the training split.

    Synthetic data is drawn with ``config.seed``; the noise stream is keyed by the
    same seed, so every method on one seed sees the same noisy labels.
    """
    source = config.data
    if isinstance(source, SyntheticSpec):
        train, val, test = generate_synthetic(replace(source, seed=config.seed))
    else:
        train, val, test = (
            ingest_csv(path, source.label_column, source.binarization, split_tag=split)
            for split, path in (("train", source.train), ("val", source.val), ("test", source.test))
        )
    if config.noise_rate > 0:
        train = inject_symmetric_noise(train, NoiseSpec(config.noise_rate, config.seed))
    for split in (train, val, test):
        split.require_both_classes()
    return train, val, test


def _clean_labels(dataset: LabeledDataset) -> np.ndarray:
    return dataset.true_labels if dataset.has_ground_truth else dataset.observed_labels


def run_single(config: ExperimentConfig) -> RunResult:
    """Train and evaluate one configuration.

    Invalid configurations, single-class data and non-finite losses are recorded as
    a failed :class:`RunResult` rather than raised.
    """
    start = time.perf_counter()
    fingerprint = config.fingerprint()
    set_run_context(f"{config.label}/eta={config.noise_rate:g}/seed={config.seed}")
    trace: list[EpochTrace] = []
    common = dict(
        fingerprint=fingerprint,
        config=config.to_dict(),
        dataset_fingerprint=config.dataset_fingerprint(),
    )
    try:
        config.validate()
        logger.info(f"=== Starting run {fingerprint}")
        train, val, test = load_splits(config)
        method = METHODS[config.method](config, train)
        val_labels = _clean_labels(val)
        quality = None
        for epoch in range(config.epochs):
            set_run_context(
                f"{config.label}/eta={config.noise_rate:g}/seed={config.seed}", epoch
            )
            stats = method.run_epoch(epoch)
            val_scores = method.predict_proba(val.features)
            val_bac = evaluate(val_scores, val_labels, config.threshold, ()).bac
            quality = None
            if stats.selection is not None and train.has_ground_truth:
                quality = selection_quality(stats.selection, train.flip_mask)
            trace.append(
                EpochTrace(
                    epoch=epoch,
                    train_loss=float(stats.train_loss),
                    selected_fraction=float(stats.selected_fraction),
                    val_bac=val_bac,
                    lr=float(method.networks[0].optim.lr),
                    precision=None if quality is None else quality.precision,
                    recall=None if quality is None else quality.recall,
                    agreement=None if quality is None else quality.agreement,
                )
            )
            logger.info(
                f"loss={stats.train_loss:.4f} selected={stats.selected_fraction:.3f} "
                f"val_bac={'n/a' if val_bac is None else f'{val_bac:.3f}'}"
            )

        scores = method.predict_proba(test.features)
        metrics = evaluate(scores, _clean_labels(test), config.threshold, config.scenarios)
        collapsed, _ = collapse_flag(
            (scores >= config.threshold).astype(np.int64), config.collapse_threshold
        )
        result = RunResult(
            **common,
            status="ok",
            trace=tuple(trace),
            metrics=metrics,
            collapse=bool(collapsed),
            selection=None if quality is None else asdict(quality),
            wall_clock_seconds=time.perf_counter() - start,
        )
        logger.info(
            f"=== Finished run {fingerprint}: bac={metrics.bac} "
            f"fn={metrics.counts.fn} fp={metrics.counts.fp} collapse={collapsed}"
        )
    except (ValueError, ArithmeticError, RuntimeError, OSError) as e:
        if not isinstance(e, DatasetError):
            logger.error(f"Run {fingerprint} failed: {type(e).__name__}: {e}")
        else:
            logger.error(f"Run {fingerprint} failed on its data: {e}")
        result = RunResult(
            **common,
            status="failed",
            error=f"{type(e).__name__}: {e}",
            trace=tuple(trace),
            wall_clock_seconds=time.perf_counter() - start,
        )
    finally:
        set_run_context(None)
    return result


def matrix_configs(
    base: ExperimentConfig,
    methods: Sequence[str],
    noise_rates: Sequence[float],
    seeds: Sequence[int],
) -> list[ExperimentConfig]:
    """Cartesian product of the axes as configurations.

    Cell ``i`` trains with a seed derived from ``(base.seed, i)``; data and noise are
    keyed by the cell's seed so all methods on one seed share the noisy labels.
    """
    if not (methods and noise_rates and seeds):
        raise ValueError("Matrix axes must be nonempty")
    configs = []
    for index, (entry, rate, seed) in enumerate(product(methods, noise_rates, seeds)):
        name, cost_sensitive = parse_method_label(entry)
        configs.append(
            replace(
                base,
                method=name,
                cost_sensitive=cost_sensitive,
                noise_rate=rate,
                seed=seed,
                train_seed=derive_seed(base.seed, Stream.MATRIX, index),
            )
        )
    return configs


def run_matrix(
    base: ExperimentConfig,
    methods: Sequence[str],
    noise_rates: Sequence[float],
    seeds: Sequence[int],
    parallelism: int = 1,
) -> list[RunResult]:
    """Run every cell of a method x noise x seed matrix.

    Failing cells are recorded as failed results without affecting the others.

    Args:
        base: Configuration the cells override.
        methods: Method names, optionally suffixed ``+cs``.
        noise_rates: Noise rates.
        seeds: Data/noise seeds.
        parallelism: Worker processes; 1 runs in this process.

    Returns:
        Results sorted by configuration fingerprint.
    """
    configs = matrix_configs(base, methods, noise_rates, seeds)
    logger.info(f"=== Running {len(configs)} cells with parallelism {parallelism}")
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(run_single, configs))
    else:
        results = [run_single(config) for config in configs]
    failed = sum(not r.ok for r in results)
    if failed:
        logger.warning(f"{failed}/{len(results)} matrix cells failed")
    return sorted(results, key=lambda r: r.fingerprint)


__doc_title__ = "Runner"
__all__ = [
    "SCHEMA_VERSION",
    "EpochTrace",
    "RunResult",
    "load_splits",
    "run_single",
    "matrix_configs",
    "run_matrix",
]
