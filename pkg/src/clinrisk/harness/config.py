"""Declarative experiment configuration read from TOML."""

import logging
import os
import tomllib
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Literal, Optional, Union

from clinrisk.data.dataset import BinarizationMap, DatasetError
from clinrisk.data.synthetic import PRESETS, SyntheticSpec
from clinrisk.methods import METHODS
from clinrisk.metrics.risk import DEFAULT_SCENARIOS, RiskScenario
from clinrisk.nnet.losses import CostWeights
from clinrisk.semisup.mixmatch import SemiConfig
from clinrisk.utils.functional import (
    check_known_keys,
    content_hash,
    declared_fields,
    to_jsonable,
)
from clinrisk.utils.streams import check_seed

logger = logging.getLogger(__name__)

CS_SUFFIX = "+cs"


class ConfigError(ValueError):
    """Raised for unreadable, unknown or invalid configuration values."""


@dataclass(frozen=True)
class CsvSource:
    """Train/validation/test splits read from CSV files.

    Args:
        train: Training split path.
        val: Validation split path.
        test: Test split path.
        label_column: Name of the observed label column.
        binarization: Optional grouping of source classes into 0/1.
    """

    train: str
    val: str
    test: str
    label_column: str = "label"
    binarization: Optional[BinarizationMap] = None

    def validate(self) -> None:
        """Require the three paths."""
        for name in ("train", "val", "test"):
            if not getattr(self, name):
                raise ValueError(f"CSV source needs a {name} path")


DataSource = Union[SyntheticSpec, CsvSource]

_SYNTHETIC_KEYS = {f.name for f in fields(SyntheticSpec)} - {"seed"}
_CSV_KEYS = {"train", "val", "test", "label_column", "binarization"}


def _data_to_dict(source: DataSource) -> dict:
    if isinstance(source, CsvSource):
        out = asdict(replace(source, binarization=None))
        out["binarization"] = (
            None if source.binarization is None else dict(source.binarization.mapping)
        )
        return {"kind": "csv", **out}
    out = declared_fields(source)
    out.pop("seed")
    return {"kind": "synthetic", **out}


def _data_from_dict(data: dict) -> DataSource:
    data = dict(data)
    kind = data.pop("kind", "synthetic")
    if kind == "csv":
        check_known_keys(data, _CSV_KEYS, "[data] (csv)")
        mapping = data.pop("binarization", None)
        return CsvSource(
            **data, binarization=None if mapping is None else BinarizationMap(mapping)
        )
    if kind != "synthetic":
        raise ValueError(f"Unknown data kind {kind!r}; expected 'synthetic' or 'csv'")
    preset = data.pop("preset", None)
    check_known_keys(data, _SYNTHETIC_KEYS, "[data] (synthetic)")
    if preset is None:
        return SyntheticSpec(**data)
    if preset not in PRESETS:
        raise ValueError(f"Unknown preset {preset!r}; expected one of {sorted(PRESETS)}")
    return PRESETS[preset](**data)


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one training run.

    Defaults train with SGD (momentum 0.9, learning rate 0.01, cosine annealing) for
    60 epochs, the first 10 of them warmup.

    Args:
        method: One of ``baseline``, ``gmm_filter``, ``co_teaching``, ``dividemix``,
            ``unicon``.
        cost_sensitive: Weight supervised losses by ``cost_weights`` after warmup.
        cost_weights: Class weights ``(w0, w1)``.
        noise_rate: Symmetric noise rate injected into the training split.
        seed: Keys the data and noise streams.
        train_seed: Keys initialization, batching, augmentation and mixup; defaults
            to ``seed``.
        epochs: Training epochs.
        warmup_epochs: Plain cross-entropy epochs before selection starts.
        base_lr: Initial learning rate.
        momentum: SGD momentum.
        batch_size: Mini-batch size.
        hidden_sizes: Widths of the hidden layers.
        forget_ramp_epochs: Epochs over which co-teaching's forget rate ramps up.
        forget_rate: Co-teaching forget rate; defaults to ``noise_rate``.
        coteaching_granularity: Peer exchange per ``batch`` or per ``epoch``.
        gmm_tol: EM convergence tolerance on the mean log-likelihood.
        gmm_max_iter: EM iteration cap.
        gmm_threshold: Clean-posterior threshold ``tau``.
        class_thresholds: Optional per-class ``(tau_0, tau_1)`` for the GMM filter.
        cs_during_warmup: Apply cost weights during warmup too.
        threshold: Decision threshold on ``p_1``.
        collapse_threshold: Prediction rate that flags a collapse.
        data: Synthetic spec (its seed is replaced by ``seed``) or CSV source.
        semi: Semi-supervised hyperparameters.
        scenarios: Risk scenarios evaluated on the test split.
        selection_dump: Optional CSV path for per-epoch selection diagnostics.
    """

    method: str = "baseline"
    cost_sensitive: bool = False
    cost_weights: CostWeights = CostWeights(1.0, 20.0)
    noise_rate: float = 0.0
    seed: int = 0
    train_seed: Optional[int] = None
    epochs: int = 60
    warmup_epochs: int = 10
    base_lr: float = 0.01
    momentum: float = 0.9
    batch_size: int = 64
    hidden_sizes: tuple[int, ...] = (64, 64)
    forget_ramp_epochs: int = 10
    forget_rate: Optional[float] = None
    coteaching_granularity: Literal["batch", "epoch"] = "batch"
    gmm_tol: float = 1e-6
    gmm_max_iter: int = 100
    gmm_threshold: float = 0.5
    class_thresholds: Optional[tuple[float, float]] = None
    cs_during_warmup: bool = False
    threshold: float = 0.5
    collapse_threshold: float = 0.9
    data: DataSource = field(default_factory=SyntheticSpec.derma_like)
    semi: SemiConfig = SemiConfig()
    scenarios: tuple[RiskScenario, ...] = DEFAULT_SCENARIOS
    selection_dump: Optional[str] = None

    @property
    def effective_train_seed(self) -> int:
        """Seed of the training streams."""
        return self.seed if self.train_seed is None else self.train_seed

    @property
    def label(self) -> str:
        """Method name with a ``+CS`` suffix for cost-sensitive runs."""
        return f"{self.method}+CS" if self.cost_sensitive else self.method

    def validate(self) -> None:
        """Check every invariant.

        Raises:
            ConfigError: Naming the first violated constraint.
        """
        try:
            self._validate()
        except ConfigError:
            raise
        except (ValueError, TypeError, DatasetError) as e:
            raise ConfigError(str(e)) from e

    def _validate(self) -> None:
        if self.method not in METHODS:
            raise ConfigError(
                f"Unknown method {self.method!r}; expected one of {', '.join(METHODS)}"
            )
        if self.epochs < 1:
            raise ConfigError(f"epochs must be at least 1, got {self.epochs}")
        if not 0 <= self.warmup_epochs <= self.epochs:
            raise ConfigError(
                f"warmup_epochs must lie in [0, epochs={self.epochs}], got {self.warmup_epochs}"
            )
        if METHODS[self.method].uses_warmup and self.warmup_epochs < 1:
            raise ConfigError(f"{self.method} needs at least one warmup epoch")
        if not 0.0 <= self.noise_rate <= 1.0:
            raise ConfigError(f"noise_rate must lie in [0, 1], got {self.noise_rate}")
        check_seed(self.seed)
        if self.train_seed is not None:
            check_seed(self.train_seed)
        if not self.base_lr > 0:
            raise ConfigError(f"base_lr must be positive, got {self.base_lr}")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigError(f"momentum must lie in [0, 1), got {self.momentum}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be at least 1, got {self.batch_size}")
        if not self.hidden_sizes or min(self.hidden_sizes) < 1:
            raise ConfigError(f"hidden_sizes must be positive widths, got {self.hidden_sizes}")
        if self.forget_ramp_epochs < 1:
            raise ConfigError("forget_ramp_epochs must be at least 1")
        eta = self.noise_rate if self.forget_rate is None else self.forget_rate
        if self.method == "co_teaching" and not 0.0 <= eta < 1.0:
            raise ConfigError(f"co_teaching forget rate must lie in [0, 1), got {eta}")
        if self.coteaching_granularity not in ("batch", "epoch"):
            raise ConfigError(
                f"coteaching_granularity must be 'batch' or 'epoch', "
                f"got {self.coteaching_granularity!r}"
            )
        if not self.gmm_tol > 0 or self.gmm_max_iter < 1:
            raise ConfigError("gmm_tol must be positive and gmm_max_iter at least 1")
        for name in ("gmm_threshold", "threshold"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {getattr(self, name)}")
        if self.class_thresholds is not None and (
            len(self.class_thresholds) != 2
            or not all(0.0 < t < 1.0 for t in self.class_thresholds)
        ):
            raise ConfigError(
                f"class_thresholds must be two values in (0, 1), got {self.class_thresholds}"
            )
        if not 0.5 < self.collapse_threshold <= 1.0:
            raise ConfigError(
                f"collapse_threshold must lie in (0.5, 1], got {self.collapse_threshold}"
            )
        names = [s.name for s in self.scenarios]
        if not names or len(set(names)) != len(names):
            raise ConfigError(f"Risk scenarios must be nonempty with unique names: {names}")
        self.semi.validate()
        self.data.validate()

    def to_dict(self) -> dict[str, Any]:
        """JSON-normalized dictionary; :meth:`from_dict` inverts it."""
        out = declared_fields(self)
        out["cost_weights"] = declared_fields(self.cost_weights)
        out["data"] = _data_to_dict(self.data)
        out["semi"] = declared_fields(self.semi)
        out["scenarios"] = [declared_fields(s) for s in self.scenarios]
        return to_jsonable(out)

    def fingerprint(self) -> str:
        """Content hash, independent of key order."""
        return content_hash(self.to_dict())

    def dataset_fingerprint(self) -> str:
        """Content hash of the data source."""
        return content_hash(self.to_dict()["data"])

    @classmethod
    def from_dict(cls, config: dict[str, Any]) -> "ExperimentConfig":
        """Build a configuration from a (TOML-shaped) dictionary.

        Unknown keys at any level are errors.

        Raises:
            ConfigError: Unknown key, wrong type or invalid sub-configuration.
        """
        try:
            return cls._from_dict(dict(config))
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            message = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
            raise ConfigError(message) from e

    @classmethod
    def _from_dict(cls, config: dict[str, Any]) -> "ExperimentConfig":
        config.pop("matrix", None)
        check_known_keys(config, {f.name for f in fields(cls)}, "the experiment config")
        kwargs = dict(config)
        if "cost_weights" in kwargs:
            check_known_keys(kwargs["cost_weights"], {"w0", "w1"}, "[cost_weights]")
            kwargs["cost_weights"] = CostWeights(**kwargs["cost_weights"])
        if "data" in kwargs:
            kwargs["data"] = _data_from_dict(kwargs["data"])
        if "semi" in kwargs:
            check_known_keys(kwargs["semi"], {f.name for f in fields(SemiConfig)}, "[semi]")
            kwargs["semi"] = SemiConfig(**kwargs["semi"])
        if "scenarios" in kwargs:
            scenarios = []
            for entry in kwargs["scenarios"]:
                check_known_keys(entry, {"name", "c_fn", "c_fp"}, "[[scenarios]]")
                scenarios.append(RiskScenario(**entry))
            kwargs["scenarios"] = tuple(scenarios)
        if "hidden_sizes" in kwargs:
            kwargs["hidden_sizes"] = tuple(int(h) for h in kwargs["hidden_sizes"])
        if kwargs.get("class_thresholds") is not None:
            kwargs["class_thresholds"] = tuple(float(t) for t in kwargs["class_thresholds"])
        return cls(**kwargs)


@dataclass(frozen=True)
class MatrixSpec:
    """Axes of an experiment matrix.

    Method entries may carry a ``+cs`` suffix to enable cost-sensitive training.
    """

    methods: tuple[str, ...] = ("baseline",)
    noise_rates: tuple[float, ...] = (0.0, 0.2, 0.4)
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    parallelism: int = 1

    @classmethod
    def from_dict(cls, matrix: dict[str, Any]) -> "MatrixSpec":
        """Build from the ``[matrix]`` table."""
        try:
            check_known_keys(matrix, {f.name for f in fields(cls)}, "[matrix]")
            spec = cls(
                **{
                    k: tuple(v) if isinstance(v, list) else v
                    for k, v in matrix.items()
                }
            )
        except (KeyError, TypeError) as e:
            raise ConfigError(e.args[0] if e.args else str(e)) from e
        spec.validate()
        return spec

    def validate(self) -> None:
        """Require nonempty axes and known methods."""
        if not (self.methods and self.noise_rates and self.seeds):
            raise ConfigError("Matrix axes must be nonempty")
        for entry in self.methods:
            parse_method_label(entry)
        if self.parallelism < 1:
            raise ConfigError(f"parallelism must be at least 1, got {self.parallelism}")


def parse_method_label(label: str) -> tuple[str, bool]:
    """Split ``"unicon+cs"`` into ``("unicon", True)``."""
    name = label.strip()
    cost_sensitive = name.lower().endswith(CS_SUFFIX)
    if cost_sensitive:
        name = name[: -len(CS_SUFFIX)]
    if name not in METHODS:
        raise ConfigError(f"Unknown method {name!r}; expected one of {', '.join(METHODS)}")
    return name, cost_sensitive


def read_toml(path: Union[str, os.PathLike]) -> dict[str, Any]:
    """Parse a TOML file, raising :class:`ConfigError` on IO or syntax errors."""
    path = Path(path)
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e.strerror}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Invalid TOML in {path}: {e}") from e


def load_config(path: Union[str, os.PathLike]) -> ExperimentConfig:
    """Read and validate an experiment configuration."""
    config = ExperimentConfig.from_dict(read_toml(path))
    config.validate()
    logger.info(f"Loaded {config.label} config {config.fingerprint()} from {path}")
    return config


def load_matrix(path: Union[str, os.PathLike]) -> tuple[ExperimentConfig, MatrixSpec]:
    """Read a base configuration and its ``[matrix]`` table.

    The base configuration is not validated here: matrix cells override fields and
    are validated one by one when they run.
    """
    raw = read_toml(path)
    matrix = MatrixSpec.from_dict(raw.get("matrix", {}))
    return ExperimentConfig.from_dict(raw), matrix


__doc_title__ = "Configuration"
__all__ = [
    "ConfigError",
    "CsvSource",
    "DataSource",
    "ExperimentConfig",
    "MatrixSpec",
    "parse_method_label",
    "read_toml",
    "load_config",
    "load_matrix",
]
