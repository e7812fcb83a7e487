"""Labeled binary datasets with optional hidden ground truth."""

import hashlib
import logging
from dataclasses import dataclass, field, replace
from typing import Literal, Mapping, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

SplitTag = Literal["train", "val", "test"]
SPLITS = ("train", "val", "test")


class DatasetError(ValueError):
    """Raised for malformed datasets, misuse of splits and unusable label sets."""


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


def _as_binary(labels, name: str) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise DatasetError(f"{name} must be a vector, got shape {labels.shape}")
    if labels.size and not np.isin(labels, (0, 1)).all():
        bad = labels[~np.isin(labels, (0, 1))][0]
        raise DatasetError(f"{name} must be binary (0/1), found {bad!r}")
    return labels.astype(np.int64)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Feature matrix with observed labels and, when known, the hidden true labels.

    ``observed_labels`` are the labels a learner sees (possibly corrupted);
    ``true_labels`` and ``flip_mask`` are present iff the ground truth is known,
    either because the data is synthetic or because noise was injected. Arrays are
    read-only after construction, so datasets may be shared across runs.

    Args:
        features: ``(n, d)`` real-valued feature matrix.
        observed_labels: ``(n,)`` labels in ``{0, 1}``; 1 is the positive (malignant)
            class.
        true_labels: Optional ``(n,)`` hidden true labels.
        flip_mask: Optional ``(n,)`` boolean mask of corrupted samples. Computed from
            the labels when ``true_labels`` is given without it.
        split_tag: One of ``train``, ``val`` or ``test``.
        feature_names: Column names, defaulting to ``x0 ... x{d-1}``.
    """

    features: np.ndarray
    observed_labels: np.ndarray
    true_labels: Optional[np.ndarray] = None
    flip_mask: Optional[np.ndarray] = None
    split_tag: SplitTag = "train"
    feature_names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim != 2:
            raise DatasetError(f"features must be a matrix, got shape {features.shape}")
        observed = _as_binary(self.observed_labels, "observed_labels")
        if observed.shape[0] != features.shape[0]:
            raise DatasetError(
                f"{features.shape[0]} feature rows but {observed.shape[0]} labels"
            )
        if self.split_tag not in SPLITS:
            raise DatasetError(f"Unknown split_tag {self.split_tag!r}")

        true = flips = None
        if self.true_labels is not None:
            true = _as_binary(self.true_labels, "true_labels")
            if true.shape != observed.shape:
                raise DatasetError("true_labels length differs from observed_labels")
            flips = observed != true
            if self.flip_mask is not None:
                given = np.asarray(self.flip_mask, dtype=bool)
                if given.shape != observed.shape or not np.array_equal(given, flips):
                    raise DatasetError(
                        "flip_mask must mark exactly the samples whose observed "
                        "label differs from the true label"
                    )
        elif self.flip_mask is not None:
            raise DatasetError("flip_mask given without true_labels")
        if flips is not None and self.split_tag != "train" and flips.any():
            raise DatasetError(
                f"{self.split_tag} split must be clean but has {int(flips.sum())} "
                "flipped labels"
            )

        names = tuple(self.feature_names) or tuple(
            f"x{i}" for i in range(features.shape[1])
        )
        if len(names) != features.shape[1]:
            raise DatasetError(
                f"{len(names)} feature names for {features.shape[1]} feature columns"
            )

        object.__setattr__(self, "features", _frozen(features))
        object.__setattr__(self, "observed_labels", _frozen(observed))
        object.__setattr__(self, "true_labels", None if true is None else _frozen(true))
        object.__setattr__(self, "flip_mask", None if flips is None else _frozen(flips))
        object.__setattr__(self, "feature_names", names)

    @property
    def n_samples(self) -> int:
        """Number of samples."""
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        """Number of feature columns."""
        return self.features.shape[1]

    @property
    def has_ground_truth(self) -> bool:
        """Whether the hidden true labels are known."""
        return self.true_labels is not None

    @property
    def positive_fraction(self) -> float:
        """Fraction of observed labels equal to 1."""
        if self.n_samples == 0:
            return 0.0
        return float(self.observed_labels.mean())

    def class_counts(self) -> tuple[int, int]:
        """Number of observed negatives and positives."""
        positives = int(self.observed_labels.sum())
        return self.n_samples - positives, positives

    def require_both_classes(self) -> None:
        """Raise :class:`DatasetError` unless both classes are observed."""
        negatives, positives = self.class_counts()
        if negatives == 0 or positives == 0:
            raise DatasetError(
                f"{self.split_tag} split has a single class "
                f"({negatives} negatives, {positives} positives); metrics need both"
            )

    def with_split(self, split_tag: SplitTag) -> "LabeledDataset":
        """Copy of the dataset under a different split tag."""
        return replace(self, split_tag=split_tag)

    def fingerprint(self) -> str:
        """Content hash over the features and all label vectors."""
        digest = hashlib.sha256()
        digest.update(self.split_tag.encode())
        digest.update(",".join(self.feature_names).encode())
        for array in (self.features, self.observed_labels, self.true_labels):
            if array is not None:
                digest.update(str(array.shape).encode())
                digest.update(array.tobytes())
        return digest.hexdigest()[:16]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return (
            self.split_tag == other.split_tag
            and self.feature_names == other.feature_names
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.observed_labels, other.observed_labels)
            and _optional_equal(self.true_labels, other.true_labels)
            and _optional_equal(self.flip_mask, other.flip_mask)
        )

    __hash__ = None

    def __repr__(self) -> str:
        negatives, positives = self.class_counts()
        return (
            f"LabeledDataset({self.split_tag}, n={self.n_samples}, "
            f"d={self.n_features}, pos={positives}, neg={negatives}, "
            f"noisy={int(self.flip_mask.sum()) if self.flip_mask is not None else 'n/a'})"
        )


def _optional_equal(a: Optional[np.ndarray], b: Optional[np.ndarray]) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return np.array_equal(a, b)


@dataclass(frozen=True)
class NoiseSpec:
    """Symmetric label noise realization parameters.

    Args:
        rate: Flip probability ``eta`` in ``[0, 1]``.
        seed: 64-bit unsigned seed of the noise stream.
    """

    rate: float
    seed: int = 0


SourceClass = Union[str, int]


@dataclass(frozen=True)
class BinarizationMap:
    """Grouping of source class identifiers into the binary task.

    Identifiers are compared as strings, so ``{1: 1}`` and ``{"1": 1}`` are the same
    map (CSV label cells are read as text).
    """

    mapping: Mapping[SourceClass, int]

    def __post_init__(self) -> None:
        normalized = {}
        for source, target in dict(self.mapping).items():
            if target not in (0, 1):
                raise DatasetError(
                    f"Class {source!r} maps to {target!r}; targets must be 0 or 1"
                )
            normalized[str(source).strip()] = int(target)
        if set(normalized.values()) != {0, 1}:
            raise DatasetError(
                "Binarization map must send at least one class to each of 0 and 1"
            )
        object.__setattr__(self, "mapping", normalized)

    def apply(self, values) -> np.ndarray:
        """Map raw class identifiers to ``{0, 1}``.

        Raises:
            DatasetError: Naming the first unmapped value and its (0-based) row.
        """
        out = np.empty(len(values), dtype=np.int64)
        for row, value in enumerate(values):
            key = str(value).strip()
            try:
                out[row] = self.mapping[key]
            except KeyError:
                raise DatasetError(
                    f"Class value {key!r} in row {row} is not in the binarization map"
                ) from None
        return out

    @classmethod
    def derma(cls) -> "BinarizationMap":
        """Dermoscopy grouping: melanoma, basal cell carcinoma, actinic keratosis are malignant."""
        return cls(
            {"mel": 1, "bcc": 1, "akiec": 1, "nv": 0, "bkl": 0, "vasc": 0, "df": 0}
        )


__doc_title__ = "Datasets"
__all__ = [
    "LabeledDataset",
    "NoiseSpec",
    "BinarizationMap",
    "DatasetError",
    "SPLITS",
]
