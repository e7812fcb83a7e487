"""Imbalanced synthetic binary datasets standing in for binarized medical image sets."""

import logging
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from clinrisk.data.dataset import LabeledDataset
from clinrisk.utils.streams import Stream, check_seed, make_rng

logger = logging.getLogger(__name__)

OverlapMode = Literal["gaussian-blobs", "annular"]

#: Largest departure of a split's realized prevalence from ``positive_fraction``.
PREVALENCE_TOLERANCE = 0.02


def positive_count(positive_fraction: float, n: int) -> int:
    """Positives in a split of ``n`` samples; every split holds exactly this many."""
    return int(round(positive_fraction * n))


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a synthetic two-class dataset.

    Args:
        n_train: Training samples.
        n_val: Validation samples.
        n_test: Test samples.
        positive_fraction: Prevalence of the positive class in every split.
        feature_dim: Feature dimensions.
        class_separation: Distance between the class clusters (``gaussian-blobs``) or
            radial gap between the core and the ring (``annular``).
        within_class_spread: Per-dimension standard deviation inside a class.
        overlap_mode: ``gaussian-blobs`` for two Gaussian clusters, ``annular`` for a
            positive ring around a negative core (not linearly separable).
        seed: 64-bit unsigned seed.
    """

    n_train: int = 2000
    n_val: int = 400
    n_test: int = 1000
    positive_fraction: float = 0.195
    feature_dim: int = 8
    class_separation: float = 3.0
    within_class_spread: float = 1.0
    overlap_mode: OverlapMode = "gaussian-blobs"
    seed: int = 0

    def validate(self) -> None:
        """Raise ``ValueError`` if any parameter is out of range."""
        for name in ("n_train", "n_val", "n_test", "feature_dim"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value <= 0:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if not 0.0 < self.positive_fraction < 1.0:
            raise ValueError(
                f"positive_fraction must lie in (0, 1), got {self.positive_fraction}"
            )
        for name in ("n_train", "n_val", "n_test"):
            n = getattr(self, name)
            realized = positive_count(self.positive_fraction, n) / n
            if abs(realized - self.positive_fraction) > PREVALENCE_TOLERANCE:
                raise ValueError(
                    f"{name}={n} cannot hold prevalence {self.positive_fraction} within "
                    f"{PREVALENCE_TOLERANCE:.0%} (closest is {realized:.3f})"
                )
        if not self.class_separation > 0:
            raise ValueError(
                f"class_separation must be positive, got {self.class_separation}"
            )
        if not self.within_class_spread > 0:
            raise ValueError(
                f"within_class_spread must be positive, got {self.within_class_spread}"
            )
        if self.overlap_mode not in ("gaussian-blobs", "annular"):
            raise ValueError(f"Unknown overlap_mode {self.overlap_mode!r}")
        check_seed(self.seed)

    @classmethod
    def derma_like(cls, **overrides) -> "SyntheticSpec":
        """Desk-scale preset with 19.5% positives (dermoscopy prevalence)."""
        return replace(cls(positive_fraction=0.195), **overrides)

    @classmethod
    def path_like(cls, **overrides) -> "SyntheticSpec":
        """Desk-scale preset with 24.8% positives (histopathology prevalence)."""
        return replace(
            cls(n_train=4000, n_val=800, n_test=1500, positive_fraction=0.248),
            **overrides,
        )


PRESETS = {"derma": SyntheticSpec.derma_like, "path": SyntheticSpec.path_like}


def _sample_split(
    spec: SyntheticSpec, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    n_pos = positive_count(spec.positive_fraction, n)
    n_neg = n - n_pos
    d = spec.feature_dim
    spread = spec.within_class_spread

    if spec.overlap_mode == "gaussian-blobs":
        direction = np.ones(d) / np.sqrt(d)
        negatives = rng.normal(0.0, spread, size=(n_neg, d))
        positives = rng.normal(0.0, spread, size=(n_pos, d)) + (
            spec.class_separation * direction
        )
    else:
        core_radius = spread * np.sqrt(d)
        negatives = rng.normal(0.0, spread, size=(n_neg, d))
        directions = rng.normal(size=(n_pos, d))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        radii = core_radius + spec.class_separation + rng.normal(0.0, spread, n_pos)
        positives = directions * radii[:, None]

    features = np.concatenate([negatives, positives])
    labels = np.concatenate([np.zeros(n_neg, np.int64), np.ones(n_pos, np.int64)])
    order = rng.permutation(n)
    return features[order], labels[order]


def generate_synthetic(
    spec: SyntheticSpec,
) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """Generate clean train, validation and test splits.

    Each split has exactly ``round(positive_fraction * n)`` positives, which
    :meth:`SyntheticSpec.validate` has checked lies within ``PREVALENCE_TOLERANCE`` of
    the target. Splits draw from their own seeded streams, so they are disjoint by
    construction and the output is identical for a fixed seed.

    Returns:
        ``(train, val, test)`` with ``true_labels == observed_labels``.
    """
    spec.validate()
    splits = []
    for index, (split, n) in enumerate(
        (("train", spec.n_train), ("val", spec.n_val), ("test", spec.n_test))
    ):
        rng = make_rng(spec.seed, Stream.DATA, index)
        features, labels = _sample_split(spec, n, rng)
        splits.append(
            LabeledDataset(
                features=features,
                observed_labels=labels,
                true_labels=labels,
                split_tag=split,
            )
        )
    logger.debug(f"Generated synthetic splits: {splits}")
    return tuple(splits)


__doc_title__ = "Synthetic Data"
__all__ = [
    "PREVALENCE_TOLERANCE",
    "SyntheticSpec",
    "PRESETS",
    "positive_count",
    "generate_synthetic",
]
