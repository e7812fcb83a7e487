"""Seeded symmetric label noise."""

import logging

import numpy as np

from clinrisk.data.dataset import DatasetError, LabeledDataset, NoiseSpec
from clinrisk.utils.streams import Stream, make_rng

logger = logging.getLogger(__name__)


def inject_symmetric_noise(dataset: LabeledDataset, spec: NoiseSpec) -> LabeledDataset:
    """Independently flip each training label with probability ``spec.rate``.

    One uniform variate is drawn per sample, in storage order, from the Philox stream
    of ``spec.seed``; sample ``i`` is flipped iff its variate is below the rate. For
    binary labels a flip maps ``0 <-> 1``, so symmetric and class-conditional noise
    coincide.

    The labels before injection become ``true_labels`` (or the existing ground truth
    is kept if the dataset already carries it), and ``flip_mask`` marks every
    sample whose observed label now differs from it.

    Args:
        dataset: A ``train`` split; validation and test splits stay clean.
        spec: Noise rate and seed.

    Returns:
        A corrupted copy of ``dataset``.
    """
    if dataset.split_tag != "train":
        raise DatasetError(
            f"Refusing to corrupt the {dataset.split_tag} split; only train is noisy"
        )
    if not 0.0 <= spec.rate <= 1.0:
        raise ValueError(f"Noise rate must lie in [0, 1], got {spec.rate}")

    rng = make_rng(spec.seed, Stream.NOISE)
    flips = rng.random(dataset.n_samples) < spec.rate
    observed = np.where(flips, 1 - dataset.observed_labels, dataset.observed_labels)
    true = dataset.true_labels if dataset.has_ground_truth else dataset.observed_labels
    logger.info(
        f"Flipped {int(flips.sum())}/{dataset.n_samples} labels at rate {spec.rate}"
    )
    return LabeledDataset(
        features=dataset.features,
        observed_labels=observed,
        true_labels=true,
        split_tag=dataset.split_tag,
        feature_names=dataset.feature_names,
    )


__all__ = ["inject_symmetric_noise"]
