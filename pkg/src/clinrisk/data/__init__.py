"""Datasets, label binarization and label noise are given in ``clinrisk.data``.

Dataset Components
------------------

Every split is a :class:`LabeledDataset`: a feature matrix, the *observed* labels a
learner trains on and, whenever they are known, the hidden *true* labels together
with a ``flip_mask`` marking the corrupted samples. Keeping the ground truth next to
the corrupted labels is what makes selection quality measurable: a clean-sample
selector can be scored against ``~flip_mask``.

Datasets come from two sources:

1. :func:`generate_synthetic` draws imbalanced two-class data from a
   :class:`SyntheticSpec`. The presets :meth:`SyntheticSpec.derma_like` (19.5%
   positives) and :meth:`SyntheticSpec.path_like` (24.8% positives) mirror the
   prevalence of binarized dermoscopy and histopathology sets at desk scale.
2. :func:`ingest_csv` reads feature embeddings from CSV, optionally grouping source
   classes into benign/malignant with a :class:`BinarizationMap`.

Label Noise
-----------

:func:`inject_symmetric_noise` flips each *training* label independently with
probability ``eta`` from a seeded counter-based stream (:class:`NoiseSpec`).
Validation and test splits are refused, so evaluation always happens on clean
labels.

.. code-block:: python

    train, val, test = generate_synthetic(SyntheticSpec.derma_like(seed=7))
    noisy_train = inject_symmetric_noise(train, NoiseSpec(rate=0.4, seed=7))
    dump_csv(noisy_train, "train_eta40.csv")

"""

from clinrisk.data.dataset import (
    SPLITS,
    BinarizationMap,
    DatasetError,
    LabeledDataset,
    NoiseSpec,
)
from clinrisk.data.ingest import dump_csv, ingest_csv
from clinrisk.data.noise import inject_symmetric_noise
from clinrisk.data.synthetic import PRESETS, SyntheticSpec, generate_synthetic

__doc_title__ = "Data"
__all__ = [
    "LabeledDataset",
    "NoiseSpec",
    "BinarizationMap",
    "DatasetError",
    "SPLITS",
    "SyntheticSpec",
    "PRESETS",
    "generate_synthetic",
    "ingest_csv",
    "dump_csv",
    "inject_symmetric_noise",
]
