"""CSV ingestion of feature embeddings and reproducibility dumps."""

import logging
import os
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from clinrisk.data.dataset import BinarizationMap, DatasetError, LabeledDataset

logger = logging.getLogger(__name__)

TRUE_LABEL_COLUMN = "true_label"
FLIP_COLUMN = "flip"

PathLike = Union[str, os.PathLike]


def _binary_column(values: pd.Series, name: str) -> np.ndarray:
    numeric = pd.to_numeric(values, errors="coerce")
    bad = numeric.isna() | ~numeric.isin((0, 1))
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise DatasetError(
            f"Column {name!r} row {row}: {values.iloc[row]!r} is not a 0/1 label"
        )
    return numeric.to_numpy(dtype=np.int64)


def ingest_csv(
    path: PathLike,
    label_column: str,
    binarization: Optional[BinarizationMap] = None,
    split_tag: str = "train",
) -> LabeledDataset:
    """Read a labeled dataset from a UTF-8, comma-separated file with a header row.

    Features are all columns other than ``label_column``, ``true_label`` and ``flip``,
    in header order. Labels are mapped through ``binarization`` when given, and must
    otherwise already be 0/1. A ``true_label`` column populates the ground truth (and
    with it the flip mask).

    Args:
        path: CSV file.
        label_column: Name of the observed label column.
        binarization: Optional map from source class identifiers to 0/1.
        split_tag: Split the file represents.

    Raises:
        DatasetError: Missing file or column, non-numeric feature cell (naming the
            column and 0-based row), or a label value absent from the map.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"No such dataset file: {path}")
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    if label_column not in frame.columns:
        raise DatasetError(
            f"Label column {label_column!r} not in {path.name} header {list(frame.columns)}"
        )

    feature_names = [
        c for c in frame.columns if c not in (label_column, TRUE_LABEL_COLUMN, FLIP_COLUMN)
    ]
    features = np.empty((len(frame), len(feature_names)), dtype=np.float64)
    for j, name in enumerate(feature_names):
        cells = frame[name].str.strip()
        invalid = pd.to_numeric(cells, errors="coerce").isna().to_numpy()
        if invalid.any():
            row = int(np.flatnonzero(invalid)[0])
            raise DatasetError(
                f"Non-numeric cell {frame[name].iloc[row]!r} in column {name!r} row {row}"
            )
        # pandas' fast parser can be 1 ulp off; float() rounds correctly
        features[:, j] = cells.to_numpy(dtype=object).astype(np.float64)

    if binarization is not None:
        observed = binarization.apply(frame[label_column].tolist())
    else:
        observed = _binary_column(frame[label_column], label_column)

    true_labels = None
    if TRUE_LABEL_COLUMN in frame.columns:
        if binarization is not None and not frame[TRUE_LABEL_COLUMN].str.strip().isin(
            ("0", "1")
        ).all():
            true_labels = binarization.apply(frame[TRUE_LABEL_COLUMN].tolist())
        else:
            true_labels = _binary_column(frame[TRUE_LABEL_COLUMN], TRUE_LABEL_COLUMN)

    dataset = LabeledDataset(
        features=features,
        observed_labels=observed,
        true_labels=true_labels,
        split_tag=split_tag,
        feature_names=tuple(feature_names),
    )
    logger.info(f"Ingested {dataset} from {path}")
    return dataset


def dump_csv(dataset: LabeledDataset, path: PathLike, label_column: str = "label") -> None:
    """Write ``dataset`` in the ingestion schema plus ``true_label`` and ``flip`` columns.

    Floats are written with round-trip precision so that re-ingesting the dump yields
    an identical dataset.
    """
    frame = pd.DataFrame(dataset.features, columns=list(dataset.feature_names))
    frame[label_column] = dataset.observed_labels
    if dataset.has_ground_truth:
        frame[TRUE_LABEL_COLUMN] = dataset.true_labels
        frame[FLIP_COLUMN] = dataset.flip_mask.astype(np.int64)
    frame.to_csv(path, index=False, float_format="%.17g", encoding="utf-8")


__doc_title__ = "CSV Ingestion"
__all__ = ["ingest_csv", "dump_csv"]
