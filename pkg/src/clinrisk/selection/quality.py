"""Per-epoch loss traces and selection diagnostics against the hidden flip mask."""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from clinrisk.selection.gmm import SelectionMask

logger = logging.getLogger(__name__)

DUMP_COLUMNS = ["epoch", "sample_index", "loss", "clean_posterior", "selected", "truly_clean"]


@dataclass(frozen=True, eq=False)
class LossTrace:
    """Unweighted per-sample training losses of one epoch."""

    losses: np.ndarray
    epoch: int

    def __post_init__(self) -> None:
        losses = np.asarray(self.losses, dtype=np.float64)
        if losses.ndim != 1:
            raise ValueError(f"Losses must be a vector, got shape {losses.shape}")
        if not np.isfinite(losses).all() or (losses < 0).any():
            raise ValueError(f"Epoch {self.epoch} losses must be finite and non-negative")
        object.__setattr__(self, "losses", losses)

    def __len__(self) -> int:
        return self.losses.size


@dataclass(frozen=True)
class SelectionQuality:
    """How well a clean selection matches ``~flip_mask``.

    ``precision`` is the clean fraction of the selection, ``recall`` the selected
    fraction of the clean samples and ``agreement`` the fraction of samples where
    "selected" equals "not flipped". Rates with empty denominators are ``None``.
    """

    precision: Optional[float]
    recall: Optional[float]
    agreement: float


def selection_quality(mask: np.ndarray, flip_mask: np.ndarray) -> SelectionQuality:
    """Score a selection against the true flip mask."""
    selected = np.asarray(mask, dtype=bool)
    clean = ~np.asarray(flip_mask, dtype=bool)
    if selected.shape != clean.shape:
        raise ValueError(f"Mask {selected.shape} does not match flip mask {clean.shape}")
    hits = int((selected & clean).sum())
    n_selected, n_clean = int(selected.sum()), int(clean.sum())
    return SelectionQuality(
        precision=hits / n_selected if n_selected else None,
        recall=hits / n_clean if n_clean else None,
        agreement=float((selected == clean).mean()) if selected.size else 1.0,
    )


def write_selection_dump(
    path: Union[str, os.PathLike],
    trace: LossTrace,
    selection: SelectionMask,
    flip_mask: Optional[np.ndarray] = None,
) -> None:
    """Append one epoch of selection diagnostics to a CSV file.

    The header is written when the file does not exist yet. ``truly_clean`` is empty
    when the ground truth is unknown.
    """
    if len(trace) != selection.mask.size:
        raise ValueError(f"{len(trace)} losses for a mask over {selection.mask.size} samples")
    truly_clean = (
        pd.array([None] * len(trace), dtype="Int64")
        if flip_mask is None
        else pd.array((~np.asarray(flip_mask, dtype=bool)).astype(np.int64), dtype="Int64")
    )
    frame = pd.DataFrame(
        {
            "epoch": trace.epoch,
            "sample_index": np.arange(len(trace)),
            "loss": trace.losses,
            "clean_posterior": selection.clean_posterior,
            "selected": selection.mask.astype(np.int64),
            "truly_clean": truly_clean,
        },
        columns=DUMP_COLUMNS,
    )
    path = Path(path)
    exists = path.exists()
    frame.to_csv(path, mode="a", header=not exists, index=False, float_format="%.17g")
    logger.debug(f"Wrote epoch {trace.epoch} selection dump to {path}")


__doc_title__ = "Selection Diagnostics"
__all__ = ["LossTrace", "SelectionQuality", "selection_quality", "write_selection_dump"]
