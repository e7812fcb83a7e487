"""Loss-mixture filtering: train only on samples the mixture deems clean."""

import logging

from clinrisk.methods.base import EpochStats, TrainingMethod
from clinrisk.selection.gmm import (
    DegenerateLossError,
    SelectionMask,
    fit_gmm_em,
    gmm_select,
    normalize_losses,
)

logger = logging.getLogger(__name__)


class GmmFilter(TrainingMethod):
    """Single network trained on the low-loss component of a two-component mixture.

    After warmup, each epoch fits the mixture to the network's own normalized
    per-sample losses and keeps samples with clean posterior at least
    ``gmm_threshold`` (or the per-class ``class_thresholds``).
    """

    name = "gmm_filter"
    uses_warmup = True

    def select(self, epoch: int) -> SelectionMask:
        """Fit the loss mixture and threshold the clean posterior."""
        losses = self.train_losses(self.networks[0])
        normalized = normalize_losses(losses)
        try:
            gmm = fit_gmm_em(
                normalized, tol=self.config.gmm_tol, max_iter=self.config.gmm_max_iter
            )
        except DegenerateLossError as e:
            logger.warning(f"{e}")
            selection = SelectionMask.select_all(self.train.n_samples)
        else:
            selection = gmm_select(
                normalized,
                gmm,
                threshold=self.config.gmm_threshold,
                labels=self.train.observed_labels,
                class_thresholds=self.config.class_thresholds,
            )
        if selection.n_selected == 0:
            logger.warning(f"Epoch {epoch}: mixture selected no samples; using all")
            selection = SelectionMask.select_all(self.train.n_samples)
        self.dump_selection(epoch, losses, selection)
        return selection

    def train_epoch(self, epoch: int) -> EpochStats:
        """Train on the selected samples."""
        selection = self.select(epoch)
        logger.debug(f"Selected {selection.n_selected}/{self.train.n_samples} samples")
        loss = self.train_supervised(epoch, self.networks[0], selection.indices())
        return EpochStats(
            train_loss=loss,
            selected_fraction=selection.selected_fraction,
            selection=selection.mask,
        )


__all__ = ["GmmFilter"]
