"""Co-divided semi-supervised training and its class-uniform variant."""

import logging
import math
from typing import Optional

import numpy as np

from clinrisk.methods.base import EpochStats, Network, TrainingMethod
from clinrisk.nnet.losses import CostWeights
from clinrisk.selection.gmm import Gmm1d, SelectionMask, loss_posteriors
from clinrisk.selection.uniform import uniform_class_select
from clinrisk.semisup.mixmatch import (
    augment,
    co_guess,
    co_refine,
    lambda_u_at,
    mixup,
    semi_loss_terms,
    semi_loss_logit_gradient,
    sharpen,
)

logger = logging.getLogger(__name__)


class DivideMix(TrainingMethod):
    """Two networks, each trained semi-supervised on the division made by its peer.

    After warmup, every epoch and for each network:

    1. The *peer's* per-sample losses are normalized and fit with the loss mixture,
       giving clean posteriors ``w``.
    2. :meth:`divide` splits the data into labeled (clean) and unlabeled samples.
    3. Labeled targets are co-refined from the observed label and the network's
       averaged prediction over augmented views (then sharpened); unlabeled targets
       are co-guessed from both networks and sharpened.
    4. Labeled and unlabeled views are mixed up together and the network takes an
       SGD step on the semi-supervised objective.
    """

    name = "dividemix"
    n_networks = 2
    uses_warmup = True

    def __init__(self, config, train) -> None:
        super().__init__(config, train)
        self.aug_sigma = config.semi.aug_scale * train.features.std(axis=0)

    def divide(self, posterior: np.ndarray, gmm: Optional[Gmm1d]) -> SelectionMask:
        """Threshold the clean posterior."""
        if gmm is None:
            return SelectionMask.select_all(posterior.size)
        return SelectionMask(
            posterior >= self.config.gmm_threshold,
            posterior,
            threshold=self.config.gmm_threshold,
        )

    def _views(self, features: np.ndarray) -> list[np.ndarray]:
        return [
            augment(features, self.aug_sigma, self.augment_rng)
            for _ in range(self.config.semi.n_augment)
        ]

    def _semi_step(
        self,
        epoch: int,
        progress: float,
        net: Network,
        labeled: np.ndarray,
        unlabeled: np.ndarray,
        posterior: np.ndarray,
        weights: CostWeights,
    ) -> float:
        semi = self.config.semi
        features, labels = self.train.features, self.train.observed_labels

        x_views = self._views(features[labeled])
        refined = co_refine(
            labels[labeled],
            posterior[labeled],
            co_guess([net.probs(v) for v in x_views]),
        )
        if semi.sharpen_labeled:
            refined = sharpen(refined, semi.temperature)

        all_x = list(x_views)
        all_targets = [refined] * len(x_views)
        n_labeled_rows = labeled.size * len(x_views)
        if unlabeled.size:
            u_views = self._views(features[unlabeled])
            guessed = sharpen(
                co_guess([peer.probs(v) for peer in self.networks for v in u_views]),
                semi.temperature,
            )
            all_x += u_views
            all_targets += [guessed] * len(u_views)

        inputs = np.concatenate(all_x)
        targets = np.concatenate(all_targets)
        partner = self.mixup_rng.permutation(inputs.shape[0])
        mixed_x, mixed_targets, _ = mixup(
            (inputs, targets), (inputs[partner], targets[partner]), semi.alpha, self.mixup_rng
        )
        lam_u = lambda_u_at(progress, self.config.warmup_epochs, semi)
        x_targets, u_targets = mixed_targets[:n_labeled_rows], mixed_targets[n_labeled_rows:]

        def objective(probs):
            lx, lu = semi_loss_terms(
                probs[:n_labeled_rows], x_targets, probs[n_labeled_rows:], u_targets, weights
            )
            dx, du = semi_loss_logit_gradient(
                probs[:n_labeled_rows],
                x_targets,
                probs[n_labeled_rows:],
                u_targets,
                lam_u,
                weights,
            )
            return lx + lam_u * lu, np.concatenate([dx, du])

        return self.check_loss(epoch, net.step_with(mixed_x, objective))

    def _train_network(
        self, epoch: int, net: Network, selection: SelectionMask
    ) -> float:
        labeled_all = selection.indices()
        unlabeled_all = np.flatnonzero(~selection.mask)
        weights = self.cost_weights(epoch)
        if labeled_all.size == 0:
            logger.warning(f"Epoch {epoch}: no labeled samples; training on all")
            return self.train_supervised(epoch, net, weights=weights)

        batches = list(self.batches(labeled_all))
        size = self.config.batch_size
        unlabeled_order = unlabeled_all[self.batch_rng.permutation(unlabeled_all.size)]
        total, count = 0.0, 0
        for i, labeled in enumerate(batches):
            if unlabeled_order.size:
                # cycle through the unlabeled samples alongside the labeled batches
                start = i * size
                unlabeled = np.take(
                    unlabeled_order, np.arange(start, start + labeled.size), mode="wrap"
                )
            else:
                unlabeled = unlabeled_order
            loss = self._semi_step(
                epoch,
                epoch + i / len(batches),
                net,
                labeled,
                unlabeled,
                selection.clean_posterior,
                weights,
            )
            total += loss * labeled.size
            count += labeled.size
        return total / count

    def co_divide(self, epoch: int) -> list[SelectionMask]:
        """Divide the data for each network by its peer's losses.

        Both divisions are made from the networks as they stand at the start of the
        epoch, before either trains.
        """
        peer_losses = [self.train_losses(self.networks[1 - k]) for k in range(2)]
        selections = []
        for k, losses in enumerate(peer_losses):
            gmm, posterior = loss_posteriors(
                losses, tol=self.config.gmm_tol, max_iter=self.config.gmm_max_iter
            )
            selection = self.divide(posterior, gmm)
            logger.debug(
                f"Network {k}: {selection.n_selected} labeled, "
                f"{selection.mask.size - selection.n_selected} unlabeled"
            )
            selections.append(selection)
        self.dump_selection(epoch, peer_losses[0], selections[0])
        return selections

    def train_epoch(self, epoch: int) -> EpochStats:
        """Co-divide, then train both networks."""
        selections = self.co_divide(epoch)
        losses = [
            self._train_network(epoch, net, selection)
            for net, selection in zip(self.networks, selections)
        ]
        return EpochStats(
            train_loss=float(np.mean(losses)),
            selected_fraction=float(np.mean([s.selected_fraction for s in selections])),
            selection=selections[0].mask,
        )


class Unicon(DivideMix):
    """DivideMix with class-uniform selection.

    The labeled set spends the mixture's clean-mass estimate ``pi_clean`` as a budget,
    split equally between the observed classes and filled by the highest clean
    posteriors, so the minority class keeps its share of labeled samples.
    """

    name = "unicon"

    def divide(self, posterior: np.ndarray, gmm: Optional[Gmm1d]) -> SelectionMask:
        """Uniform per-class selection with budget ``pi_clean``."""
        if gmm is None:
            return SelectionMask.select_all(posterior.size)
        budget = min(max(gmm.pi_clean, 1e-12), 1.0)
        if math.floor(budget * posterior.size / 2) == 0:
            logger.warning(f"Clean mass {budget:.3g} leaves no per-class budget")
        return uniform_class_select(posterior, self.train.observed_labels, budget)


__all__ = ["DivideMix", "Unicon"]
