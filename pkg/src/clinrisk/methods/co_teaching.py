"""Two networks teaching each other with small-loss samples."""

import logging

import numpy as np

from clinrisk.methods.base import EpochStats, TrainingMethod
from clinrisk.selection.small_loss import forget_rate, small_loss_select

logger = logging.getLogger(__name__)


class CoTeaching(TrainingMethod):
    """Each network trains on the small-loss samples selected by its peer.

    The kept fraction follows :func:`~clinrisk.selection.forget_rate`, ramping from
    all samples down to ``1 - eta`` over ``forget_ramp_epochs``, where ``eta`` is the
    configured ``forget_rate`` or, by default, the noise rate. Selection happens
    within every mini-batch (``coteaching_granularity = "batch"``) or once per epoch
    over the whole training set (``"epoch"``).
    """

    name = "co_teaching"
    n_networks = 2

    def keep_fraction(self, epoch: int) -> float:
        """Fraction of small-loss samples kept at ``epoch``."""
        eta = self.config.forget_rate
        if eta is None:
            eta = self.config.noise_rate
        return forget_rate(epoch, eta, self.config.forget_ramp_epochs)

    def train_epoch(self, epoch: int) -> EpochStats:
        """Cross-train both networks on their peer's small-loss selections."""
        keep = self.keep_fraction(epoch)
        logger.debug(f"Keeping the {keep:.3f} smallest-loss fraction")
        if self.config.coteaching_granularity == "epoch":
            return self._epoch_exchange(epoch, keep)
        return self._batch_exchange(epoch, keep)

    def _batch_exchange(self, epoch: int, keep: float) -> EpochStats:
        net_a, net_b = self.networks
        weights = self.cost_weights(epoch)
        features, labels = self.train.features, self.train.observed_labels
        chosen_for_a = np.zeros(self.train.n_samples, dtype=bool)
        total, count, n_trained = 0.0, 0, 0
        for batch in self.batches(np.arange(self.train.n_samples)):
            x, y = features[batch], labels[batch]
            keep_a = small_loss_select(net_a.sample_losses(x, y), keep)
            keep_b = small_loss_select(net_b.sample_losses(x, y), keep)
            # each network learns from the samples its peer finds easy
            loss_a = net_a.step(x[keep_b], y[keep_b], weights)
            loss_b = net_b.step(x[keep_a], y[keep_a], weights)
            chosen_for_a[batch[keep_b]] = True
            total += self.check_loss(epoch, 0.5 * (loss_a + loss_b)) * batch.size
            count += batch.size
            n_trained += keep_a.size + keep_b.size
        return EpochStats(
            train_loss=total / count,
            selected_fraction=n_trained / (2 * self.train.n_samples),
            selection=chosen_for_a,
        )

    def _epoch_exchange(self, epoch: int, keep: float) -> EpochStats:
        selections = [
            small_loss_select(self.train_losses(net), keep) for net in self.networks
        ]
        losses = []
        for k, net in enumerate(self.networks):
            peer_choice = selections[1 - k]
            losses.append(self.train_supervised(epoch, net, peer_choice))
        chosen_for_a = np.zeros(self.train.n_samples, dtype=bool)
        chosen_for_a[selections[1]] = True
        return EpochStats(
            train_loss=float(np.mean(losses)),
            selected_fraction=float(np.mean([s.size for s in selections]))
            / self.train.n_samples,
            selection=chosen_for_a,
        )


__all__ = ["CoTeaching"]
