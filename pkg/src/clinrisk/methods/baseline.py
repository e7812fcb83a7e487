"""Plain supervised training without noise handling."""

from clinrisk.methods.base import EpochStats, TrainingMethod


class Baseline(TrainingMethod):
    """Trains one network on every sample with (optionally cost-sensitive) cross-entropy."""

    name = "baseline"

    def train_epoch(self, epoch: int) -> EpochStats:
        """Train on all samples."""
        return EpochStats(train_loss=self.train_supervised(epoch, self.networks[0]))


__all__ = ["Baseline"]
