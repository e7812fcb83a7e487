"""Shared machinery of training methods."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator, Optional

import numpy as np

from clinrisk.data.dataset import LabeledDataset
from clinrisk.nnet.losses import UNIT_WEIGHTS, CostWeights, cross_entropy_per_sample
from clinrisk.nnet.mlp import (
    MlpParams,
    backprop,
    forward,
    forward_cached,
    init_mlp,
    loss_and_gradients,
)
from clinrisk.nnet.optim import OptimState, sgd_momentum_step
from clinrisk.selection.gmm import SelectionMask
from clinrisk.selection.quality import LossTrace, write_selection_dump
from clinrisk.utils.functional import AbstractClassProperty
from clinrisk.utils.streams import Stream, make_rng

if TYPE_CHECKING:  # pragma: no cover
    from clinrisk.harness.config import ExperimentConfig

logger = logging.getLogger(__name__)


class NonFiniteLossError(RuntimeError):
    """Raised when a training loss becomes non-finite; the run is aborted."""

    def __init__(self, epoch: int, value: float) -> None:
        super().__init__(f"Non-finite training loss {value} at epoch {epoch}")
        self.epoch = epoch


@dataclass(frozen=True)
class EpochStats:
    """What a method reports about one training epoch.

    Args:
        train_loss: Mean training objective over the epoch's batches.
        selected_fraction: Fraction of training samples trained on as labeled/clean,
            averaged over networks.
        selection: Clean-selection mask over the training set, if the method selects.
    """

    train_loss: float
    selected_fraction: float = 1.0
    selection: Optional[np.ndarray] = None


class Network:
    """Parameters and optimizer state of one classifier.

    Args:
        params: Initial parameters.
        config: Run configuration providing the optimizer settings.
    """

    def __init__(self, params: MlpParams, config: "ExperimentConfig") -> None:
        self.params = params
        self.optim = OptimState(
            params,
            base_lr=config.base_lr,
            momentum=config.momentum,
            total_epochs=config.epochs,
        )

    def probs(self, features: np.ndarray) -> np.ndarray:
        """Softmax outputs on ``features``."""
        return forward(self.params, features)[1]

    def sample_losses(self, features: np.ndarray, labels: np.ndarray) -> np.ndarray:
        """Unweighted cross-entropy of every sample."""
        return cross_entropy_per_sample(self.probs(features), labels)

    def step(
        self, features: np.ndarray, targets: np.ndarray, weights: CostWeights
    ) -> float:
        """One SGD step on the mean cost-sensitive loss; returns the batch loss."""
        loss, grads, _ = loss_and_gradients(self.params, features, targets, weights)
        self.params = sgd_momentum_step(self.params, grads, self.optim)
        return loss

    def step_with(self, features: np.ndarray, objective) -> float:
        """One SGD step on a custom objective of the output probabilities.

        Args:
            features: Batch inputs.
            objective: Callable mapping probabilities to ``(loss, dloss/dlogits)``.
        """
        cache = forward_cached(self.params, features)
        loss, dlogits = objective(cache.probs)
        grads = backprop(self.params, cache, dlogits)
        self.params = sgd_momentum_step(self.params, grads, self.optim)
        return loss


class TrainingMethod(ABC):
    """Base class for noisy-label training strategies.

    Subclasses define how one epoch is trained; the base class owns the networks,
    the seeded streams, batching and the cost-weight schedule.
    """

    name: str = AbstractClassProperty()
    #: Number of independently initialized networks.
    n_networks: int = 1
    #: Whether epochs ``[0, warmup_epochs)`` train on every sample with plain loss.
    uses_warmup: bool = False

    def __init__(self, config: "ExperimentConfig", train: LabeledDataset) -> None:
        """Set up networks and random streams for one run.

        Args:
            config: Validated run configuration.
            train: Training split, possibly with injected noise.
        """
        self.config = config
        self.train = train
        seed = config.effective_train_seed
        self.networks = [
            Network(
                init_mlp(
                    train.n_features,
                    make_rng(seed, Stream.INIT, k),
                    hidden_sizes=config.hidden_sizes,
                ),
                config,
            )
            for k in range(self.n_networks)
        ]
        self.batch_rng = make_rng(seed, Stream.BATCHES)
        self.augment_rng = make_rng(seed, Stream.AUGMENT)
        self.mixup_rng = make_rng(seed, Stream.MIXUP)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(networks={self.n_networks})"

    def in_warmup(self, epoch: int) -> bool:
        """Whether ``epoch`` is a warmup epoch of this method."""
        return self.uses_warmup and epoch < self.config.warmup_epochs

    def cost_weights(self, epoch: int) -> CostWeights:
        """Class weights of supervised terms at ``epoch``."""
        if not self.config.cost_sensitive:
            return UNIT_WEIGHTS
        if self.in_warmup(epoch) and not self.config.cs_during_warmup:
            return UNIT_WEIGHTS
        return self.config.cost_weights

    def batches(self, indices: np.ndarray) -> Iterator[np.ndarray]:
        """Shuffle ``indices`` and yield them in mini-batches, keeping the last partial one."""
        shuffled = indices[self.batch_rng.permutation(indices.size)]
        size = self.config.batch_size
        for start in range(0, shuffled.size, size):
            yield shuffled[start : start + size]

    def check_loss(self, epoch: int, loss: float) -> float:
        """Raise :class:`NonFiniteLossError` on a non-finite loss."""
        if not np.isfinite(loss):
            raise NonFiniteLossError(epoch, loss)
        return loss

    def train_supervised(
        self,
        epoch: int,
        network: Network,
        indices: Optional[np.ndarray] = None,
        weights: Optional[CostWeights] = None,
    ) -> float:
        """Train ``network`` for one pass over ``indices`` on observed labels.

        Returns:
            Sample-weighted mean batch loss.
        """
        if indices is None:
            indices = np.arange(self.train.n_samples)
        weights = self.cost_weights(epoch) if weights is None else weights
        total, count = 0.0, 0
        for batch in self.batches(indices):
            loss = network.step(
                self.train.features[batch], self.train.observed_labels[batch], weights
            )
            total += self.check_loss(epoch, loss) * batch.size
            count += batch.size
        return total / count if count else 0.0

    def warmup_epoch(self, epoch: int) -> EpochStats:
        """Train every network on all samples."""
        losses = [self.train_supervised(epoch, net) for net in self.networks]
        return EpochStats(train_loss=float(np.mean(losses)))

    def train_losses(self, network: Network) -> np.ndarray:
        """Unweighted per-sample losses of ``network`` on the training set."""
        return network.sample_losses(self.train.features, self.train.observed_labels)

    def dump_selection(self, epoch: int, losses: np.ndarray, selection: SelectionMask) -> None:
        """Append the epoch's selection to the configured dump file, if any."""
        if self.config.selection_dump:
            write_selection_dump(
                self.config.selection_dump,
                LossTrace(losses, epoch),
                selection,
                self.train.flip_mask,
            )

    def run_epoch(self, epoch: int) -> EpochStats:
        """Advance learning rates and train one epoch."""
        for net in self.networks:
            net.optim.set_epoch(epoch)
        if self.in_warmup(epoch):
            return self.warmup_epoch(epoch)
        return self.train_epoch(epoch)

    @abstractmethod  # pragma: no cover
    def train_epoch(self, epoch: int) -> EpochStats:
        """Train one post-warmup epoch.

        To define a new method, this method must be implemented.
        """
        pass

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        """Positive-class probability averaged over the networks."""
        return np.mean([net.probs(features)[:, 1] for net in self.networks], axis=0)


__doc_title__ = "Method Base"
__all__ = ["TrainingMethod", "Network", "EpochStats", "NonFiniteLossError"]
