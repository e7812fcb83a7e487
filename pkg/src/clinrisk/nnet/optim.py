"""SGD with classic momentum and a cosine-annealed learning rate."""

import logging
import math
from typing import Optional

import numpy as np

from clinrisk.nnet.mlp import MlpParams

logger = logging.getLogger(__name__)


def cosine_lr(epoch: int, total_epochs: int, base_lr: float) -> float:
    """Cosine-annealed learning rate ``0.5 * base_lr * (1 + cos(pi * epoch / total))``.

    Args:
        epoch: Current epoch in ``[0, total_epochs)``.
        total_epochs: Length of the schedule.
        base_lr: Learning rate at epoch 0.
    """
    if total_epochs < 1:
        raise ValueError(f"total_epochs must be at least 1, got {total_epochs}")
    if not 0 <= epoch < total_epochs:
        raise ValueError(f"Epoch {epoch} outside schedule [0, {total_epochs})")
    return 0.5 * base_lr * (1.0 + math.cos(math.pi * epoch / total_epochs))


class OptimState:
    """Momentum buffers and learning-rate schedule of one network.

    Args:
        params: Parameters the buffers mirror; buffers start at zero.
        base_lr: Learning rate at epoch 0.
        momentum: Momentum coefficient in ``[0, 1)``.
        total_epochs: Schedule length used by :func:`cosine_lr`.
        anneal: If ``False`` the learning rate stays at ``base_lr``.
    """

    def __init__(
        self,
        params: MlpParams,
        base_lr: float = 0.01,
        momentum: float = 0.9,
        total_epochs: int = 1,
        anneal: bool = True,
    ) -> None:
        if not base_lr > 0:
            raise ValueError(f"base_lr must be positive, got {base_lr}")
        if not 0.0 <= momentum < 1.0:
            raise ValueError(f"momentum must lie in [0, 1), got {momentum}")
        self.buffers = [np.zeros_like(a) for a in params.arrays()]
        self.base_lr = base_lr
        self.momentum = momentum
        self.total_epochs = total_epochs
        self.anneal = anneal
        self.epoch = 0

    @property
    def lr(self) -> float:
        """Learning rate for the current epoch."""
        if not self.anneal:
            return self.base_lr
        return cosine_lr(self.epoch, self.total_epochs, self.base_lr)

    def set_epoch(self, epoch: int) -> None:
        """Advance the schedule to ``epoch``."""
        if self.anneal and not 0 <= epoch < self.total_epochs:
            raise ValueError(f"Epoch {epoch} outside schedule [0, {self.total_epochs})")
        self.epoch = epoch

    def __repr__(self) -> str:
        return (
            f"OptimState(lr={self.lr:.3g}, momentum={self.momentum}, "
            f"epoch={self.epoch}/{self.total_epochs})"
        )


def sgd_momentum_step(
    params: MlpParams, grads: MlpParams, state: OptimState, lr: Optional[float] = None
) -> MlpParams:
    """One classic-momentum step: ``v <- mu * v + g``, ``theta <- theta - lr * v``.

    Updates ``state.buffers`` in place and returns new parameters.

    Args:
        params: Current parameters.
        grads: Gradients with the shapes of ``params``.
        state: Optimizer state owned by the network.
        lr: Learning rate override; defaults to ``state.lr``.
    """
    lr = state.lr if lr is None else lr
    arrays, grad_arrays = params.arrays(), grads.arrays()
    if len(arrays) != len(grad_arrays) or len(arrays) != len(state.buffers):
        raise ValueError("Gradient and buffer layouts do not match the parameters")
    updated = []
    for k, (theta, grad, buffer) in enumerate(zip(arrays, grad_arrays, state.buffers)):
        if theta.shape != grad.shape or theta.shape != buffer.shape:
            raise ValueError(
                f"Array {k}: parameter {theta.shape}, gradient {grad.shape}, "
                f"buffer {buffer.shape}"
            )
        buffer *= state.momentum
        buffer += grad
        updated.append(theta - lr * buffer)
    return MlpParams.from_arrays(updated)


__doc_title__ = "Optimizer"
__all__ = ["cosine_lr", "OptimState", "sgd_momentum_step"]
