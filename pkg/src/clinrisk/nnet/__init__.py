"""A compact feed-forward classifier is trained with the tools in ``clinrisk.nnet``.

The backbone is a multilayer perceptron with rectifier hidden layers and a two-logit
softmax head (:class:`MlpParams`). Gradients are derived by hand: the loss functions
return the gradient with respect to the logits and :func:`backprop` carries it
through the layers, so any objective expressed on the output probabilities (plain
cross-entropy, the cost-sensitive loss, the semi-supervised objective) trains the
same network.

Cost-Sensitive Loss
-------------------

:class:`CostWeights` ``(w0, w1)`` scale each sample's cross-entropy by the weight of
its class. With ``(1, 1)`` the loss is plain cross-entropy; clinically motivated runs
use ``w1 = 20`` so that a missed malignancy costs twenty times a false alarm. Soft
targets use the expected weight ``q0 * w0 + q1 * w1``.

Optimization
------------

:func:`sgd_momentum_step` applies classic (non-Nesterov) momentum with the buffers
held in an :class:`OptimState`, whose learning rate follows :func:`cosine_lr`.

.. code-block:: python

    params = init_mlp(n_features=8, rng=make_rng(0, Stream.INIT))
    state = OptimState(params, base_lr=0.01, momentum=0.9, total_epochs=60)
    loss, grads, _ = loss_and_gradients(params, X, y, CostWeights(1, 20))
    params = sgd_momentum_step(params, grads, state)

Checkpoints written by :func:`save_params` are JSON and reload bit-exactly.
"""

from clinrisk.nnet.losses import (
    PROB_FLOOR,
    UNIT_WEIGHTS,
    CostWeights,
    as_targets,
    cross_entropy_per_sample,
    cs_logit_gradient,
    cs_loss_per_sample,
    one_hot,
)
from clinrisk.nnet.mlp import (
    ForwardCache,
    MlpParams,
    NonFiniteError,
    backprop,
    backward,
    forward,
    forward_cached,
    init_mlp,
    load_params,
    loss_and_gradients,
    predict,
    save_params,
    softmax,
)
from clinrisk.nnet.optim import OptimState, cosine_lr, sgd_momentum_step

__doc_title__ = "Neural Network"
__all__ = [
    "CostWeights",
    "UNIT_WEIGHTS",
    "PROB_FLOOR",
    "one_hot",
    "as_targets",
    "cs_loss_per_sample",
    "cross_entropy_per_sample",
    "cs_logit_gradient",
    "MlpParams",
    "ForwardCache",
    "NonFiniteError",
    "init_mlp",
    "softmax",
    "forward",
    "forward_cached",
    "backprop",
    "backward",
    "loss_and_gradients",
    "predict",
    "save_params",
    "load_params",
    "OptimState",
    "cosine_lr",
    "sgd_momentum_step",
]
