"""Semi-supervised training pieces used after clean/noisy division live in ``clinrisk.semisup``.

Once a selector has split the training set, samples judged clean keep a refined
version of their label while the rest are treated as unlabeled:

* :func:`co_refine` blends each observed label with the averaged prediction,
  weighted by the clean posterior.
* :func:`co_guess` averages both networks' predictions over augmented views of an
  unlabeled sample, and :func:`sharpen` lowers the entropy of the guess.
* :func:`mixup` mixes samples and targets with a ``Beta(alpha, alpha)`` coefficient
  kept at least 0.5.
* :func:`semi_loss` combines the (optionally cost-weighted) soft cross-entropy on
  labeled samples with a ramped squared-error term on unlabeled ones;
  :func:`semi_loss_logit_gradient` is its gradient for backpropagation.

Augmentation happens in feature space (:func:`augment` adds Gaussian noise), and all
hyperparameters are collected in :class:`SemiConfig`.
"""

from clinrisk.semisup.mixmatch import (
    SemiConfig,
    SoftLabels,
    augment,
    check_simplex,
    co_guess,
    co_refine,
    lambda_u_at,
    mix_coefficient,
    mixup,
    semi_loss,
    semi_loss_logit_gradient,
    semi_loss_terms,
    sharpen,
)

__doc_title__ = "Semi-Supervised"
__all__ = [
    "SemiConfig",
    "SoftLabels",
    "check_simplex",
    "augment",
    "co_refine",
    "co_guess",
    "sharpen",
    "mix_coefficient",
    "mixup",
    "lambda_u_at",
    "semi_loss_terms",
    "semi_loss",
    "semi_loss_logit_gradient",
]
