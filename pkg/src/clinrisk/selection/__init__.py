"""Clean-sample selection from per-sample losses is provided by ``clinrisk.selection``.

Noisy labels are hard to fit, so early in training their losses sit above those of
clean samples. Three selectors exploit this:

* :func:`gmm_select` fits a two-component Gaussian mixture to the (min-max
  normalized) loss distribution with :func:`fit_gmm_em` and keeps samples whose
  posterior of belonging to the low-loss component reaches a threshold. Optional
  per-class thresholds make the filter class-aware.
* :func:`small_loss_select` keeps a fixed fraction of the smallest losses, following
  the :func:`forget_rate` schedule of co-teaching.
* :func:`uniform_class_select` spends an equal budget on each observed class, so the
  minority class is not filtered away with the noise.

Losses are those of plain cross-entropy even in cost-sensitive runs; class weights
would shift one class's loss distribution and blur the clean/noisy split.

Selections are :class:`SelectionMask` objects. When the ground truth is known,
:func:`selection_quality` scores them against the hidden flip mask and
:func:`write_selection_dump` records them per epoch.

If every loss is identical, :func:`fit_gmm_em` raises :class:`DegenerateLossError`
and callers select every sample for that epoch (:func:`loss_posteriors` does this).
"""

from clinrisk.selection.gmm import (
    VARIANCE_FLOOR,
    DegenerateLossError,
    Gmm1d,
    SelectionMask,
    clean_posterior,
    fit_gmm_em,
    gmm_select,
    loss_posteriors,
    normalize_losses,
    posteriors,
)
from clinrisk.selection.quality import (
    LossTrace,
    SelectionQuality,
    selection_quality,
    write_selection_dump,
)
from clinrisk.selection.small_loss import forget_rate, small_loss_select
from clinrisk.selection.uniform import uniform_class_select

__doc_title__ = "Sample Selection"
__all__ = [
    "VARIANCE_FLOOR",
    "DegenerateLossError",
    "Gmm1d",
    "SelectionMask",
    "fit_gmm_em",
    "posteriors",
    "clean_posterior",
    "normalize_losses",
    "gmm_select",
    "loss_posteriors",
    "small_loss_select",
    "forget_rate",
    "uniform_class_select",
    "LossTrace",
    "SelectionQuality",
    "selection_quality",
    "write_selection_dump",
]
