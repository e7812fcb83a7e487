"""Threshold-free ranking metrics."""

import numpy as np
from scipy.stats import rankdata


def auc(scores, labels) -> float:
    """Area under the ROC curve via the Mann-Whitney statistic.

    Equals the probability that a random positive outscores a random negative, ties
    counting one half. Midranks are multiples of 0.5, so the statistic is exact and
    matches pairwise enumeration bit for bit.

    Args:
        scores: Positive-class scores, usually ``p_1``.
        labels: Binary labels.

    Raises:
        ValueError: Only one class present, or mismatched lengths.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError(f"{scores.shape} scores for {labels.shape} labels")
    positives = labels == 1
    n_pos = int(positives.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    ranks = rankdata(scores, method="average")
    u_statistic = ranks[positives].sum() - n_pos * (n_pos + 1) / 2
    return float(u_statistic / (n_pos * n_neg))


__doc_title__ = "Ranking Metrics"
__all__ = ["auc"]
