import numpy as np
import pytest

from clinrisk.metrics.ranking import auc


def pairwise_auc(scores, labels):
    positives = scores[labels == 1]
    negatives = scores[labels == 0]
    wins = sum(float(p > n) + 0.5 * float(p == n) for p in positives for n in negatives)
    return wins / (positives.size * negatives.size)


class TestAuc:
    def test_separated(self):
        assert auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0

    def test_reversed(self):
        assert auc([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1]) == 0.0

    def test_all_ties(self):
        assert auc(np.full(10, 0.3), np.array([0, 1] * 5)) == 0.5

    @pytest.mark.parametrize("labels", [[1, 1, 1], [0, 0, 0]])
    def test_single_class(self, labels):
        with pytest.raises(ValueError):
            auc([0.1, 0.5, 0.9], labels)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            auc([0.1, 0.5], [0, 1, 1])

    @pytest.mark.parametrize("seed", range(100))
    def test_matches_pairwise(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 201))
        labels = rng.integers(0, 2, size=n)
        labels[:2] = (0, 1)
        if seed % 2:
            scores = rng.integers(0, 5, size=n) / 4.0
        else:
            scores = rng.uniform(size=n)
        assert auc(scores, labels) == pairwise_auc(scores, labels)
