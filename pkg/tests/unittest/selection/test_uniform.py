import numpy as np
import pytest

from clinrisk.selection.uniform import uniform_class_select


class TestUniformClassSelect:
    def test_equal_counts_per_class(self):
        rng = np.random.default_rng(3)
        labels = np.array([0] * 80 + [1] * 20)
        posterior = rng.uniform(size=100)
        selection = uniform_class_select(posterior, labels, 0.3)
        assert selection.n_selected == 30
        assert selection.mask[labels == 0].sum() == 15
        assert selection.mask[labels == 1].sum() == 15
        assert selection.capped_classes == ()

    def test_highest_posteriors_win(self):
        labels = np.array([0, 0, 0, 1, 1, 1])
        posterior = np.array([0.1, 0.9, 0.5, 0.3, 0.8, 0.2])
        selection = uniform_class_select(posterior, labels, 2 / 3)
        assert selection.indices().tolist() == [1, 2, 3, 4]

    def test_ties_prefer_lower_index(self):
        labels = np.array([0, 0, 0, 1, 1, 1])
        selection = uniform_class_select(np.full(6, 0.5), labels, 1 / 3)
        assert selection.indices().tolist() == [0, 3]

    def test_small_class_capped(self):
        labels = np.array([0] * 18 + [1] * 2)
        selection = uniform_class_select(np.linspace(0, 1, 20), labels, 0.6)
        assert selection.capped_classes == (1,)
        assert selection.mask[labels == 1].all()
        assert selection.mask[labels == 0].sum() == 6

    def test_absent_class(self):
        with pytest.raises(ValueError, match="absent"):
            uniform_class_select(np.ones(4), np.zeros(4, dtype=int), 0.5)

    @pytest.mark.parametrize("budget", [0.0, 1.5])
    def test_invalid_budget(self, budget):
        with pytest.raises(ValueError):
            uniform_class_select(np.ones(4), np.array([0, 0, 1, 1]), budget)
