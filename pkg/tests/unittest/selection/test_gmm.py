import numpy as np
import pytest
from pytest import approx

from clinrisk.selection.gmm import (
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


def two_population_losses(n=5000, seed=0):
    rng = np.random.default_rng(seed)
    clean = rng.normal(0.1, 0.05, size=n // 2)
    noisy = rng.normal(2.0, 0.5, size=n - n // 2)
    return np.concatenate([clean, noisy])


class TestGmm1d:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            Gmm1d(means=(1.0, 0.0), variances=(1.0, 1.0), weights=(0.5, 0.5))

    @pytest.mark.parametrize(
        "variances,weights",
        [((0.0, 1.0), (0.5, 0.5)), ((1.0, 1.0), (0.6, 0.6)), ((1.0, 1.0), (-0.1, 1.1))],
    )
    def test_invalid(self, variances, weights):
        with pytest.raises(ValueError):
            Gmm1d(means=(0.0, 1.0), variances=variances, weights=weights)

    def test_equal_components_give_half(self):
        gmm = Gmm1d(means=(0.5, 0.5), variances=(0.1, 0.1), weights=(0.5, 0.5))
        assert clean_posterior([0.0, 0.5, 3.0], gmm) == approx([0.5, 0.5, 0.5])

    def test_posteriors_sum_to_one(self):
        gmm = Gmm1d(means=(0.1, 0.8), variances=(0.01, 0.05), weights=(0.7, 0.3))
        w = posteriors(np.linspace(0, 1, 11), gmm)
        assert w.shape == (11, 2)
        assert w.sum(axis=1) == approx(np.ones(11))
        assert np.all(np.diff(w[:, 0][:6]) <= 0)


class TestFitGmmEm:
    def test_recovers_components(self):
        gmm = fit_gmm_em(two_population_losses())
        assert gmm.means[0] == approx(0.1, abs=0.02)
        assert gmm.means[1] == approx(2.0, abs=0.05)
        assert gmm.variances[0] == approx(0.05**2, rel=0.15)
        assert gmm.variances[1] == approx(0.5**2, rel=0.15)
        assert gmm.pi_clean == approx(0.5, abs=0.02)

    @pytest.mark.parametrize("seed", range(20))
    def test_known_mixture(self, seed):
        gmm = fit_gmm_em(two_population_losses(n=10_000, seed=seed), tol=1e-10)
        assert gmm.means == approx((0.1, 2.0), abs=0.05)
        assert gmm.weights == approx((0.5, 0.5), abs=0.05)
        assert np.all(np.diff(gmm.log_likelihoods) >= -1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_log_likelihood_non_decreasing(self, seed):
        rng = np.random.default_rng(seed)
        losses = np.concatenate([rng.exponential(0.2, 700), rng.uniform(0.5, 3.0, 300)])
        gmm = fit_gmm_em(normalize_losses(losses), tol=1e-10, max_iter=200)
        history = np.array(gmm.log_likelihoods)
        assert np.all(np.diff(history) >= -1e-9)

    def test_max_iter(self):
        gmm = fit_gmm_em(two_population_losses(), tol=1e-12, max_iter=2)
        assert gmm.n_iter <= 2

    def test_clean_component_first(self):
        gmm = fit_gmm_em(two_population_losses()[::-1])
        assert gmm.means[0] < gmm.means[1]

    @pytest.mark.parametrize("losses", [[0.3] * 10, [0.7]])
    def test_degenerate(self, losses):
        with pytest.raises(DegenerateLossError):
            fit_gmm_em(losses)

    @pytest.mark.parametrize(
        "losses,kwargs",
        [
            ([[0.1, 0.2]], {}),
            ([0.1, np.nan], {}),
            ([0.1, 0.2], dict(tol=0.0)),
            ([0.1, 0.2], dict(max_iter=0)),
        ],
    )
    def test_invalid(self, losses, kwargs):
        with pytest.raises(ValueError):
            fit_gmm_em(losses, **kwargs)


class TestNormalizeLosses:
    def test_range(self):
        assert normalize_losses([2.0, 4.0, 3.0]) == approx([0.0, 1.0, 0.5])

    def test_flat(self):
        assert normalize_losses([1.5, 1.5]) == approx([0.0, 0.0])


class TestGmmSelect:
    gmm = Gmm1d(means=(0.1, 0.9), variances=(0.01, 0.01), weights=(0.5, 0.5))

    def test_threshold(self):
        selection = gmm_select([0.05, 0.45, 0.95], self.gmm, threshold=0.5)
        assert selection.mask.tolist() == [True, True, False]
        assert selection.threshold == 0.5
        assert selection.n_selected == 2
        assert selection.selected_fraction == approx(2 / 3)
        assert selection.indices().tolist() == [0, 1]

    def test_threshold_one_minus_epsilon(self):
        selection = gmm_select([0.05, 0.45, 0.95], self.gmm, threshold=1 - 1e-12)
        assert selection.n_selected <= 1

    @pytest.mark.parametrize("threshold", [0.0, 1.0, 1.5])
    def test_invalid_threshold(self, threshold):
        with pytest.raises(ValueError):
            gmm_select([0.1], self.gmm, threshold=threshold)

    def test_class_thresholds(self):
        # posteriors: 0.5, 0.5, ~0.98, ~0.02
        losses = [0.5, 0.5, 0.45, 0.55]
        labels = np.array([0, 1, 0, 1])
        w = clean_posterior(losses, self.gmm)
        assert w[:2] == approx([0.5, 0.5])
        selection = gmm_select(losses, self.gmm, labels=labels, class_thresholds=(0.4, 0.6))
        assert selection.mask.tolist() == [True, False, True, False]
        assert selection.clean_posterior == approx(w)

    def test_equal_class_thresholds_match_global(self):
        losses = [0.05, 0.45, 0.5, 0.55, 0.95]
        labels = np.array([0, 1, 1, 0, 1])
        per_class = gmm_select(losses, self.gmm, labels=labels, class_thresholds=(0.3, 0.3))
        overall = gmm_select(losses, self.gmm, threshold=0.3)
        assert per_class.mask.tolist() == overall.mask.tolist()

    def test_class_thresholds_need_labels(self):
        with pytest.raises(ValueError):
            gmm_select([0.4], self.gmm, class_thresholds=(0.5, 0.5))


class TestSelectionMask:
    def test_select_all(self):
        selection = SelectionMask.select_all(4)
        assert selection.selected_fraction == 1.0
        assert selection.clean_posterior == approx(np.ones(4))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            SelectionMask(np.ones(3, dtype=bool), np.ones(4))


class TestLossPosteriors:
    def test_fits_normalized_losses(self):
        losses = two_population_losses(n=2000)
        gmm, w = loss_posteriors(losses)
        assert gmm is not None
        assert w.shape == (2000,)
        assert w[:1000].mean() > 0.9
        assert w[1000:].mean() < 0.1

    def test_degenerate_selects_all(self):
        gmm, w = loss_posteriors(np.full(50, 0.2))
        assert gmm is None
        assert w == approx(np.ones(50))

    @pytest.mark.parametrize("scale", [1e-3, 0.5, 7.0, 1e4])
    def test_scale_invariant_selection(self, scale):
        losses = two_population_losses(n=2000, seed=3)
        gmm, w = loss_posteriors(losses)
        scaled_gmm, scaled_w = loss_posteriors(scale * losses)
        assert scaled_gmm.means == approx(gmm.means, abs=1e-6)
        assert scaled_w == approx(w, abs=1e-6)
        selection = gmm_select(normalize_losses(losses), gmm)
        scaled = gmm_select(normalize_losses(scale * losses), scaled_gmm)
        assert scaled.mask.tolist() == selection.mask.tolist()
