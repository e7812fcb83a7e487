import numpy as np
import pytest
from pytest import approx

from clinrisk.nnet.losses import (
    UNIT_WEIGHTS,
    CostWeights,
    as_targets,
    cross_entropy_per_sample,
    cs_logit_gradient,
    cs_loss_per_sample,
    one_hot,
)


class TestCostWeights:
    @pytest.mark.parametrize("w0,w1", [(0, 1), (1, 0), (-1, 20)])
    def test_positive(self, w0, w1):
        with pytest.raises(ValueError):
            CostWeights(w0, w1)

    def test_expected(self):
        weights = CostWeights(1.0, 20.0)
        assert weights.expected(np.array([[1, 0], [0, 1], [0.5, 0.5]])).tolist() == [
            1.0,
            20.0,
            10.5,
        ]


@pytest.mark.parametrize(
    "probs,label,weights,expected",
    [
        ([0.5, 0.5], 1, CostWeights(1, 20), 20 * np.log(2)),
        ([1.0, 0.0], 0, CostWeights(3, 7), 0.0),
        ([0.75, 0.25], 1, UNIT_WEIGHTS, -np.log(0.25)),
        ([0.9, 0.1], 0, CostWeights(2, 1), -2 * np.log(0.9)),
    ],
)
def test_cs_loss_per_sample(probs, label, weights, expected):
    loss = cs_loss_per_sample(np.array([probs]), np.array([label]), weights)
    assert loss[0] == approx(expected, abs=1e-12)


def test_cs_loss_13_8629():
    loss = cs_loss_per_sample(np.array([[0.5, 0.5]]), np.array([1]), CostWeights(1, 20))
    assert loss[0] == approx(13.8629, abs=1e-4)


def test_unit_weights_reduce_to_cross_entropy():
    rng = np.random.default_rng(0)
    p1 = rng.random(50)
    probs = np.column_stack([1 - p1, p1])
    labels = rng.integers(0, 2, 50)
    plain = -np.log(probs[np.arange(50), labels])
    assert np.abs(cross_entropy_per_sample(probs, labels) - plain).max() < 1e-12


def test_probability_floor():
    loss = cs_loss_per_sample(np.array([[1.0, 0.0]]), np.array([1]))
    assert np.isfinite(loss[0])
    assert loss[0] == approx(-np.log(1e-12))


def test_soft_targets_match_hard():
    probs = np.array([[0.3, 0.7], [0.6, 0.4]])
    weights = CostWeights(1, 20)
    hard = cs_loss_per_sample(probs, np.array([1, 0]), weights)
    soft = cs_loss_per_sample(probs, one_hot(np.array([1, 0])), weights)
    assert np.array_equal(hard, soft)


def test_logit_gradient_single_sample():
    probs = np.array([[0.3, 0.7]])
    grad = cs_logit_gradient(probs, np.array([0]), CostWeights(1, 20))
    assert grad[0] == approx([0.3 - 1.0, 0.7])
    grad = cs_logit_gradient(probs, np.array([1]), CostWeights(1, 20))
    assert grad[0] == approx([20 * 0.3, 20 * (0.7 - 1.0)])


@pytest.mark.parametrize("labels", [np.array([0, 2]), np.zeros((2, 3)), np.zeros((2, 2, 2))])
def test_as_targets_rejects(labels):
    with pytest.raises(ValueError):
        as_targets(labels)
