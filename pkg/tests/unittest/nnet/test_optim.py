import math

import numpy as np
import pytest
from pytest import approx

from clinrisk.nnet.mlp import MlpParams, init_mlp
from clinrisk.nnet.optim import OptimState, cosine_lr, sgd_momentum_step


def constant_grads(params, value):
    return MlpParams.from_arrays([np.full_like(a, value) for a in params.arrays()])


class TestCosineLr:
    def test_start(self):
        assert cosine_lr(0, 200, 0.01) == 0.01

    def test_half(self):
        assert cosine_lr(100, 200, 0.01) == approx(0.005)

    def test_last_epoch(self):
        assert cosine_lr(199, 200, 0.01) == approx(6.17e-7, rel=1e-3)
        assert cosine_lr(199, 200, 0.01) == approx(0.005 * (1 + math.cos(199 * math.pi / 200)))

    def test_strictly_decreasing(self):
        rates = [cosine_lr(e, 60, 0.01) for e in range(60)]
        assert all(a > b for a, b in zip(rates, rates[1:]))
        assert all(0 < r <= 0.01 for r in rates)

    @pytest.mark.parametrize("epoch", [-1, 200, 250])
    def test_out_of_range(self, epoch):
        with pytest.raises(ValueError):
            cosine_lr(epoch, 200, 0.01)


class TestOptimState:
    def test_schedule(self):
        params = init_mlp(2, np.random.default_rng(0), (3,))
        state = OptimState(params, base_lr=0.1, total_epochs=10)
        assert state.lr == 0.1
        state.set_epoch(5)
        assert state.lr == approx(0.05)
        with pytest.raises(ValueError):
            state.set_epoch(10)

    def test_no_anneal(self):
        params = init_mlp(2, np.random.default_rng(0), (3,))
        state = OptimState(params, base_lr=0.1, total_epochs=10, anneal=False)
        state.set_epoch(9)
        assert state.lr == 0.1

    @pytest.mark.parametrize("kwargs", [dict(base_lr=0.0), dict(momentum=1.0), dict(momentum=-0.1)])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            OptimState(init_mlp(2, np.random.default_rng(0), (3,)), **kwargs)


class TestSgdMomentumStep:
    def test_vanilla_limit(self):
        params = init_mlp(3, np.random.default_rng(1), (4,))
        state = OptimState(params, base_lr=0.1, momentum=0.0, anneal=False)
        grads = constant_grads(params, 0.5)
        updated = sgd_momentum_step(params, grads, state)
        for new, old in zip(updated.arrays(), params.arrays()):
            assert new == approx(old - 0.05)

    def test_zero_gradients_fixed_point(self):
        params = init_mlp(3, np.random.default_rng(1), (4,))
        state = OptimState(params, momentum=0.9, anneal=False)
        current = params
        for _ in range(10):
            current = sgd_momentum_step(current, constant_grads(params, 0.0), state)
        assert current == params

    def test_two_momentum_steps(self):
        params = init_mlp(3, np.random.default_rng(1), (4,))
        state = OptimState(params, base_lr=0.01, momentum=0.9, anneal=False)
        grads = constant_grads(params, 2.0)
        current = sgd_momentum_step(params, grads, state)
        current = sgd_momentum_step(current, grads, state)
        for new, old in zip(current.arrays(), params.arrays()):
            assert old - new == approx(np.full_like(old, 0.01 * 2.0 * 2.9))

    def test_lr_override(self):
        params = init_mlp(2, np.random.default_rng(1), (2,))
        state = OptimState(params, base_lr=0.01, momentum=0.0)
        updated = sgd_momentum_step(params, constant_grads(params, 1.0), state, lr=1.0)
        assert updated.biases[0] == approx(params.biases[0] - 1.0)

    def test_shape_mismatch(self):
        params = init_mlp(2, np.random.default_rng(1), (2,))
        other = init_mlp(2, np.random.default_rng(1), (3,))
        with pytest.raises(ValueError):
            sgd_momentum_step(params, other, OptimState(params))
