from unittest.mock import patch

import numpy as np
import pytest

from clinrisk.data.synthetic import SyntheticSpec
from clinrisk.harness.config import ExperimentConfig
from clinrisk.harness.runner import (
    RunResult,
    load_splits,
    matrix_configs,
    run_matrix,
    run_single,
)

TINY = SyntheticSpec(n_train=120, n_val=40, n_test=40, feature_dim=4)


def tiny_config(**overrides):
    kwargs = dict(
        epochs=3,
        warmup_epochs=1,
        batch_size=32,
        hidden_sizes=(8,),
        data=TINY,
    )
    kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


class TestLoadSplits:
    def test_noise_only_in_train(self):
        train, val, test = load_splits(tiny_config(noise_rate=0.3))
        assert train.flip_mask.any()
        assert not val.flip_mask.any()
        assert not test.flip_mask.any()

    def test_seed_keys_data(self):
        a = load_splits(tiny_config(seed=1))[0]
        b = load_splits(tiny_config(seed=2))[0]
        c = load_splits(tiny_config(seed=1, train_seed=5))[0]
        assert not np.array_equal(a.features, b.features)
        assert np.array_equal(a.features, c.features)

    def test_same_noise_across_methods(self):
        a = load_splits(tiny_config(method="baseline", noise_rate=0.2))[0]
        b = load_splits(tiny_config(method="unicon", noise_rate=0.2))[0]
        assert np.array_equal(a.flip_mask, b.flip_mask)


class TestRunSingle:
    def test_completes(self):
        config = tiny_config(noise_rate=0.2)
        result = run_single(config)
        assert result.ok
        assert result.error is None
        assert [t.epoch for t in result.trace] == [0, 1, 2]
        assert result.trace[0].lr == pytest.approx(0.01)
        assert result.trace[0].selected_fraction == 1.0
        assert result.metrics.counts.n == 40
        assert isinstance(result.collapse, bool)
        assert result.fingerprint == config.fingerprint()
        assert result.dataset_fingerprint == config.dataset_fingerprint()
        assert result.wall_clock_seconds >= 0

    def test_deterministic(self):
        config = tiny_config(method="co_teaching", noise_rate=0.2)
        assert run_single(config) == run_single(config)

    def test_selection_quality(self):
        result = run_single(tiny_config(method="gmm_filter", noise_rate=0.2))
        assert result.trace[0].agreement is None
        assert result.trace[2].agreement is not None
        assert set(result.selection) == {"precision", "recall", "agreement"}
        assert 0.0 <= result.selection["agreement"] <= 1.0

    def test_invalid_config_fails(self):
        result = run_single(tiny_config(noise_rate=2.0))
        assert result.status == "failed"
        assert result.error.startswith("ConfigError: noise_rate")
        assert result.metrics is None
        assert result.trace == ()

    def test_single_class_split_fails(self):
        result = run_single(tiny_config(data=SyntheticSpec(n_val=40, positive_fraction=0.01)))
        assert result.status == "failed"
        assert result.error.startswith("DatasetError: val split has a single class")

    def test_non_finite_loss_fails(self):
        with patch("clinrisk.methods.base.Network.step", return_value=float("nan")):
            result = run_single(tiny_config())
        assert result.status == "failed"
        assert result.error.startswith("NonFiniteLossError")
        assert result.trace == ()


class TestRunResult:
    def test_properties(self):
        result = RunResult(
            fingerprint="f",
            config=dict(method="unicon", cost_sensitive=True, noise_rate=0.4, seed=0),
            status="ok",
        )
        assert result.label == "unicon+CS"
        assert result.noise_rate == 0.4
        assert result.ok

    def test_dict_round_trip(self):
        result = run_single(tiny_config(method="gmm_filter", noise_rate=0.2))
        assert RunResult.from_dict(result.to_dict()) == result


class TestMatrix:
    def test_configs(self):
        configs = matrix_configs(
            tiny_config(seed=9), ["baseline", "unicon+cs"], [0.0, 0.4], [3, 4]
        )
        assert len(configs) == 8
        assert [c.label for c in configs[:4]] == ["baseline"] * 4
        assert all(c.label == "unicon+CS" for c in configs[4:])
        assert [c.seed for c in configs[:4]] == [3, 4, 3, 4]
        assert len({c.train_seed for c in configs}) == 8
        assert len({c.fingerprint() for c in configs}) == 8
        assert len({c.dataset_fingerprint() for c in configs}) == 1

    def test_configs_reproducible(self):
        args = (tiny_config(seed=9), ["baseline"], [0.2], [0, 1])
        assert matrix_configs(*args) == matrix_configs(*args)

    def test_empty_axis(self):
        with pytest.raises(ValueError):
            matrix_configs(tiny_config(), [], [0.0], [0])

    def test_failing_cell_isolated(self):
        results = run_matrix(tiny_config(epochs=2), ["baseline"], [0.2, 2.0], [0])
        assert sorted(r.status for r in results) == ["failed", "ok"]
        assert [r.fingerprint for r in results] == sorted(r.fingerprint for r in results)
        failed = next(r for r in results if not r.ok)
        assert failed.noise_rate == 2.0
