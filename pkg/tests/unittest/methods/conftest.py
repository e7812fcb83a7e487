import pytest

from clinrisk.data.dataset import NoiseSpec
from clinrisk.data.noise import inject_symmetric_noise
from clinrisk.data.synthetic import SyntheticSpec, generate_synthetic
from clinrisk.harness.config import ExperimentConfig

TINY = SyntheticSpec(n_train=120, n_val=40, n_test=40, feature_dim=4, seed=0)


@pytest.fixture
def clean_train():
    return generate_synthetic(TINY)[0]


@pytest.fixture
def noisy_train(clean_train):
    return inject_symmetric_noise(clean_train, NoiseSpec(0.2, 0))


@pytest.fixture
def make_config():
    def _make(**overrides):
        kwargs = dict(
            epochs=4,
            warmup_epochs=1,
            batch_size=32,
            hidden_sizes=(8,),
            noise_rate=0.2,
            data=TINY,
        )
        kwargs.update(overrides)
        return ExperimentConfig(**kwargs)

    return _make
