import numpy as np
import pytest

from camdiff.dataset import DatasetConfig, generate_dataset, load_dataset


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory):
    """60 records (10 per movement) for fast unit tests."""
    out = tmp_path_factory.mktemp("data") / "small"
    generate_dataset(DatasetConfig(n_sequences=60, seed=0, out_dir=str(out)))
    return load_dataset(out)


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory, small_dataset):
    """A barely-trained tiny denoiser for wiring tests (not quality tests)."""
    from camdiff.model import DenoiserConfig, TrainConfig
    from camdiff.schedule import make_linear_schedule
    from camdiff.training import train_diffusion

    out = tmp_path_factory.mktemp("ckpt") / "tiny"
    return train_diffusion(
        small_dataset,
        out,
        DenoiserConfig(model_dim=32, n_layers=1, n_heads=2),
        TrainConfig(batch_size=8, steps=3, seed=0),
        schedule=make_linear_schedule(50),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(0)
