import numpy as np
import pytest
import torch

from camdiff.errors import LengthMismatch
from camdiff.model import (
    CameraDenoiser,
    DenoiserConfig,
    SamplerConfig,
    TrainConfig,
    sinusoidal_embedding,
)


def _tiny():
    return DenoiserConfig(max_len=8, model_dim=16, n_layers=1, n_heads=2, dropout=0.0)


def test_config_defaults_and_validation():
    cfg = DenoiserConfig()
    assert (cfg.max_len, cfg.model_dim, cfg.n_layers, cfg.n_heads) == (60, 256, 4, 4)
    assert cfg.ff_dim == 1024
    with pytest.raises(ValueError):
        DenoiserConfig(model_dim=30, n_heads=4)
    with pytest.raises(ValueError):
        DenoiserConfig(max_len=1)
    assert DenoiserConfig.from_dict(cfg.to_dict()) == cfg


def test_sinusoidal_embedding_shape_and_values():
    emb = sinusoidal_embedding(torch.arange(4), 8)
    assert emb.shape == (4, 8)
    # position 0 -> sin terms 0, cos terms 1
    assert torch.allclose(emb[0, :4], torch.zeros(4))
    assert torch.allclose(emb[0, 4:], torch.ones(4))
    # odd dim pads with a zero column
    assert sinusoidal_embedding(torch.arange(3), 7).shape == (3, 7)


def test_forward_shapes_and_length_check():
    torch.manual_seed(0)
    model = CameraDenoiser(_tiny()).eval()
    x = torch.randn(3, 8, 5)
    t = torch.tensor([1, 5, 9])
    out = model(x, t)
    assert out.shape == (3, 8, 5)
    with pytest.raises(LengthMismatch):
        model(torch.randn(3, 7, 5), t)


def test_null_tokens_route_absent_conditions():
    torch.manual_seed(0)
    model = CameraDenoiser(_tiny()).eval()
    x = torch.randn(2, 8, 5)
    t = torch.tensor([3, 3])
    text = torch.randn(2, 512)
    with torch.no_grad():
        uncond = model(x, t)
        masked = model(x, t, text=text, text_mask=torch.tensor([False, False]))
        cond = model(x, t, text=text, text_mask=torch.tensor([True, True]))
    # a fully-masked text condition is exactly the unconditional pass
    assert torch.allclose(uncond, masked, atol=1e-6)
    assert not torch.allclose(uncond, cond, atol=1e-4)


def test_keyframe_condition_changes_output():
    torch.manual_seed(0)
    model = CameraDenoiser(_tiny()).eval()
    x = torch.randn(1, 8, 5)
    t = torch.tensor([3])
    kf = torch.randn(1, 2, 5)
    with torch.no_grad():
        uncond = model(x, t)
        cond = model(x, t, keyframes=kf, kf_mask=torch.tensor([True]))
    assert not torch.allclose(uncond, cond, atol=1e-4)


def test_time_embedding_distinguishes_steps():
    torch.manual_seed(0)
    model = CameraDenoiser(_tiny()).eval()
    x = torch.randn(1, 8, 5)
    with torch.no_grad():
        a = model(x, torch.tensor([1]))
        b = model(x, torch.tensor([40]))
    assert not torch.allclose(a, b, atol=1e-4)


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(cond_dropout=1.5)
    with pytest.raises(ValueError):
        TrainConfig(kf_presence=-0.1)
    assert TrainConfig().cond_dropout == 0.1
    assert TrainConfig().kf_presence == 0.5


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(omega=-1.0)
    assert SamplerConfig().omega == 1.0
