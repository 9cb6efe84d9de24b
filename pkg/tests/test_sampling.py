import numpy as np
import pytest
import torch

from camdiff.conditioning import build_condition
from camdiff.errors import MaskShapeMismatch, RangeError
from camdiff.model import SamplerConfig
from camdiff.sampling import cfg_epsilon, keyframe_mask, sample, sample_inpaint


def _text_condition(ckpt, prompt="The camera is static."):
    return build_condition(ckpt.make_provider().embed(prompt), None)


def test_sample_deterministic(tiny_checkpoint):
    cond = _text_condition(tiny_checkpoint)
    cfg = SamplerConfig(omega=1.0, steps=5, seed=11)
    a = sample(tiny_checkpoint, cond, cfg)
    b = sample(tiny_checkpoint, cond, cfg)
    assert np.array_equal(a.frames, b.frames)
    c = sample(tiny_checkpoint, cond, SamplerConfig(omega=1.0, steps=5, seed=12))
    assert not np.array_equal(a.frames, c.frames)
    assert a.meta["seed"] == 11 and a.meta["omega"] == 1.0


def test_sample_length_bounds(tiny_checkpoint):
    cond = _text_condition(tiny_checkpoint)
    cfg = SamplerConfig(steps=3, seed=0)
    assert len(sample(tiny_checkpoint, cond, cfg, length=7)) == 7
    with pytest.raises(RangeError):
        sample(tiny_checkpoint, cond, cfg, length=0)
    with pytest.raises(RangeError):
        sample(tiny_checkpoint, cond, cfg, length=61)


def test_cfg_degeneracy_omega_zero(tiny_checkpoint):
    # [TRIVIAL] omega=0 collapses to the unconditional model bit-exactly
    model = tiny_checkpoint.model
    torch.manual_seed(0)
    x = torch.randn(1, 60, 5)
    t = torch.tensor([5])
    text = torch.randn(1, 512)
    eps0 = cfg_epsilon(model, x, t, text, None, omega=0.0)
    with torch.no_grad():
        uncond = model(x, t)
    assert torch.equal(eps0, uncond)


def test_cfg_degeneracy_omega_one(tiny_checkpoint):
    # [TRIVIAL] omega=1 collapses to the conditional model bit-exactly
    model = tiny_checkpoint.model
    torch.manual_seed(1)
    x = torch.randn(1, 60, 5)
    t = torch.tensor([5])
    text = torch.randn(1, 512)
    eps1 = cfg_epsilon(model, x, t, text, None, omega=1.0)
    with torch.no_grad():
        cond = model(x, t, text=text)
    assert torch.allclose(eps1, cond, atol=1e-12)


def test_cfg_affine_identity(tiny_checkpoint):
    model = tiny_checkpoint.model
    torch.manual_seed(2)
    x = torch.randn(1, 60, 5)
    t = torch.tensor([3])
    text = torch.randn(1, 512)
    with torch.no_grad():
        uncond = model(x, t)
        cond = model(x, t, text=text)
    blended = cfg_epsilon(model, x, t, text, None, omega=1.7)
    assert torch.allclose(blended, uncond + 1.7 * (cond - uncond), atol=1e-6)


def test_inpaint_mask_validation(tiny_checkpoint):
    kf = np.tile([0.0, 0.0, 2.0, 0.0, 0.0], (60, 1))
    cfg = SamplerConfig(steps=3, seed=0)
    with pytest.raises(MaskShapeMismatch):
        sample_inpaint(tiny_checkpoint, None, kf, np.zeros(59), cfg)
    with pytest.raises(MaskShapeMismatch):
        sample_inpaint(tiny_checkpoint, None, kf[:59], np.zeros(60), cfg)


def test_inpaint_zero_mask_matches_sample(tiny_checkpoint):
    # an all-zero mask must reproduce the unconstrained sampler draw-for-draw
    cond = _text_condition(tiny_checkpoint)
    cfg = SamplerConfig(omega=1.0, steps=5, seed=4)
    plain = sample(tiny_checkpoint, cond, cfg)
    kf = np.tile([0.0, 0.0, 2.0, 0.0, 0.0], (60, 1))
    inpainted = sample_inpaint(tiny_checkpoint, cond.c_s, kf, np.zeros(60), cfg)
    assert np.allclose(plain.frames, inpainted.frames)


def test_inpaint_exact_at_masked_frames(tiny_checkpoint):
    # the final step overwrites masked frames with the exact keyframe values
    kf = np.tile([0.4, 0.1, 2.0, 0.1, -0.2], (60, 1))
    mask = keyframe_mask(60, [0, 59])
    cfg = SamplerConfig(omega=0.0, steps=5, seed=7)
    out = sample_inpaint(tiny_checkpoint, None, kf, mask, cfg)
    assert np.allclose(out.frames[0], kf[0], atol=1e-9)
    assert np.allclose(out.frames[59], kf[59], atol=1e-9)
    # unmasked frames are not forced
    assert not np.allclose(out.frames[30], kf[30], atol=1e-3)


def test_keyframe_mask_helper():
    m = keyframe_mask(10, [0, 9])
    assert m.tolist() == [1.0] + [0.0] * 8 + [1.0]


def test_sample_meta_frame_scale(tiny_checkpoint):
    cond = _text_condition(tiny_checkpoint)
    out = sample(tiny_checkpoint, cond, SamplerConfig(steps=3, seed=0))
    assert out.meta["frame_scale"] == pytest.approx(60 / 300)
