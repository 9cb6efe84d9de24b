"""Classifier-free-guided DDPM sampling and the inpainting baseline."""

from __future__ import annotations

import numpy as np
import torch

from .camera import Trajectory
from .conditioning import ConditionBundle
from .errors import MaskShapeMismatch, RangeError
from .model import SamplerConfig
from .schedule import NoiseSchedule, respace_schedule
from .training import ModelCheckpoint

#: clamp for the implied clean-sample estimate inside the reverse chain,
#: in standardized units (the training data is approximately unit-scale)
X0_CLIP = 5.0


def cfg_epsilon(
    model,
    x_t: torch.Tensor,
    t: torch.Tensor,
    text: torch.Tensor | None,
    keyframes: torch.Tensor | None,
    omega: float,
) -> torch.Tensor:
    """eps_uncond + omega * (eps_cond - eps_uncond).

    The degenerate guidance weights skip the unused forward pass, which
    also makes them exact: omega=0 is the unconditional model and omega=1
    the conditional one, bit for bit.
    """
    unconditioned = text is None and keyframes is None
    with torch.no_grad():
        if omega == 0.0 or unconditioned:
            return model(x_t, t)
        eps_cond = model(x_t, t, text=text, keyframes=keyframes)
        if omega == 1.0:
            return eps_cond
        eps_uncond = model(x_t, t)
    return eps_uncond + omega * (eps_cond - eps_uncond)


def _condition_tensors(checkpoint: ModelCheckpoint, condition: ConditionBundle):
    dtype = next(checkpoint.model.parameters()).dtype
    text = None
    if condition.has_text:
        text = torch.as_tensor(condition.c_s.values, dtype=dtype).unsqueeze(0)
    keyframes = None
    if condition.has_keyframes:
        kf_std = checkpoint.standardizer.forward(condition.c_k)
        keyframes = torch.as_tensor(kf_std, dtype=dtype).unsqueeze(0)
    return text, keyframes


def _reverse_chain(
    checkpoint: ModelCheckpoint,
    cfg: SamplerConfig,
    text,
    keyframes,
    rng: np.random.Generator,
    keyframe_overwrite=None,
):
    """Run the reverse process; optionally overwrite masked positions with
    forward-noised keyframe values after every step (inpainting)."""
    model = checkpoint.model
    model.eval()
    schedule = checkpoint.schedule
    steps = cfg.steps or schedule.T
    timesteps, sub = respace_schedule(schedule, steps)
    L = checkpoint.config.max_len
    dtype = next(model.parameters()).dtype

    x = rng.standard_normal((L, 5))
    for i in range(sub.T, 0, -1):
        t_orig = int(timesteps[i - 1])
        x_t = torch.as_tensor(x, dtype=dtype).unsqueeze(0)
        t_tensor = torch.full((1,), t_orig, dtype=torch.long)
        eps = cfg_epsilon(model, x_t, t_tensor, text, keyframes, cfg.omega)
        eps = eps.squeeze(0).double().numpy()

        beta = sub.beta(i)
        alpha = sub.alpha(i)
        ab_t = sub.alpha_bar(i)
        ab_prev = sub.alpha_bar(i - 1)
        # posterior mean through the clamped x0 estimate: keeping x0_hat
        # inside the (standardized) data range stops early high-noise steps
        # from launching the chain far outside the training distribution
        x0_hat = (x - np.sqrt(1.0 - ab_t) * eps) / np.sqrt(ab_t)
        np.clip(x0_hat, -X0_CLIP, X0_CLIP, out=x0_hat)
        mean = (
            np.sqrt(ab_prev) * beta / (1.0 - ab_t) * x0_hat
            + np.sqrt(alpha) * (1.0 - ab_prev) / (1.0 - ab_t) * x
        )
        if i > 1:
            sigma = np.sqrt(sub.posterior_variance(i))
            x = mean + sigma * rng.standard_normal(x.shape)
        else:
            x = mean
        if keyframe_overwrite is not None:
            x = keyframe_overwrite(x, sub.alpha_bar(i - 1))
    return x


def _to_trajectory(checkpoint: ModelCheckpoint, x: np.ndarray, length: int, meta: dict):
    frames = checkpoint.standardizer.inverse(x)[:length]
    meta = dict(meta)
    meta["frame_scale"] = checkpoint.config.max_len / 300.0
    return Trajectory(frames=frames, fps=30.0, meta=meta)


def sample(
    checkpoint: ModelCheckpoint,
    condition: ConditionBundle,
    cfg: SamplerConfig,
    length: int | None = None,
) -> Trajectory:
    """Generate a trajectory from noise; deterministic under a fixed seed."""
    if length is None:
        length = checkpoint.config.max_len
    if not 1 <= length <= checkpoint.config.max_len:
        raise RangeError(
            f"length must lie in 1..{checkpoint.config.max_len}, got {length}"
        )
    text, keyframes = _condition_tensors(checkpoint, condition)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=(cfg.seed, 0)))
    x = _reverse_chain(checkpoint, cfg, text, keyframes, rng)
    return _to_trajectory(
        checkpoint, x, length, {"seed": cfg.seed, "omega": cfg.omega}
    )


def sample_inpaint(
    checkpoint: ModelCheckpoint,
    c_s,
    keyframes: np.ndarray,
    mask: np.ndarray,
    cfg: SamplerConfig,
    length: int | None = None,
) -> Trajectory:
    """Inpainting baseline: text-only condition, masked frames overwritten
    with forward-noised keyframe values at each denoising step."""
    length = length or checkpoint.config.max_len
    L = checkpoint.config.max_len
    mask = np.asarray(mask, dtype=float)
    if mask.shape == (L,):
        mask = np.repeat(mask[:, None], 5, axis=1)
    if mask.shape != (L, 5):
        raise MaskShapeMismatch(f"mask must be ({L},) or ({L}, 5), got {mask.shape}")
    keyframes = np.asarray(keyframes, dtype=float)
    if keyframes.shape != (L, 5):
        raise MaskShapeMismatch(
            f"keyframe reference must be ({L}, 5), got {keyframes.shape}"
        )
    kf_std = checkpoint.standardizer.forward(keyframes)

    text = None
    if c_s is not None:
        dtype = next(checkpoint.model.parameters()).dtype
        text = torch.as_tensor(c_s.values, dtype=dtype).unsqueeze(0)

    # separate stream for the keyframe noising so the main chain matches
    # sample() draw-for-draw under the same seed
    rng_main = np.random.default_rng(np.random.SeedSequence(entropy=(cfg.seed, 0)))
    rng_kf = np.random.default_rng(np.random.SeedSequence(entropy=(cfg.seed, 1)))

    def overwrite(x, ab_prev):
        if not mask.any():
            return x
        noised = np.sqrt(ab_prev) * kf_std + np.sqrt(1.0 - ab_prev) * rng_kf.standard_normal(
            kf_std.shape
        )
        return mask * noised + (1.0 - mask) * x

    x = _reverse_chain(checkpoint, cfg, text, None, rng_main, keyframe_overwrite=overwrite)
    return _to_trajectory(
        checkpoint, x, length, {"seed": cfg.seed, "omega": cfg.omega, "inpaint": True}
    )


def keyframe_mask(length: int, positions: list[int]) -> np.ndarray:
    mask = np.zeros(length)
    mask[list(positions)] = 1.0
    return mask
