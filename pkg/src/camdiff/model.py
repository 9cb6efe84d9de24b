"""Transformer denoiser for camera motion diffusion.

The network lifts each 5-DoF frame to the model width, prepends three
prefix tokens (diffusion-time embedding, text-condition projection,
keyframe projection), runs a pre-norm transformer encoder, and projects
the frame tokens back to per-frame noise estimates. Absent conditions are
routed through learned null vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import torch
import torch.nn as nn

from .conditioning import EMBED_DIM
from .errors import LengthMismatch

FRAME_DIM = 5
N_PREFIX = 3  # time, text, keyframes


@dataclass
class DenoiserConfig:
    max_len: int = 60
    model_dim: int = 256
    n_layers: int = 4
    n_heads: int = 4
    ff_dim: int | None = None
    dropout: float = 0.1
    cond_dim: int = EMBED_DIM

    def __post_init__(self):
        if self.ff_dim is None:
            self.ff_dim = 4 * self.model_dim
        if self.model_dim % self.n_heads != 0:
            raise ValueError("model_dim must be divisible by n_heads")
        if self.max_len < 2:
            raise ValueError("max_len must be at least 2")

    def to_dict(self) -> dict:
        return {
            "max_len": self.max_len,
            "model_dim": self.model_dim,
            "n_layers": self.n_layers,
            "n_heads": self.n_heads,
            "ff_dim": self.ff_dim,
            "dropout": self.dropout,
            "cond_dim": self.cond_dim,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DenoiserConfig":
        return cls(**data)


def sinusoidal_embedding(positions: torch.Tensor, dim: int) -> torch.Tensor:
    """Standard sin/cos embedding of integer positions, shape (..., dim)."""
    half = dim // 2
    freqs = torch.exp(
        -math.log(10000.0) * torch.arange(half, dtype=torch.float64) / max(half - 1, 1)
    ).to(positions.device)
    args = positions.double().unsqueeze(-1) * freqs
    emb = torch.cat([torch.sin(args), torch.cos(args)], dim=-1)
    if dim % 2:
        emb = torch.nn.functional.pad(emb, (0, 1))
    return emb.to(torch.get_default_dtype())


class CameraDenoiser(nn.Module):
    def __init__(self, config: DenoiserConfig):
        super().__init__()
        self.config = config
        d = config.model_dim
        self.frame_in = nn.Linear(FRAME_DIM, d)
        self.frame_out = nn.Linear(d, FRAME_DIM)
        self.time_mlp = nn.Sequential(nn.Linear(d, d), nn.SiLU(), nn.Linear(d, d))
        self.text_proj = nn.Linear(config.cond_dim, d)
        self.kf_proj = nn.Linear(2 * FRAME_DIM, d)
        # Keyframes additionally injected at the frame tokens they constrain
        # (position 0 and position max_len-1); a single global prefix token
        # is too indirect for the network to reproduce exact endpoint values.
        self.kf_start_proj = nn.Linear(FRAME_DIM, d)
        self.kf_end_proj = nn.Linear(FRAME_DIM, d)
        self.null_text = nn.Parameter(torch.zeros(d))
        self.null_kf = nn.Parameter(torch.zeros(d))
        nn.init.normal_(self.null_text, std=0.02)
        nn.init.normal_(self.null_kf, std=0.02)
        self.register_buffer(
            "pos_embedding",
            sinusoidal_embedding(torch.arange(config.max_len), d),
            persistent=False,
        )
        layer = nn.TransformerEncoderLayer(
            d_model=d,
            nhead=config.n_heads,
            dim_feedforward=config.ff_dim,
            dropout=config.dropout,
            batch_first=True,
            norm_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            layer, config.n_layers, enable_nested_tensor=False
        )
        self.final_norm = nn.LayerNorm(d)

    def forward(
        self,
        x_t: torch.Tensor,
        t: torch.Tensor,
        text: torch.Tensor | None = None,
        text_mask: torch.Tensor | None = None,
        keyframes: torch.Tensor | None = None,
        kf_mask: torch.Tensor | None = None,
    ) -> torch.Tensor:
        """Predict the noise for a batch.

        x_t: (B, L, 5) noisy sequences at the trained length L.
        t: (B,) integer diffusion steps.
        text: (B, cond_dim) embeddings; text_mask: (B,) bool, True where the
        text condition is present (False rows use the learned null vector).
        keyframes: (B, 2, 5); kf_mask analogous.
        """
        B, L, C = x_t.shape
        if L != self.config.max_len or C != FRAME_DIM:
            raise LengthMismatch(
                f"expected (B, {self.config.max_len}, {FRAME_DIM}), got {tuple(x_t.shape)}"
            )
        d = self.config.model_dim

        time_tok = self.time_mlp(sinusoidal_embedding(t, d).to(x_t.dtype))

        null_text = self.null_text.to(x_t.dtype).expand(B, d)
        if text is None:
            text_tok = null_text
        else:
            projected = self.text_proj(text.to(x_t.dtype))
            if text_mask is None:
                text_tok = projected
            else:
                text_tok = torch.where(text_mask.unsqueeze(1), projected, null_text)

        null_kf = self.null_kf.to(x_t.dtype).expand(B, d)
        if keyframes is None:
            kf_tok = null_kf
        else:
            projected = self.kf_proj(keyframes.reshape(B, 2 * FRAME_DIM).to(x_t.dtype))
            if kf_mask is None:
                kf_tok = projected
            else:
                kf_tok = torch.where(kf_mask.unsqueeze(1), projected, null_kf)

        frames = self.frame_in(x_t) + self.pos_embedding.to(x_t.dtype).unsqueeze(0)
        if keyframes is not None:
            kf = keyframes.to(x_t.dtype)
            start_inj = self.kf_start_proj(kf[:, 0])
            end_inj = self.kf_end_proj(kf[:, 1])
            if kf_mask is not None:
                gate = kf_mask.unsqueeze(1).to(x_t.dtype)
                start_inj = start_inj * gate
                end_inj = end_inj * gate
            frames = torch.cat(
                [
                    (frames[:, 0] + start_inj).unsqueeze(1),
                    frames[:, 1:-1],
                    (frames[:, -1] + end_inj).unsqueeze(1),
                ],
                dim=1,
            )
        tokens = torch.cat(
            [time_tok.unsqueeze(1), text_tok.unsqueeze(1), kf_tok.unsqueeze(1), frames],
            dim=1,
        )
        hidden = self.final_norm(self.encoder(tokens))
        return self.frame_out(hidden[:, N_PREFIX:])


@dataclass
class TrainConfig:
    batch_size: int = 256
    lr: float = 1e-4
    steps: int = 4000
    cond_dropout: float = 0.1
    kf_presence: float = 0.5
    ema_decay: float = 0.999
    seed: int = 0

    def __post_init__(self):
        for name in ("cond_dropout", "kf_presence"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")

    def to_dict(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "lr": self.lr,
            "steps": self.steps,
            "cond_dropout": self.cond_dropout,
            "kf_presence": self.kf_presence,
            "ema_decay": self.ema_decay,
            "seed": self.seed,
        }


@dataclass
class SamplerConfig:
    omega: float = 1.0
    steps: int | None = None  # None: use all schedule steps
    seed: int = 0

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
