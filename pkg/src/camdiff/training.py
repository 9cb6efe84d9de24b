"""Classifier-free-guidance training loop and checkpoint container.

Checkpoints are directories holding ``weights.pt`` plus a JSON sidecar
with every hyperparameter needed to sample (denoiser config, noise
schedule, per-channel standardization stats, embedding provider id, and
the dataset manifest hash).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .conditioning import HashProjectionEncoder
from .dataset import SequenceRecord, pad_trajectory
from .errors import NonFiniteLoss
from .model import CameraDenoiser, DenoiserConfig, TrainConfig
from .prompts import augment_prompt_subset
from .schedule import NoiseSchedule, make_linear_schedule

CHECKPOINT_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Standardizer:
    """Per-channel affine transform fitted on the training split."""

    mean: np.ndarray  # (5,)
    std: np.ndarray  # (5,)

    @classmethod
    def fit(cls, frames: np.ndarray) -> "Standardizer":
        mean = frames.reshape(-1, 5).mean(axis=0)
        std = frames.reshape(-1, 5).std(axis=0)
        std = np.where(std < 1e-8, 1.0, std)
        return cls(mean=mean, std=std)

    def forward(self, frames: np.ndarray) -> np.ndarray:
        return (frames - self.mean) / self.std

    def inverse(self, frames: np.ndarray) -> np.ndarray:
        return frames * self.std + self.mean

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Standardizer":
        return cls(np.asarray(data["mean"], float), np.asarray(data["std"], float))


@dataclass
class TrainingExample:
    frames: np.ndarray  # (L, 5) padded, raw units
    keyframes: np.ndarray  # (2, 5) first/last unpadded frames, raw units
    sentences: list[str]
    movement: str


def prepare_examples(records: list[SequenceRecord], max_len: int) -> list[TrainingExample]:
    examples = []
    for rec in records:
        traj = rec.trajectory
        padded = pad_trajectory(traj, max_len) if len(traj) < max_len else traj
        frames = padded.frames[:max_len]
        keyframes = np.stack([traj.frames[0], traj.frames[-1]])
        examples.append(
            TrainingExample(
                frames=frames,
                keyframes=keyframes,
                sentences=list(rec.prompts),
                movement=rec.labels.movement.value,
            )
        )
    return examples


@dataclass
class ModelCheckpoint:
    model: CameraDenoiser
    config: DenoiserConfig
    schedule: NoiseSchedule
    standardizer: Standardizer
    provider_id: str
    provider_seed: int
    dataset_manifest_hash: str
    format_version: int = CHECKPOINT_FORMAT_VERSION

    def save(self, path: str | Path):
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        torch.save(self.model.state_dict(), path / "weights.pt")
        sidecar = {
            "format_version": self.format_version,
            "denoiser": self.config.to_dict(),
            "schedule": self.schedule.to_dict(),
            "standardization": self.standardizer.to_dict(),
            "provider_id": self.provider_id,
            "provider_seed": self.provider_seed,
            "dataset_manifest_hash": self.dataset_manifest_hash,
        }
        (path / "checkpoint.json").write_text(json.dumps(sidecar, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "ModelCheckpoint":
        path = Path(path)
        sidecar = json.loads((path / "checkpoint.json").read_text())
        config = DenoiserConfig.from_dict(sidecar["denoiser"])
        model = CameraDenoiser(config)
        state = torch.load(path / "weights.pt", map_location="cpu", weights_only=True)
        model.load_state_dict(state)
        model.eval()
        return cls(
            model=model,
            config=config,
            schedule=NoiseSchedule.from_dict(sidecar["schedule"]),
            standardizer=Standardizer.from_dict(sidecar["standardization"]),
            provider_id=sidecar["provider_id"],
            provider_seed=sidecar.get("provider_seed", 0),
            dataset_manifest_hash=sidecar["dataset_manifest_hash"],
            format_version=sidecar["format_version"],
        )

    def make_provider(self) -> HashProjectionEncoder:
        return HashProjectionEncoder(seed=self.provider_seed)


def build_batch_conditions(
    examples: list[TrainingExample],
    provider,
    rng: np.random.Generator,
    cond_dropout: float,
    kf_presence: float,
):
    """Sample per-example prompt subsets, condition dropout, and keyframe
    presence for one training batch."""
    text = np.zeros((len(examples), 512), dtype=np.float32)
    text_mask = np.zeros(len(examples), dtype=bool)
    kfs = np.zeros((len(examples), 2, 5), dtype=np.float32)
    kf_mask = np.zeros(len(examples), dtype=bool)
    for i, ex in enumerate(examples):
        if rng.random() >= cond_dropout:
            subset = augment_prompt_subset(int(rng.integers(2**32)), ex.sentences)
            text[i] = provider.embed(" ".join(subset)).values
            text_mask[i] = True
        if rng.random() < kf_presence:
            kfs[i] = ex.keyframes
            kf_mask[i] = True
    return text, text_mask, kfs, kf_mask


def training_step(
    examples: list[TrainingExample],
    model: CameraDenoiser,
    schedule: NoiseSchedule,
    cfg: TrainConfig,
    standardizer: Standardizer,
    provider,
    rng: np.random.Generator,
) -> torch.Tensor:
    """One CFG training step; returns the scalar loss (with graph)."""
    x0 = np.stack([standardizer.forward(ex.frames) for ex in examples])
    t = rng.integers(1, schedule.T + 1, size=len(examples))
    eps = rng.standard_normal(x0.shape)
    ab = schedule.alpha_bars[t][:, None, None]
    x_t = np.sqrt(ab) * x0 + np.sqrt(1.0 - ab) * eps

    text, text_mask, kfs, kf_mask = build_batch_conditions(
        examples, provider, rng, cfg.cond_dropout, cfg.kf_presence
    )
    kfs_std = standardizer.forward(kfs)

    dtype = next(model.parameters()).dtype
    eps_hat = model(
        torch.as_tensor(x_t, dtype=dtype),
        torch.as_tensor(t),
        text=torch.as_tensor(text, dtype=dtype),
        text_mask=torch.as_tensor(text_mask),
        keyframes=torch.as_tensor(kfs_std, dtype=dtype),
        kf_mask=torch.as_tensor(kf_mask),
    )
    loss = torch.mean((eps_hat - torch.as_tensor(eps, dtype=dtype)) ** 2)
    if not torch.isfinite(loss):
        raise NonFiniteLoss(
            f"loss became non-finite (t range {t.min()}..{t.max()}, "
            f"|x_t| max {np.abs(x_t).max():.3g})"
        )
    return loss


def train_diffusion(
    records: list[SequenceRecord],
    out_path: str | Path,
    denoiser_config: DenoiserConfig,
    train_config: TrainConfig,
    schedule: NoiseSchedule | None = None,
    provider_seed: int = 0,
    dataset_manifest_hash: str = "",
    metrics_path: str | Path | None = None,
    log_every: int = 50,
) -> ModelCheckpoint:
    """Train the denoiser on the train split and save a checkpoint."""
    if schedule is None:
        schedule = make_linear_schedule(1000)
    train_records = [r for r in records if r.split == "train"] or records
    examples = prepare_examples(train_records, denoiser_config.max_len)
    standardizer = Standardizer.fit(np.stack([ex.frames for ex in examples]))
    provider = HashProjectionEncoder(seed=provider_seed)

    torch.manual_seed(train_config.seed)
    rng = np.random.default_rng(train_config.seed)
    model = CameraDenoiser(denoiser_config)
    model.train()
    optimizer = torch.optim.Adam(model.parameters(), lr=train_config.lr)
    scheduler = torch.optim.lr_scheduler.LambdaLR(
        optimizer, lambda step: max(0.0, 1.0 - step / train_config.steps)
    )
    # exponential moving average of the weights; the averaged model is what
    # gets checkpointed (standard practice for diffusion models, and it
    # measurably smooths the sampled trajectories at small training scale)
    ema = {
        name: p.detach().clone() for name, p in model.named_parameters()
    }

    metrics_file = None
    if metrics_path:
        Path(metrics_path).parent.mkdir(parents=True, exist_ok=True)
        metrics_file = open(metrics_path, "w")
    start = time.time()
    try:
        for step in range(train_config.steps):
            idx = rng.integers(len(examples), size=min(train_config.batch_size, len(examples)))
            batch = [examples[i] for i in idx]
            loss = training_step(
                batch, model, schedule, train_config, standardizer, provider, rng
            )
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            scheduler.step()
            decay = min(train_config.ema_decay, (1 + step) / (10 + step))
            with torch.no_grad():
                for name, p in model.named_parameters():
                    ema[name].mul_(decay).add_(p.detach(), alpha=1 - decay)
            if metrics_file and (step % log_every == 0 or step == train_config.steps - 1):
                metrics_file.write(
                    json.dumps(
                        {
                            "step": step,
                            "loss": float(loss.item()),
                            "lr": float(scheduler.get_last_lr()[0]),
                            "wallclock": time.time() - start,
                        }
                    )
                    + "\n"
                )
                metrics_file.flush()
    finally:
        if metrics_file:
            metrics_file.close()

    with torch.no_grad():
        for name, p in model.named_parameters():
            p.copy_(ema[name])
    model.eval()
    checkpoint = ModelCheckpoint(
        model=model,
        config=denoiser_config,
        schedule=schedule,
        standardizer=standardizer,
        provider_id=provider.provider_id,
        provider_seed=provider_seed,
        dataset_manifest_hash=dataset_manifest_hash,
    )
    checkpoint.save(out_path)
    return checkpoint
