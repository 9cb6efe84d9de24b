"""Trajectory movement classifier and the motion-quality metric suite."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg
import torch
import torch.nn as nn

from .camera import Trajectory
from .dataset import SequenceRecord, pad_trajectory
from .errors import DegenerateDataset, EmptySet, TooFewSamples
from .model import sinusoidal_embedding
from .taxonomy import MOVEMENT_CLASSES, Movement
from .training import Standardizer

N_CLASSES = 6


@dataclass
class ClassifierConfig:
    """Movement-classification network layout.

    Defaults follow the reference table exactly: FC lift to width 256,
    positional encoding, six transformer encoder layers, FC+ReLU+FC
    predictor to per-frame logits, mean-pooled over frames.
    """

    max_len: int = 60
    model_dim: int = 256
    n_layers: int = 6
    n_heads: int = 4
    ff_dim: int = 1024
    dropout: float = 0.1
    n_classes: int = N_CLASSES

    def to_dict(self) -> dict:
        return self.__dict__.copy()

    @classmethod
    def from_dict(cls, data: dict) -> "ClassifierConfig":
        return cls(**data)


class TrajectoryClassifier(nn.Module):
    def __init__(self, config: ClassifierConfig):
        super().__init__()
        self.config = config
        d = config.model_dim
        self.input_fc = nn.Linear(5, d)
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
        self.predictor = nn.Sequential(
            nn.Linear(d, d), nn.ReLU(), nn.Linear(d, config.n_classes)
        )

    def encode(self, x: torch.Tensor) -> torch.Tensor:
        """Mean-pooled output of the final encoder layer (the middle-level
        features used by FID and diversity)."""
        hidden = self.encoder(self.input_fc(x) + self.pos_embedding.unsqueeze(0))
        return hidden.mean(dim=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        hidden = self.encoder(self.input_fc(x) + self.pos_embedding.unsqueeze(0))
        return self.predictor(hidden).mean(dim=1)


MOVEMENT_INDEX = {m: i for i, m in enumerate(MOVEMENT_CLASSES)}


@dataclass
class ClassifierCheckpoint:
    model: TrajectoryClassifier
    config: ClassifierConfig
    standardizer: Standardizer
    heldout_accuracy: float
    seed: int
    # per-dimension whitening of the pooled encoder features, fitted on the
    # classifier's training split; keeps the FID noise floor on matched
    # distributions small and sample-size independent of feature scale
    feature_stats: Standardizer | None = None

    def save(self, path: str | Path):
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        torch.save(self.model.state_dict(), path / "weights.pt")
        sidecar = {
            "format_version": 1,
            "classifier": self.config.to_dict(),
            "standardization": self.standardizer.to_dict(),
            "heldout_accuracy": self.heldout_accuracy,
            "seed": self.seed,
            "classes": [m.value for m in MOVEMENT_CLASSES],
        }
        if self.feature_stats is not None:
            sidecar["feature_standardization"] = self.feature_stats.to_dict()
        (path / "checkpoint.json").write_text(json.dumps(sidecar, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "ClassifierCheckpoint":
        path = Path(path)
        sidecar = json.loads((path / "checkpoint.json").read_text())
        config = ClassifierConfig.from_dict(sidecar["classifier"])
        model = TrajectoryClassifier(config)
        model.load_state_dict(
            torch.load(path / "weights.pt", map_location="cpu", weights_only=True)
        )
        model.eval()
        feature_stats = None
        if "feature_standardization" in sidecar:
            feature_stats = Standardizer.from_dict(sidecar["feature_standardization"])
        return cls(
            model=model,
            config=config,
            standardizer=Standardizer.from_dict(sidecar["standardization"]),
            heldout_accuracy=float(sidecar["heldout_accuracy"]),
            seed=int(sidecar["seed"]),
            feature_stats=feature_stats,
        )

    def _prepare(self, trajectories: list[Trajectory]) -> torch.Tensor:
        L = self.config.max_len
        rows = []
        for t in trajectories:
            padded = pad_trajectory(t, L) if len(t) < L else t
            rows.append(self.standardizer.forward(padded.frames[:L]))
        return torch.as_tensor(np.stack(rows), dtype=torch.float32)

    def predict(self, trajectories: list[Trajectory], batch_size: int = 256) -> np.ndarray:
        """Argmax movement index per trajectory."""
        self.model.eval()
        out = []
        with torch.no_grad():
            x = self._prepare(trajectories)
            for i in range(0, len(x), batch_size):
                out.append(self.model(x[i : i + batch_size]).argmax(dim=1).numpy())
        return np.concatenate(out)

    def features(self, trajectories: list[Trajectory], batch_size: int = 256) -> np.ndarray:
        """Middle-level feature vectors, one row per trajectory."""
        self.model.eval()
        out = []
        with torch.no_grad():
            x = self._prepare(trajectories)
            for i in range(0, len(x), batch_size):
                out.append(self.model.encode(x[i : i + batch_size]).double().numpy())
        feats = np.concatenate(out)
        if self.feature_stats is not None:
            feats = self.feature_stats.forward(feats)
        return feats

    def fit_feature_stats(self, trajectories: list[Trajectory]):
        """Fit the feature whitener on reference trajectories (train split)."""
        self.feature_stats = None
        raw = self.features(trajectories)
        std = raw.std(axis=0)
        self.feature_stats = Standardizer(
            mean=raw.mean(axis=0), std=np.where(std < 1e-8, 1.0, std)
        )


def extract_features(classifier: ClassifierCheckpoint, trajectory: Trajectory) -> np.ndarray:
    return classifier.features([trajectory])[0]


def train_classifier(
    records: list[SequenceRecord],
    seed: int = 0,
    config: ClassifierConfig | None = None,
    steps: int = 600,
    batch_size: int = 64,
    lr: float = 1e-4,
) -> ClassifierCheckpoint:
    """Cross-entropy training on the train split; reports held-out accuracy
    on the test split. Deterministic under the seed (single-threaded CPU)."""
    config = config or ClassifierConfig()
    train = [r for r in records if r.split == "train"]
    test = [r for r in records if r.split == "test"]
    if not test:
        split = max(1, len(records) // 10)
        train, test = records[:-split], records[-split:]
    present = {r.labels.movement for r in train}
    missing = set(MOVEMENT_CLASSES) - present
    if missing:
        raise DegenerateDataset(f"missing movement classes: {sorted(m.value for m in missing)}")

    L = config.max_len
    frames = np.stack(
        [
            (pad_trajectory(r.trajectory, L) if len(r.trajectory) < L else r.trajectory).frames[:L]
            for r in train
        ]
    )
    standardizer = Standardizer.fit(frames)
    x_train = torch.as_tensor(
        np.stack([standardizer.forward(f) for f in frames]), dtype=torch.float32
    )
    y_train = torch.as_tensor([MOVEMENT_INDEX[r.labels.movement] for r in train])

    torch.manual_seed(seed)
    rng = np.random.default_rng(seed)
    model = TrajectoryClassifier(config)
    model.train()
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    loss_fn = nn.CrossEntropyLoss()
    for _ in range(steps):
        idx = torch.as_tensor(rng.integers(len(x_train), size=min(batch_size, len(x_train))))
        logits = model(x_train[idx])
        loss = loss_fn(logits, y_train[idx])
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()

    model.eval()
    checkpoint = ClassifierCheckpoint(
        model=model,
        config=config,
        standardizer=standardizer,
        heldout_accuracy=0.0,
        seed=seed,
    )
    preds = checkpoint.predict([r.trajectory for r in test])
    truth = np.array([MOVEMENT_INDEX[r.labels.movement] for r in test])
    checkpoint.heldout_accuracy = float((preds == truth).mean())
    checkpoint.fit_feature_stats([r.trajectory for r in train])
    return checkpoint


def fid(features_a: np.ndarray, features_b: np.ndarray, reg: float = 1e-6) -> float:
    """Frechet distance between Gaussian fits of two feature sets."""
    features_a = np.atleast_2d(np.asarray(features_a, dtype=np.float64))
    features_b = np.atleast_2d(np.asarray(features_b, dtype=np.float64))
    dim = features_a.shape[1]
    n = min(len(features_a), len(features_b))
    if n < max(2, dim // 4):
        raise TooFewSamples(f"need at least {max(2, dim // 4)} samples, got {n}")
    if n < dim:
        warnings.warn(
            f"feature count {n} below dimension {dim}; FID estimate is noisy",
            stacklevel=2,
        )
    mu_a, mu_b = features_a.mean(axis=0), features_b.mean(axis=0)
    cov_a = np.cov(features_a, rowvar=False) + reg * np.eye(dim)
    cov_b = np.cov(features_b, rowvar=False) + reg * np.eye(dim)
    sqrt_prod, _ = scipy.linalg.sqrtm(cov_a @ cov_b, disp=False)
    value = float(
        np.sum((mu_a - mu_b) ** 2)
        + np.trace(cov_a + cov_b - 2.0 * np.real(sqrt_prod))
    )
    return max(value, 0.0)


def r_precision(
    classifier: ClassifierCheckpoint,
    generated: list[Trajectory],
    intended: list[Movement],
) -> float:
    """Fraction of generated trajectories classified as their intended
    movement."""
    if not generated:
        raise EmptySet("no generated trajectories")
    if len(generated) != len(intended):
        raise ValueError("generated and intended lengths differ")
    preds = classifier.predict(generated)
    truth = np.array([MOVEMENT_INDEX[m] for m in intended])
    return float((preds == truth).mean())


def diversity(features: np.ndarray, pairs: int, seed: int = 0) -> float:
    """Mean distance over disjoint random feature pairs."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    n = len(features)
    if n < 2:
        raise EmptySet("diversity needs at least two feature vectors")
    pairs = min(pairs, n // 2)
    rng = np.random.default_rng(seed)
    idx = rng.permutation(n)[: 2 * pairs]
    a, b = features[idx[:pairs]], features[idx[pairs:]]
    return float(np.mean(np.linalg.norm(a - b, axis=1)))


def multimodality(per_prompt_features: dict[str, np.ndarray], pairs: int = 16, seed: int = 0) -> float:
    """Mean within-prompt diversity across prompts."""
    if not per_prompt_features:
        raise EmptySet("no prompts")
    values = [
        diversity(f, pairs, seed=seed + i)
        for i, f in enumerate(per_prompt_features.values())
    ]
    return float(np.mean(values))


def keyframe_distance(trajectory: Trajectory, start_kf: np.ndarray, end_kf: np.ndarray) -> float:
    """Mean L2 distance of the 3 frames nearest each boundary keyframe."""
    frames = trajectory.frames
    k = min(3, len(frames))
    start_kf = np.asarray(start_kf, float)
    end_kf = np.asarray(end_kf, float)
    dists = [float(np.linalg.norm(frames[i] - start_kf)) for i in range(k)]
    dists += [float(np.linalg.norm(frames[-(i + 1)] - end_kf)) for i in range(k)]
    return float(np.mean(dists))


@dataclass
class MetricReport:
    fid: float
    r_precision: float
    diversity: float
    multimodality: float
    kf_distance: float
    n_generated: int
    n_real: int
    seed: int
    feature_layer: str = "mean-pooled final encoder layer"
    diversity_pairs: int = 0

    def to_dict(self) -> dict:
        return self.__dict__.copy()

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)
