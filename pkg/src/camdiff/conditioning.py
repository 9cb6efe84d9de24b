"""Text/image embedding providers, condition assembly, and interpolation.

Two providers share the 512-d embedding slot: a file-backed cache of
precomputed vectors (keyed by SHA-256 of the exact prompt string) and a
deterministic hash-projection encoder for desk-scale runs.
"""

from __future__ import annotations

import hashlib
import json
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .camera import CameraSample
from .errors import (
    BadFile,
    EmptyFile,
    EmptyPrompt,
    MissingEmbedding,
    RangeError,
    ShapeMismatch,
)

EMBED_DIM = 512

CACHE_MAGIC = b"CMEB"
CACHE_VERSION = 1


@dataclass(frozen=True)
class TextEmbedding:
    values: np.ndarray
    provider_id: str
    source: str = "text"  # text | image | interpolated

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float32)
        if values.shape != (EMBED_DIM,):
            raise ShapeMismatch(f"embedding must be ({EMBED_DIM},), got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("embedding contains non-finite values")
        object.__setattr__(self, "values", values)


def _template_token_frequencies() -> dict[str, int]:
    """Per-sentence token document frequencies over the full template bank.

    The bank is a fixed, deterministic corpus shipped with the package, so
    the IDF weights below are reproducible without any external data.
    """
    from .prompts import (
        ANGLE_NAMES,
        BOOM_DOWN_SYNONYMS,
        BOOM_UP_SYNONYMS,
        MOVEMENT_SYNONYMS,
        TRACKING_SENTENCE,
        VELOCITY_SENTENCES,
        angle_sentence,
        direction_sentence,
        scale_sentence,
        screen_sentence,
    )
    from .taxonomy import Angle, Direction, Scale, ScreenX, ScreenY

    sentences = [s for bank in MOVEMENT_SYNONYMS.values() for s in bank]
    sentences += list(BOOM_UP_SYNONYMS) + list(BOOM_DOWN_SYNONYMS) + [TRACKING_SENTENCE]
    sentences += [angle_sentence(a) for a in ANGLE_NAMES]
    sentences += [direction_sentence(a, b) for a in Direction for b in Direction]
    sentences += [screen_sentence(x, y) for x in ScreenX for y in ScreenY]
    sentences += [scale_sentence(a, b) for a in Scale for b in Scale]
    sentences += list(VELOCITY_SENTENCES.values())
    # silence unused-import style checks for Angle (names come from ANGLE_NAMES)
    del Angle
    df: dict[str, int] = {}
    for sentence in sentences:
        for token in set(re.findall(r"[a-z0-9']+", sentence.lower())):
            df[token] = df.get(token, 0) + 1
    df["__documents__"] = len(sentences)
    return df


class HashProjectionEncoder:
    """Seeded bag-of-words encoder: each lowercase token maps to a fixed
    Gaussian vector; tokens are pooled with IDF weights derived from the
    template bank (so ubiquitous words like "the camera" do not drown out
    the discriminative ones) and the result is L2-normalized."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.provider_id = f"hash-projection-v2-seed{seed}"
        self._token_cache: dict[str, np.ndarray] = {}
        self._prompt_cache: dict[str, TextEmbedding] = {}
        self._df = _template_token_frequencies()
        self._n_docs = self._df["__documents__"]

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._token_cache.get(token)
        if vec is None:
            digest = hashlib.sha256(f"{self.seed}:{token}".encode()).digest()
            rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
            vec = rng.standard_normal(EMBED_DIM)
            self._token_cache[token] = vec
        return vec

    def _token_weight(self, token: str) -> float:
        df = self._df.get(token, 0)
        return float(np.log((1.0 + self._n_docs) / (1.0 + df)))

    def embed(self, prompt: str) -> TextEmbedding:
        cached = self._prompt_cache.get(prompt)
        if cached is not None:
            return cached
        tokens = re.findall(r"[a-z0-9']+", prompt.lower())
        if not tokens:
            raise EmptyPrompt(f"no embeddable tokens in {prompt!r}")
        pooled = np.sum(
            [self._token_weight(t) * self._token_vector(t) for t in tokens], axis=0
        )
        norm = np.linalg.norm(pooled)
        if norm == 0.0:  # all tokens appear in every template sentence
            pooled = np.mean([self._token_vector(t) for t in tokens], axis=0)
            norm = np.linalg.norm(pooled)
        pooled = pooled / norm
        emb = TextEmbedding(pooled.astype(np.float32), self.provider_id)
        self._prompt_cache[prompt] = emb
        return emb


class FileEmbeddingProvider:
    """O(1) lookup of precomputed embeddings keyed by SHA-256 of the prompt."""

    def __init__(self, cache_path: str | Path):
        self.cache_path = Path(cache_path)
        self.provider_id = f"file:{self.cache_path.name}"
        self._table: dict[bytes, np.ndarray] = {}
        self._load()

    def _load(self):
        try:
            raw = self.cache_path.read_bytes()
        except OSError as exc:
            raise BadFile(f"cannot read cache {self.cache_path}: {exc}") from exc
        header = struct.calcsize("<4sIIQ")
        if len(raw) < header:
            raise BadFile("cache file too short for header")
        magic, version, dim, count = struct.unpack("<4sIIQ", raw[:header])
        if magic != CACHE_MAGIC or version != CACHE_VERSION:
            raise BadFile(f"bad cache header {magic!r} v{version}")
        if dim != EMBED_DIM:
            raise BadFile(f"cache dim {dim} != {EMBED_DIM}")
        rec = 32 + 4 * dim
        if len(raw) != header + count * rec:
            raise BadFile("cache file size inconsistent with record count")
        for i in range(count):
            off = header + i * rec
            key = raw[off : off + 32]
            vec = np.frombuffer(raw, dtype="<f4", count=dim, offset=off + 32)
            self._table[key] = vec.copy()

    def embed(self, prompt: str) -> TextEmbedding:
        key = hashlib.sha256(prompt.encode()).digest()
        vec = self._table.get(key)
        if vec is None:
            raise MissingEmbedding(f"no cached embedding for prompt {prompt!r}")
        return TextEmbedding(vec, self.provider_id)

    @staticmethod
    def write_cache(entries: dict[str, np.ndarray], cache_path: str | Path):
        """Write a cache file; records sorted by key for bit-exact output."""
        rows = []
        for prompt, vec in entries.items():
            vec = np.asarray(vec, dtype="<f4")
            if vec.shape != (EMBED_DIM,):
                raise ShapeMismatch(f"embedding for {prompt!r} has shape {vec.shape}")
            rows.append((hashlib.sha256(prompt.encode()).digest(), vec))
        rows.sort(key=lambda kv: kv[0])
        with open(cache_path, "wb") as fh:
            fh.write(struct.pack("<4sIIQ", CACHE_MAGIC, CACHE_VERSION, EMBED_DIM, len(rows)))
            for key, vec in rows:
                fh.write(key)
                fh.write(vec.tobytes())

    @staticmethod
    def import_json(json_path: str | Path, cache_path: str | Path) -> int:
        """Import a {prompt: [512 floats]} JSON dump into a cache file."""
        try:
            data = json.loads(Path(json_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise BadFile(f"cannot parse {json_path}: {exc}") from exc
        entries = {p: np.asarray(v, dtype=np.float32) for p, v in data.items()}
        FileEmbeddingProvider.write_cache(entries, cache_path)
        return len(entries)


def embed_text(prompt: str, provider) -> TextEmbedding:
    if not prompt:
        raise EmptyPrompt("empty prompt")
    return provider.embed(prompt)


def embed_image_sequence(embedding_file: str | Path) -> TextEmbedding:
    """Mean-pool a file of per-frame 512-d image embeddings into the c_s slot.

    Accepts .npy arrays of shape (F, 512) or JSON lists of frame vectors.
    """
    path = Path(embedding_file)
    try:
        if path.suffix == ".npy":
            frames = np.load(path)
        else:
            frames = np.asarray(json.loads(path.read_text()), dtype=np.float32)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise BadFile(f"cannot read image embeddings from {path}: {exc}") from exc
    frames = np.atleast_2d(np.asarray(frames, dtype=np.float32))
    if frames.size == 0:
        raise EmptyFile(f"{path} holds no frames")
    if frames.ndim != 2 or frames.shape[1] != EMBED_DIM:
        raise BadFile(f"expected (F, {EMBED_DIM}) frame embeddings, got {frames.shape}")
    return TextEmbedding(frames.mean(axis=0), f"image:{path.name}", source="image")


def interpolate_embeddings(a: TextEmbedding, b: TextEmbedding, lam: float) -> TextEmbedding:
    """Affine blend (1-lam)*a + lam*b; no re-normalization."""
    if not 0.0 <= lam <= 1.0:
        raise RangeError(f"lambda must lie in [0, 1], got {lam}")
    values = (1.0 - lam) * a.values.astype(np.float64) + lam * b.values.astype(np.float64)
    return TextEmbedding(values.astype(np.float32), a.provider_id, source="interpolated")


@dataclass(frozen=True)
class ConditionBundle:
    """Assembled condition: text embedding and/or a 2x5 keyframe block.

    Absent parts are ``None`` (the distinguished null token); they are
    never encoded as zero vectors.
    """

    c_s: TextEmbedding | None = None
    c_k: np.ndarray | None = None

    def __post_init__(self):
        if self.c_k is not None:
            c_k = np.asarray(self.c_k, dtype=float)
            if c_k.shape != (2, 5):
                raise ShapeMismatch(f"keyframe block must be (2, 5), got {c_k.shape}")
            for row in c_k:
                CameraSample.from_array(row)  # validates invariants
            object.__setattr__(self, "c_k", c_k)

    @property
    def has_text(self) -> bool:
        return self.c_s is not None

    @property
    def has_keyframes(self) -> bool:
        return self.c_k is not None


def build_condition(
    c_s: TextEmbedding | None = None,
    keyframes: np.ndarray | tuple | None = None,
) -> ConditionBundle:
    """Assemble a condition bundle; (None, None) is the unconditioned bundle."""
    c_k = None if keyframes is None else np.asarray(keyframes, dtype=float)
    return ConditionBundle(c_s=c_s, c_k=c_k)
