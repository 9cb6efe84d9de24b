"""HTTP service exposing generation, interpolation, and long-sequence
composition over a loaded checkpoint."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .camera import classify_properties
from .composer import SequencePlan, generate_long_sequence
from .conditioning import build_condition, interpolate_embeddings
from .errors import CamdiffError
from .model import SamplerConfig
from .prompts import (
    ANGLE_NAMES,
    BOOM_DOWN_SYNONYMS,
    BOOM_UP_SYNONYMS,
    MOVEMENT_SYNONYMS,
    SCALE_NAMES,
    VELOCITY_SENTENCES,
)
from .sampling import sample
from .taxonomy import (
    Angle,
    Direction,
    Movement,
    Scale,
    ScreenX,
    ScreenY,
    Velocity,
)
from .training import ModelCheckpoint

API_VERSION = 1
CHECKPOINT_ENV = "CAMDIFF_CHECKPOINT"


class KeyframePair(BaseModel):
    start: list[float] = Field(min_length=5, max_length=5)
    end: list[float] = Field(min_length=5, max_length=5)


class GenerateRequest(BaseModel):
    prompt: str = ""
    keyframes: Optional[KeyframePair] = None
    omega: float = 1.0
    length: Optional[int] = None
    seed: Optional[int] = None
    steps: int = 50
    height: float = 1.7


class InterpolateRequest(BaseModel):
    prompt_a: str
    prompt_b: str
    lam: float = Field(alias="lambda", ge=0.0, le=1.0)
    keyframes: Optional[KeyframePair] = None
    omega: float = 1.0
    length: Optional[int] = None
    seed: Optional[int] = None
    steps: int = 50
    height: float = 1.7

    model_config = {"populate_by_name": True}


class SequenceRequestModel(BaseModel):
    segments: list[dict]
    transition_steps: int = 0
    transition_frames: int = 60
    omega: float = 1.0
    seed: Optional[int] = None
    steps: int = 50


class ServiceState:
    def __init__(self, checkpoint_path: str | None):
        self.checkpoint_path = checkpoint_path
        self.checkpoint: ModelCheckpoint | None = None
        self.provider = None
        if checkpoint_path and Path(checkpoint_path).exists():
            self.checkpoint = ModelCheckpoint.load(checkpoint_path)
            self.provider = self.checkpoint.make_provider()

    @property
    def ready(self) -> bool:
        return self.checkpoint is not None


def _kf_array(kf: Optional[KeyframePair]) -> np.ndarray | None:
    if kf is None:
        return None
    return np.asarray([kf.start, kf.end], dtype=float)


def _trajectory_payload(trajectory, height: float, seed: int, omega: float) -> dict:
    payload = trajectory.to_dict()
    return {
        "api_version": API_VERSION,
        "trajectory": payload,
        "labels": classify_properties(trajectory, height).to_dict(),
        "seed": seed,
        "omega": omega,
    }


def create_app(checkpoint_path: str | None = None) -> FastAPI:
    path = checkpoint_path or os.environ.get(CHECKPOINT_ENV)
    state = ServiceState(path)
    app = FastAPI(title="camdiff", version="0.1.0")
    app.state.camdiff = state

    @app.exception_handler(RequestValidationError)
    async def schema_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.exception_handler(CamdiffError)
    async def precondition_error(request: Request, exc: CamdiffError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    def require_ready():
        if not state.ready:
            return JSONResponse(
                status_code=503, content={"detail": "checkpoint not loaded"}
            )
        return None

    @app.get("/healthz")
    async def healthz():
        return {"ready": state.ready, "checkpoint": state.checkpoint_path}

    @app.get("/api/vocab")
    async def vocab():
        return {
            "api_version": API_VERSION,
            "movements": [m.value for m in Movement if m is not Movement.UNCLASSIFIABLE],
            "angles": [a.value for a in Angle],
            "scales": [s.value for s in Scale],
            "directions": [d.value for d in Direction],
            "screen_x": [s.value for s in ScreenX],
            "screen_y": [s.value for s in ScreenY],
            "velocities": [v.value for v in Velocity],
            "templates": {
                "movement": {m.value: list(v) for m, v in MOVEMENT_SYNONYMS.items()},
                "boom_up": list(BOOM_UP_SYNONYMS),
                "boom_down": list(BOOM_DOWN_SYNONYMS),
                "angle": {a.value: n for a, n in ANGLE_NAMES.items()},
                "scale": {s.value: n for s, n in SCALE_NAMES.items()},
                "velocity": {v.value: s for v, s in VELOCITY_SENTENCES.items()},
            },
        }

    @app.post("/api/generate")
    async def generate(req: GenerateRequest):
        guard = require_ready()
        if guard:
            return guard
        seed = req.seed if req.seed is not None else 0
        embedding = state.provider.embed(req.prompt) if req.prompt else None
        condition = build_condition(embedding, _kf_array(req.keyframes))
        cfg = SamplerConfig(omega=req.omega, steps=req.steps, seed=seed)
        trajectory = sample(state.checkpoint, condition, cfg, length=req.length)
        return _trajectory_payload(trajectory, req.height, seed, req.omega)

    @app.post("/api/interpolate")
    async def interpolate(req: InterpolateRequest):
        guard = require_ready()
        if guard:
            return guard
        seed = req.seed if req.seed is not None else 0
        emb_a = state.provider.embed(req.prompt_a)
        emb_b = state.provider.embed(req.prompt_b)
        embedding = interpolate_embeddings(emb_a, emb_b, req.lam)
        condition = build_condition(embedding, _kf_array(req.keyframes))
        cfg = SamplerConfig(omega=req.omega, steps=req.steps, seed=seed)
        trajectory = sample(state.checkpoint, condition, cfg, length=req.length)
        out = _trajectory_payload(trajectory, req.height, seed, req.omega)
        out["lambda"] = req.lam
        return out

    @app.post("/api/sequence")
    async def sequence(req: SequenceRequestModel):
        guard = require_ready()
        if guard:
            return guard
        seed = req.seed if req.seed is not None else 0
        plan = SequencePlan.from_dict(
            {
                "segments": req.segments,
                "transition_steps": req.transition_steps,
                "transition_frames": req.transition_frames,
            }
        )
        cfg = SamplerConfig(omega=req.omega, steps=req.steps, seed=seed)
        trajectory = generate_long_sequence(plan, state.checkpoint, cfg)
        return _trajectory_payload(trajectory, 1.7, seed, req.omega)

    return app
