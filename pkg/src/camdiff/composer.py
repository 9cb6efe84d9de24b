"""Long-sequence assembly and style transitions via embedding interpolation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .camera import SCREEN_SOFT_LIMIT, Trajectory
from .conditioning import (
    ConditionBundle,
    TextEmbedding,
    build_condition,
    interpolate_embeddings,
)
from .errors import PlanInfeasible
from .model import SamplerConfig
from .sampling import sample
from .training import ModelCheckpoint

#: per-frame delta below which a trailing frame counts as padding
DEFAULT_VEL_EPSILON = 1e-4


@dataclass
class SegmentSpec:
    prompt: str
    duration_frames: int
    keyframes: tuple[np.ndarray, np.ndarray] | None = None  # (start, end) 5-vectors
    omega: float = 1.0

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "prompt": self.prompt,
            "duration_frames": self.duration_frames,
            "omega": self.omega,
        }
        if self.keyframes is not None:
            data["keyframes"] = {
                "start": [float(v) for v in self.keyframes[0]],
                "end": [float(v) for v in self.keyframes[1]],
            }
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SegmentSpec":
        keyframes = None
        if data.get("keyframes"):
            keyframes = (
                np.asarray(data["keyframes"]["start"], float),
                np.asarray(data["keyframes"]["end"], float),
            )
        return cls(
            prompt=data["prompt"],
            duration_frames=int(data["duration_frames"]),
            keyframes=keyframes,
            omega=float(data.get("omega", 1.0)),
        )


@dataclass
class SequencePlan:
    segments: list[SegmentSpec]
    transition_steps: int = 0
    transition_frames: int = 60

    def __post_init__(self):
        if not self.segments:
            raise PlanInfeasible("plan needs at least one segment")
        if self.transition_steps < 0:
            raise PlanInfeasible("transition_steps must be >= 0")

    def to_dict(self) -> dict[str, Any]:
        return {
            "segments": [s.to_dict() for s in self.segments],
            "transition_steps": self.transition_steps,
            "transition_frames": self.transition_frames,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SequencePlan":
        return cls(
            segments=[SegmentSpec.from_dict(s) for s in data["segments"]],
            transition_steps=int(data.get("transition_steps", 0)),
            transition_frames=int(data.get("transition_frames", 60)),
        )


def _sanitize_pose(frame: np.ndarray) -> np.ndarray:
    """Clamp a model-produced frame into the valid camera-sample domain so it
    can be reused as a keyframe condition."""
    frame = np.asarray(frame, float).copy()
    lim = SCREEN_SOFT_LIMIT - 1e-6
    frame[3:] = np.clip(frame[3:], -lim, lim)
    if np.linalg.norm(frame[:3]) < 1e-9:
        frame[2] = 1e-6
    return frame


def _segment_condition(
    checkpoint: ModelCheckpoint,
    provider,
    embedding: TextEmbedding,
    start_kf: np.ndarray | None,
    end_kf: np.ndarray | None,
) -> ConditionBundle:
    if start_kf is None or end_kf is None:
        return build_condition(embedding, None)
    return build_condition(
        embedding, np.stack([_sanitize_pose(start_kf), _sanitize_pose(end_kf)])
    )


def _sample_segment(checkpoint, condition, omega, seed, length):
    cfg = SamplerConfig(omega=omega, steps=_default_steps(checkpoint), seed=seed)
    return sample(checkpoint, condition, cfg, length=length)


def _default_steps(checkpoint) -> int:
    # respaced sampling keeps desk-scale inference tractable on CPU
    return min(50, checkpoint.schedule.T)


def generate_transition(
    checkpoint: ModelCheckpoint,
    prompt_a: str,
    prompt_b: str,
    steps: int,
    boundary_keyframes: tuple[np.ndarray, np.ndarray],
    cfg: SamplerConfig,
    segment_frames: int | None = None,
) -> Trajectory:
    """Blend style a into style b over ``steps`` sub-segments.

    Sub-segment i conditions on the embedding interpolated at i/steps and
    chains keyframes: each sub-segment starts at the previous one's final
    frame and targets a pose interpolated toward the end keyframe.
    """
    if steps < 1:
        raise PlanInfeasible("transition needs at least one step")
    provider = checkpoint.make_provider()
    emb_a = provider.embed(prompt_a)
    emb_b = provider.embed(prompt_b)
    start_pose = np.asarray(boundary_keyframes[0], float)
    end_pose = np.asarray(boundary_keyframes[1], float)
    length = segment_frames or checkpoint.config.max_len

    pieces = []
    boundaries = []
    current = start_pose
    total = 0
    for i in range(1, steps + 1):
        lam = i / steps
        embedding = interpolate_embeddings(emb_a, emb_b, lam)
        target = start_pose + (end_pose - start_pose) * lam
        condition = _segment_condition(checkpoint, provider, embedding, current, target)
        seg = _sample_segment(checkpoint, condition, cfg.omega, cfg.seed + i, length)
        pieces.append(seg.frames)
        total += len(seg.frames)
        boundaries.append(total)
        current = seg.frames[-1]

    return Trajectory(
        frames=np.vstack(pieces),
        fps=30.0,
        meta={
            "segments": boundaries,
            "prompts": [prompt_a, prompt_b],
            "seed": cfg.seed,
            "omega": cfg.omega,
        },
    )


def generate_long_sequence(
    plan: SequencePlan, checkpoint: ModelCheckpoint, cfg: SamplerConfig
) -> Trajectory:
    """Sample the plan's segments in order, chaining continuity keyframes
    and optionally inserting interpolated transitions between styles."""
    provider = checkpoint.make_provider()
    max_len = checkpoint.config.max_len
    for seg in plan.segments:
        if seg.duration_frames > max_len:
            raise PlanInfeasible(
                f"segment duration {seg.duration_frames} exceeds model length {max_len}"
            )

    pieces: list[np.ndarray] = []
    boundaries: list[int] = []
    total = 0
    prev_frame: np.ndarray | None = None
    prev_prompt: str | None = None

    for si, seg in enumerate(plan.segments):
        if (
            plan.transition_steps > 0
            and prev_prompt is not None
            and prev_prompt != seg.prompt
        ):
            target = (
                seg.keyframes[0]
                if seg.keyframes is not None
                else prev_frame
            )
            transition = generate_transition(
                checkpoint,
                prev_prompt,
                seg.prompt,
                plan.transition_steps,
                (prev_frame, target),
                SamplerConfig(omega=cfg.omega, steps=cfg.steps, seed=cfg.seed + 1000 * si),
                segment_frames=plan.transition_frames,
            )
            pieces.append(transition.frames)
            total += len(transition.frames)
            boundaries.append(total)
            prev_frame = transition.frames[-1]

        start_kf = seg.keyframes[0] if seg.keyframes is not None else prev_frame
        end_kf = seg.keyframes[1] if seg.keyframes is not None else None
        embedding = provider.embed(seg.prompt)
        if start_kf is not None and end_kf is None:
            # continuity-only chaining: the keyframe condition needs both
            # rows, so draft an unanchored segment to pick a natural end pose
            draft = _sample_segment(
                checkpoint,
                build_condition(embedding, None),
                seg.omega,
                cfg.seed + si + 500_000,
                seg.duration_frames,
            )
            end_kf = draft.frames[-1]
        if start_kf is not None:
            condition = _segment_condition(checkpoint, provider, embedding, start_kf, end_kf)
        else:
            condition = build_condition(embedding, None)
        seg_traj = _sample_segment(
            checkpoint, condition, seg.omega, cfg.seed + si, seg.duration_frames
        )
        frames = seg_traj.frames
        pieces.append(frames)
        total += len(frames)
        boundaries.append(total)
        prev_frame = frames[-1]
        prev_prompt = seg.prompt

    return Trajectory(
        frames=np.vstack(pieces),
        fps=30.0,
        meta={"segments": boundaries, "seed": cfg.seed, "omega": cfg.omega},
    )


def truncate_padding(trajectory: Trajectory, vel_epsilon: float = DEFAULT_VEL_EPSILON) -> Trajectory:
    """Remove the maximal static suffix (per-frame delta below epsilon in
    every channel); never drops below 2 frames. Idempotent."""
    frames = trajectory.frames
    n = len(frames)
    keep = n
    while keep > 2:
        delta = np.max(np.abs(frames[keep - 1] - frames[keep - 2]))
        if delta >= vel_epsilon:
            break
        keep -= 1
    if keep == n:
        return trajectory
    meta = dict(trajectory.meta)
    meta["truncated_from"] = n
    return Trajectory(frames[:keep], trajectory.fps, meta)
