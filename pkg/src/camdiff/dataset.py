"""Procedural synthesis of labeled camera trajectories and paired prompts.

Each movement follows its parametric signature exactly (linear in the
frame index); the sampled continuous parameters stay inside the class
ranges of the taxonomy so the rule-based labeler can round-trip them.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from .camera import CinematicLabels, Trajectory, classify_properties, spherical_to_local
from .taxonomy import classify_scale
from .errors import InfeasibleConstraint, InvalidSpec, IOFailure, TooLong
from .prompts import render_prompts
from .taxonomy import (
    ANGLE_RANGES,
    DIRECTION_ANCHORS,
    DIRECTION_JITTER,
    MOVEMENT_CLASSES,
    REFERENCE_MAX_LEN,
    SCALE_ORDER,
    SCALE_RANGES,
    SCREEN_X_RANGES,
    SCREEN_Y_RANGES,
    Angle,
    Direction,
    Movement,
    Scale,
    ScreenX,
    ScreenY,
    Velocity,
    velocity_frame_range,
)

#: sampled d0 stays this far (in units of h) inside its scale bin
SCALE_BIN_EPS = 1e-5

#: pan start/end directions must come from one horizontal side
PAN_SIDES = (
    (Direction.RIGHT_FRONT, Direction.RIGHT, Direction.RIGHT_BACK),
    (Direction.LEFT_BACK, Direction.LEFT, Direction.LEFT_FRONT),
)

#: minimum orbit sweep in radians
MIN_ORBIT_SWEEP = 0.25 * math.pi

#: boom screen-y sweep range (absolute, normalized units)
BOOM_SWEEP_RANGE = (0.4, 0.8)


@dataclass(frozen=True)
class PropertySpec:
    """Sampled cinematographic classes plus the continuous parameters that
    realize them for one trajectory."""

    movement: Movement
    angle: Angle
    scale_start: Scale
    scale_end: Scale
    direction_start: Direction
    direction_end: Direction
    screen_x: ScreenX
    screen_y: ScreenY
    velocity: Velocity
    theta0: float
    phi0: float
    d0: float
    px0: float
    py0: float
    n_frames: int
    h: float = 1.7
    frame_scale: float = 1.0
    # movement-specific targets (unused entries stay at 0)
    d_end: float = 0.0
    theta_end: float = 0.0
    z_end: float = 0.0
    py_end: float = 0.0

    def labels(self) -> CinematicLabels:
        return CinematicLabels(
            movement=self.movement,
            angle=self.angle,
            scale_start=self.scale_start,
            scale_end=self.scale_end,
            direction_start=self.direction_start,
            direction_end=self.direction_end,
            screen_x=self.screen_x,
            screen_y=self.screen_y,
            velocity=self.velocity,
        )


def _uniform(rng, lo, hi):
    return float(rng.uniform(lo, hi))


def _pick(rng, options):
    return options[int(rng.integers(len(options)))]


def _sample_scale(rng, scale: Scale, h: float) -> float:
    lo, hi = SCALE_RANGES[scale]
    return h * _uniform(rng, lo + SCALE_BIN_EPS, hi - SCALE_BIN_EPS)


def sample_spec(
    rng_seed: int,
    constraints: dict[str, str] | None = None,
    h: float = 1.7,
    frame_scale: float = 1.0,
) -> PropertySpec:
    """Sample classes uniformly (subject to constraints) and continuous
    parameters uniformly within the class ranges. Deterministic per seed."""
    rng = np.random.default_rng(rng_seed)
    constraints = dict(constraints or {})

    def constrained(key, enum_cls, options):
        if key in constraints:
            value = enum_cls(constraints.pop(key))
            if value not in options:
                raise InfeasibleConstraint(f"{key}={value.value} not permitted here")
            return value
        return _pick(rng, tuple(options))

    movement = constrained("movement", Movement, MOVEMENT_CLASSES)
    angle = constrained("angle", Angle, tuple(Angle))
    screen_x = constrained("screen_x", ScreenX, tuple(ScreenX))
    screen_y = constrained("screen_y", ScreenY, tuple(ScreenY))
    velocity = constrained("velocity", Velocity, tuple(Velocity))

    if movement == Movement.PAN:
        if "direction_start" in constraints:
            wanted = Direction(constraints["direction_start"])
            sides = [s for s in PAN_SIDES if wanted in s]
            if not sides:
                raise InfeasibleConstraint(
                    f"pan cannot start from {wanted.value} view"
                )
            side = sides[0]
        else:
            side = _pick(rng, PAN_SIDES)
        direction_start = constrained("direction_start", Direction, side)
        end_options = tuple(d for d in side if d != direction_start)
        direction_end = constrained("direction_end", Direction, end_options)
    else:
        direction_start = constrained("direction_start", Direction, tuple(Direction))
        if movement == Movement.ORBIT:
            end_options = tuple(d for d in Direction if d != direction_start)
            direction_end = constrained("direction_end", Direction, end_options)
        else:
            direction_end = constrained(
                "direction_end", Direction, (direction_start,)
            )

    if movement in (Movement.PUSH, Movement.PULL):
        # push must end at a strictly smaller bin, pull at a strictly larger one
        start_pool = SCALE_ORDER[1:] if movement == Movement.PUSH else SCALE_ORDER[:-1]
        scale_start = constrained("scale_start", Scale, start_pool)
        start_idx = SCALE_ORDER.index(scale_start)
        options = (
            SCALE_ORDER[:start_idx]
            if movement == Movement.PUSH
            else SCALE_ORDER[start_idx + 1 :]
        )
        scale_end = constrained("scale_end", Scale, options)
    else:
        scale_start = constrained("scale_start", Scale, tuple(SCALE_ORDER))
        scale_end = constrained("scale_end", Scale, (scale_start,))

    if constraints:
        raise InfeasibleConstraint(f"unknown constraint keys: {sorted(constraints)}")

    lo, hi = ANGLE_RANGES[angle]
    phi0 = _uniform(rng, lo + 1e-4, hi - 1e-4)
    anchor = DIRECTION_ANCHORS[direction_start]
    theta0 = anchor + _uniform(rng, -DIRECTION_JITTER, DIRECTION_JITTER)
    d0 = _sample_scale(rng, scale_start, h)
    px0 = _uniform(rng, *SCREEN_X_RANGES[screen_x])
    py0 = _uniform(rng, *SCREEN_Y_RANGES[screen_y])
    n_lo, n_hi = velocity_frame_range(velocity, frame_scale)
    n_frames = int(rng.integers(n_lo, n_hi + 1))

    spec = PropertySpec(
        movement=movement,
        angle=angle,
        scale_start=scale_start,
        scale_end=scale_end,
        direction_start=direction_start,
        direction_end=direction_end,
        screen_x=screen_x,
        screen_y=screen_y,
        velocity=velocity,
        theta0=theta0,
        phi0=phi0,
        d0=d0,
        px0=px0,
        py0=py0,
        n_frames=n_frames,
        h=h,
        frame_scale=frame_scale,
    )

    if movement in (Movement.PUSH, Movement.PULL):
        spec = replace(spec, d_end=_sample_scale(rng, scale_end, h))
    elif movement == Movement.PAN:
        end_anchor = DIRECTION_ANCHORS[direction_end]
        theta_end = end_anchor + _uniform(rng, -DIRECTION_JITTER, DIRECTION_JITTER)
        x0 = d0 * math.sin(phi0) * math.sin(theta0)
        y0 = d0 * math.cos(phi0)
        z_end = x0 / math.tan(theta_end)
        # the forward-axis sweep changes the distance; label the end scale
        # from where the camera actually finishes
        d_final = math.sqrt(x0 * x0 + y0 * y0 + z_end * z_end)
        spec = replace(
            spec,
            theta_end=theta_end,
            z_end=z_end,
            scale_end=classify_scale(d_final, h),
        )
    elif movement == Movement.BOOM:
        sweep = _uniform(rng, *BOOM_SWEEP_RANGE)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        if py0 + sign * sweep > 1.0 or py0 + sign * sweep < -1.0:
            sign = -sign
        py_end = py0 + sign * sweep
        x0 = d0 * math.sin(phi0) * math.sin(theta0)
        y0 = d0 * math.cos(phi0)
        z0 = d0 * math.sin(phi0) * math.cos(theta0)
        y_end = y0 + d0 * (py_end - py0)
        d_final = math.sqrt(x0 * x0 + y_end * y_end + z0 * z0)
        spec = replace(spec, py_end=py_end, scale_end=classify_scale(d_final, h))
    elif movement == Movement.ORBIT:
        sign = 1.0 if rng.random() < 0.5 else -1.0
        start_anchor = DIRECTION_ANCHORS[direction_start]
        end_anchor = DIRECTION_ANCHORS[direction_end]
        sweep = (sign * (end_anchor - start_anchor)) % (2.0 * math.pi)
        sweep = max(sweep, MIN_ORBIT_SWEEP)
        spec = replace(spec, theta_end=theta0 + sign * sweep)
    return spec


def _start_frame(spec: PropertySpec) -> np.ndarray:
    from .camera import SphericalPose

    x, y, z = spherical_to_local(SphericalPose(spec.theta0, spec.phi0, spec.d0))
    return np.array([x, y, z, spec.px0, spec.py0])


def _steps(spec: PropertySpec, easing: bool = False) -> np.ndarray:
    """Interpolation parameter per frame; linear unless easing is enabled."""
    u = np.linspace(0.0, 1.0, spec.n_frames)
    if easing:
        u = u * u * (3.0 - 2.0 * u)
    return u


def synth_static(spec: PropertySpec) -> Trajectory:
    frame = _start_frame(spec)
    frames = np.tile(frame, (spec.n_frames, 1))
    return _finish(spec, frames)


def synth_push_pull(spec: PropertySpec, easing: bool = False) -> Trajectory:
    if spec.scale_start == spec.scale_end:
        raise InvalidSpec("push/pull requires distinct start and end scales")
    if spec.d_end <= 0:
        raise InvalidSpec("push/pull spec has no end distance")
    start = _start_frame(spec)
    d_n = spec.d0 + (spec.d_end - spec.d0) * _steps(spec, easing)
    frames = np.tile(start, (spec.n_frames, 1))
    frames[:, :3] = start[:3] * (d_n / spec.d0)[:, None]
    return _finish(spec, frames)


def synth_pan(spec: PropertySpec, easing: bool = False) -> Trajectory:
    start = _start_frame(spec)
    dz_total = spec.z_end - start[2]
    if abs(dz_total) < 1e-9:
        raise InvalidSpec("pan with zero sweep degenerates to static")
    frames = np.tile(start, (spec.n_frames, 1))
    frames[:, 2] = start[2] + dz_total * _steps(spec, easing)
    return _finish(spec, frames)


def synth_boom(spec: PropertySpec, easing: bool = False) -> Trajectory:
    start = _start_frame(spec)
    dpy_total = spec.py_end - spec.py0
    if abs(dpy_total) < 1e-9:
        raise InvalidSpec("boom with zero vertical sweep")
    u = _steps(spec, easing)
    frames = np.tile(start, (spec.n_frames, 1))
    frames[:, 4] = spec.py0 + dpy_total * u
    # vertical translation couples to the screen sweep through dy/dpy = d0
    frames[:, 1] = start[1] + spec.d0 * dpy_total * u
    return _finish(spec, frames)


def synth_orbit(spec: PropertySpec, easing: bool = False) -> Trajectory:
    start = _start_frame(spec)
    radius = spec.d0 * math.sin(spec.phi0)
    theta_n = spec.theta0 + (spec.theta_end - spec.theta0) * _steps(spec, easing)
    frames = np.tile(start, (spec.n_frames, 1))
    frames[:, 0] = np.sin(theta_n) * radius
    frames[:, 2] = np.cos(theta_n) * radius
    return _finish(spec, frames)


_SYNTHESIZERS = {
    Movement.STATIC: lambda spec, easing=False: synth_static(spec),
    Movement.PUSH: synth_push_pull,
    Movement.PULL: synth_push_pull,
    Movement.PAN: synth_pan,
    Movement.BOOM: synth_boom,
    Movement.ORBIT: synth_orbit,
}


def synthesize(spec: PropertySpec, easing: bool = False) -> Trajectory:
    return _SYNTHESIZERS[spec.movement](spec, easing=easing)


def _finish(spec: PropertySpec, frames: np.ndarray) -> Trajectory:
    return Trajectory(
        frames=frames,
        fps=30.0,
        meta={
            "movement": spec.movement.value,
            "n_frames": spec.n_frames,
            "frame_scale": spec.frame_scale,
            "h": spec.h,
        },
    )


def pad_trajectory(trajectory: Trajectory, target_len: int) -> Trajectory:
    """Repeat the final pose to reach ``target_len`` frames."""
    n = len(trajectory)
    if target_len < n:
        raise TooLong(f"trajectory has {n} frames, target is {target_len}")
    if target_len == n:
        return trajectory
    pad = np.tile(trajectory.frames[-1], (target_len - n, 1))
    meta = dict(trajectory.meta)
    meta["orig_len"] = n
    return Trajectory(np.vstack([trajectory.frames, pad]), trajectory.fps, meta)


@dataclass(frozen=True)
class SequenceRecord:
    id: str
    trajectory: Trajectory
    labels: CinematicLabels
    prompts: list[str]
    split: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "split": self.split,
            "labels": self.labels.to_dict(),
            "prompts": self.prompts,
            "trajectory": self.trajectory.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SequenceRecord":
        return cls(
            id=data["id"],
            trajectory=Trajectory.from_dict(data["trajectory"]),
            labels=CinematicLabels.from_dict(data["labels"]),
            prompts=list(data["prompts"]),
            split=data["split"],
        )


@dataclass
class DatasetConfig:
    n_sequences: int = 2670
    seed: int = 0
    out_dir: str = "data"
    max_len: int = 60
    h: float = 1.7
    test_fraction: float = 0.1
    easing: bool = False
    version: str = "1"

    @property
    def frame_scale(self) -> float:
        return self.max_len / REFERENCE_MAX_LEN


def record_seed(seed: int, index: int) -> int:
    """Stable per-record seed, independent of generation order."""
    return int(np.random.SeedSequence(entropy=(seed, index)).generate_state(1)[0])


def make_record(
    config: DatasetConfig, index: int, movement: Movement, split: str
) -> SequenceRecord:
    spec = sample_spec(
        record_seed(config.seed, index),
        constraints={"movement": movement.value},
        h=config.h,
        frame_scale=config.frame_scale,
    )
    trajectory = synthesize(spec, easing=config.easing)
    boom_up = (spec.py_end > spec.py0) if spec.movement == Movement.BOOM else None
    prompts = render_prompts(spec.labels(), boom_up=boom_up)
    return SequenceRecord(
        id=f"seq-{index:06d}",
        trajectory=trajectory,
        labels=spec.labels(),
        prompts=prompts,
        split=split,
    )


def generate_dataset(config: DatasetConfig) -> dict[str, Any]:
    """Write the dataset JSONL and manifest; returns the manifest dict.

    Records round-robin the six movements, and the train/test split is
    stratified by movement at the configured test fraction.
    """
    out = Path(config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IOFailure(f"cannot create output dir {out}: {exc}") from exc

    movements = [
        MOVEMENT_CLASSES[i % len(MOVEMENT_CLASSES)] for i in range(config.n_sequences)
    ]
    # per movement, the last test_fraction of its occurrences goes to test
    counts: dict[str, int] = {m.value: movements.count(m) for m in MOVEMENT_CLASSES}
    n_test = {m: max(1, round(counts[m.value] * config.test_fraction)) for m in MOVEMENT_CLASSES}
    seen: dict[Movement, int] = {m: 0 for m in MOVEMENT_CLASSES}

    split_counts = {"train": 0, "test": 0}
    data_path = out / "dataset.jsonl"
    hasher = hashlib.sha256()
    try:
        with open(data_path, "w") as fh:
            for index, movement in enumerate(movements):
                seen[movement] += 1
                is_test = seen[movement] > counts[movement.value] - n_test[movement]
                split = "test" if is_test else "train"
                split_counts[split] += 1
                record = make_record(config, index, movement, split)
                line = json.dumps(record.to_dict(), sort_keys=True)
                fh.write(line + "\n")
                hasher.update(line.encode())
                hasher.update(b"\n")
    except OSError as exc:
        raise IOFailure(f"cannot write {data_path}: {exc}") from exc

    manifest = {
        "version": config.version,
        "seed": config.seed,
        "n_sequences": config.n_sequences,
        "max_len": config.max_len,
        "frame_scale": config.frame_scale,
        "h": config.h,
        "easing": config.easing,
        "counts": {"movement": counts, "split": split_counts},
        "data_sha256": hasher.hexdigest(),
    }
    manifest_path = out / "manifest.json"
    try:
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise IOFailure(f"cannot write {manifest_path}: {exc}") from exc
    return manifest


def load_dataset(path: str | Path) -> list[SequenceRecord]:
    """Read a dataset JSONL (or a directory containing dataset.jsonl)."""
    path = Path(path)
    if path.is_dir():
        path = path / "dataset.jsonl"
    records = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                records.append(SequenceRecord.from_dict(json.loads(line)))
    return records


def roundtrip_agreement(records: list[SequenceRecord], h: float | None = None) -> float:
    """Fraction of records whose rule-based labels match the generating spec."""
    if not records:
        raise ValueError("no records")
    hits = 0
    for rec in records:
        height = h if h is not None else float(rec.trajectory.meta.get("h", 1.7))
        labels = classify_properties(rec.trajectory, height)
        hits += labels == rec.labels
    return hits / len(records)
