"""Character-centric camera representation and rule-based trajectory labeling.

The character frame is left-handed: X points to the character's left,
Y up, Z forward. Screen coordinates (px, py) are the normalized image
position of the look-at target, with px growing toward screen right and
py growing toward screen bottom (so a camera boom upward pushes the
target down the frame, py increasing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .errors import Degenerate, ShapeMismatch, Unreachable, ZeroVector
from .taxonomy import (
    Angle,
    Direction,
    Movement,
    Scale,
    ScreenX,
    ScreenY,
    Velocity,
    classify_angle,
    classify_direction,
    classify_scale,
    classify_screen_x,
    classify_screen_y,
    classify_velocity,
)

#: soft clamp band for screen coordinates; dataset values stay in [-1, 1]
SCREEN_SOFT_LIMIT = 1.5


@dataclass(frozen=True)
class CameraSample:
    """Per-frame 5-DoF camera state: position relative to the head center
    plus the normalized screen position of the look-at target."""

    x: float
    y: float
    z: float
    px: float
    py: float

    def __post_init__(self):
        vals = (self.x, self.y, self.z, self.px, self.py)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite camera sample {vals}")
        if abs(self.px) > SCREEN_SOFT_LIMIT or abs(self.py) > SCREEN_SOFT_LIMIT:
            raise ValueError(f"screen position outside soft band: ({self.px}, {self.py})")
        if self.x == 0.0 and self.y == 0.0 and self.z == 0.0:
            raise ValueError("camera coincides with head center")

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.px, self.py], dtype=float)

    @classmethod
    def from_array(cls, arr: Iterable[float]) -> "CameraSample":
        x, y, z, px, py = (float(v) for v in arr)
        return cls(x, y, z, px, py)


@dataclass(frozen=True)
class SphericalPose:
    """Camera position in the local spherical frame: azimuth ``theta`` from +Z
    toward +X, polar ``phi`` from +Y, distance ``d``."""

    theta: float
    phi: float
    d: float

    def __post_init__(self):
        if not self.d > 0:
            raise ValueError(f"distance must be positive, got {self.d}")
        if not 0.0 < self.phi < math.pi:
            raise ValueError(f"polar angle must lie in (0, pi), got {self.phi}")


@dataclass
class Trajectory:
    """Ordered camera samples with fps and free-form metadata.

    ``frames`` is an (N, 5) float array of [x, y, z, px, py] rows.
    """

    frames: np.ndarray
    fps: float = 30.0
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=float)
        if self.frames.ndim != 2 or self.frames.shape[1] != 5:
            raise ShapeMismatch(f"frames must be (N, 5), got {self.frames.shape}")
        if len(self.frames) < 1:
            raise ValueError("trajectory needs at least one frame")
        if not self.fps > 0:
            raise ValueError(f"fps must be positive, got {self.fps}")

    def __len__(self) -> int:
        return len(self.frames)

    def sample(self, n: int) -> CameraSample:
        return CameraSample.from_array(self.frames[n])

    def to_dict(self) -> dict[str, Any]:
        return {
            "fps": self.fps,
            "frames": [[float(f"{v:.9g}") for v in row] for row in self.frames],
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Trajectory":
        return cls(
            frames=np.asarray(data["frames"], dtype=float),
            fps=float(data.get("fps", 30.0)),
            meta=dict(data.get("meta", {})),
        )


@dataclass(frozen=True)
class CharacterFrame:
    """World-space character anchor: head position, heading of the local +Z
    axis, and character height."""

    head_position: tuple[float, float, float]
    facing_yaw: float
    height: float

    def __post_init__(self):
        if not self.height > 0:
            raise ValueError(f"character height must be positive, got {self.height}")


@dataclass(frozen=True)
class WorldCameraPose:
    """Roll-free world camera: position, yaw/pitch, square frustum fov."""

    position: tuple[float, float, float]
    yaw: float
    pitch: float
    fov: float = 45.0
    roll: float = 0.0

    def __post_init__(self):
        if self.roll != 0.0:
            raise ValueError("roll is not modeled; it must stay 0")
        if not -math.pi / 2 < self.pitch < math.pi / 2:
            raise ValueError(f"pitch out of (-pi/2, pi/2): {self.pitch}")

    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Camera axes in world space: (forward, screen_right, screen_down)."""
        sy, cy = math.sin(self.yaw), math.cos(self.yaw)
        sp, cp = math.sin(self.pitch), math.cos(self.pitch)
        forward = np.array([sy * cp, sp, cy * cp])
        right = np.array([-cy, 0.0, sy])
        down = np.array([sy * sp, -cp, cy * sp])
        return forward, right, down


@dataclass(frozen=True)
class CinematicLabels:
    movement: Movement
    angle: Angle
    scale_start: Scale
    scale_end: Scale
    direction_start: Direction
    direction_end: Direction
    screen_x: ScreenX
    screen_y: ScreenY
    velocity: Velocity

    def to_dict(self) -> dict[str, str]:
        return {k: v.value for k, v in self.__dict__.items()}

    @classmethod
    def from_dict(cls, data: dict[str, str]) -> "CinematicLabels":
        return cls(
            movement=Movement(data["movement"]),
            angle=Angle(data["angle"]),
            scale_start=Scale(data["scale_start"]),
            scale_end=Scale(data["scale_end"]),
            direction_start=Direction(data["direction_start"]),
            direction_end=Direction(data["direction_end"]),
            screen_x=ScreenX(data["screen_x"]),
            screen_y=ScreenY(data["screen_y"]),
            velocity=Velocity(data["velocity"]),
        )


def spherical_to_local(pose: SphericalPose) -> tuple[float, float, float]:
    """Convert a spherical pose to Cartesian local coordinates."""
    sin_phi = math.sin(pose.phi)
    return (
        pose.d * sin_phi * math.sin(pose.theta),
        pose.d * math.cos(pose.phi),
        pose.d * sin_phi * math.cos(pose.theta),
    )


def local_to_spherical(x: float, y: float, z: float) -> SphericalPose:
    """Inverse of :func:`spherical_to_local`; azimuth normalized to [0, 2pi)."""
    d = math.sqrt(x * x + y * y + z * z)
    if d < 1e-12:
        raise ZeroVector("cannot convert near-zero vector to spherical coordinates")
    phi = math.acos(max(-1.0, min(1.0, y / d)))
    theta = math.atan2(x, z) % (2.0 * math.pi)
    return SphericalPose(theta=theta, phi=phi, d=d)


def _yaw_rotation(yaw: float) -> np.ndarray:
    s, c = math.sin(yaw), math.cos(yaw)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def project_to_ndc(pose: WorldCameraPose, point: Iterable[float]) -> tuple[float, float]:
    """Pinhole projection of a world point into the pose's normalized screen."""
    forward, right, down = pose.basis()
    v = np.asarray(point, dtype=float) - np.asarray(pose.position, dtype=float)
    depth = float(v @ forward)
    if depth <= 1e-9:
        raise Degenerate("target not in front of camera")
    tan_half = math.tan(math.radians(pose.fov) / 2.0)
    return float(v @ right) / (depth * tan_half), float(v @ down) / (depth * tan_half)


def resolve_world_pose(
    sample: CameraSample, character: CharacterFrame, fov: float = 45.0
) -> WorldCameraPose:
    """Place the camera in world space and solve the roll-free orientation
    whose pinhole projection puts the head center at (px, py)."""
    head = np.asarray(character.head_position, dtype=float)
    position = head + _yaw_rotation(character.facing_yaw) @ np.array(
        [sample.x, sample.y, sample.z]
    )
    v = head - position
    dist = float(np.linalg.norm(v))
    if dist < 1e-6:
        raise Degenerate("camera-to-target distance below 1e-6")
    v_hat = v / dist

    tan_half = math.tan(math.radians(fov) / 2.0)
    if abs(sample.px) > SCREEN_SOFT_LIMIT or abs(sample.py) > SCREEN_SOFT_LIMIT:
        raise Unreachable("screen position outside the soft frustum band")
    # camera-space direction through the requested screen point; camera
    # space is (right, down, forward), so flip py into the up component
    w = np.array([sample.px * tan_half, -sample.py * tan_half, 1.0])
    w /= np.linalg.norm(w)
    wx, wy, wz = w

    # pitch solves  wz*sin(p) + wy*cos(p) = v_y  (the right axis has no y)
    r0 = math.hypot(wy, wz)
    if abs(v_hat[1]) > r0:
        raise Unreachable("requested screen position demands pitch outside (-pi/2, pi/2)")
    phase = math.atan2(wy, wz)
    base = math.asin(max(-1.0, min(1.0, v_hat[1] / r0)))
    best = None
    for pitch in (base - phase, math.pi - base - phase):
        pitch = (pitch + math.pi) % (2.0 * math.pi) - math.pi
        if not -math.pi / 2 < pitch < math.pi / 2:
            continue
        c_h = wz * math.cos(pitch) - wy * math.sin(pitch)
        yaw = math.atan2(v_hat[0], v_hat[2]) - math.atan2(-wx, c_h)
        pose = WorldCameraPose(
            position=tuple(position), yaw=yaw % (2.0 * math.pi), pitch=pitch, fov=fov
        )
        try:
            ndc = project_to_ndc(pose, head)
        except Degenerate:
            continue
        err = max(abs(ndc[0] - sample.px), abs(ndc[1] - sample.py))
        if best is None or err < best[0]:
            best = (err, pose)
    if best is None or best[0] > 1e-4:
        raise Unreachable(
            f"no roll-free orientation reaches screen position ({sample.px}, {sample.py})"
        )
    return best[1]


def strip_padding(frames: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    """Drop the trailing frames that exactly repeat the final pose."""
    frames = np.asarray(frames, dtype=float)
    last = frames[-1]
    n = len(frames)
    while n > 1 and np.allclose(frames[n - 2], last, atol=atol, rtol=0.0):
        n -= 1
    return frames[:n]


def _is_linear(values: np.ndarray, tol: float) -> bool:
    """Residual of a straight line through the end points, against ``tol``."""
    n = len(values)
    line = values[0] + (values[-1] - values[0]) * np.linspace(0.0, 1.0, n)
    return float(np.max(np.abs(values - line))) <= tol


# relative tolerance for movement-signature matching, as a fraction of the
# trajectory's motion span
MOVEMENT_TOLERANCE = 0.05


def classify_properties(trajectory: Trajectory, h: float) -> CinematicLabels:
    """Deterministic rule-based labels for a trajectory.

    Padding (exact repeats of the final pose) is stripped before velocity
    classification. Movement is matched against the five parametric motion
    signatures with a tolerance of 5% of the trajectory span; when nothing
    matches, the explicit ``unclassifiable`` label is returned.
    """
    frames = strip_padding(trajectory.frames)
    if len(frames) < 2:
        frames = trajectory.frames[:2] if len(trajectory.frames) >= 2 else None
        if frames is None:
            raise ValueError("need at least 2 frames after padding removal")

    pos = frames[:, :3]
    screen = frames[:, 3:]
    d = np.linalg.norm(pos, axis=1)
    theta = np.unwrap(np.arctan2(pos[:, 0], pos[:, 2]))
    phi0 = math.acos(max(-1.0, min(1.0, pos[0, 1] / d[0])))

    pos_span = float(np.max(np.ptp(pos, axis=0)))
    screen_span = float(np.max(np.ptp(screen, axis=0)))
    ref = max(pos_span, screen_span * d[0])
    tol = MOVEMENT_TOLERANCE * max(ref, 1e-9)
    screen_tol = MOVEMENT_TOLERANCE * max(screen_span, 0.02)
    screen_const = screen_span <= max(0.02, MOVEMENT_TOLERANCE)

    movement = _match_movement(pos, screen, d, theta, tol, screen_tol, screen_const)

    # a static shot is all padding by construction; its duration is the
    # full trajectory, not the stripped length
    effective_len = len(trajectory.frames) if movement == Movement.STATIC else len(frames)
    frame_scale = float(trajectory.meta.get("frame_scale", 1.0))
    return CinematicLabels(
        movement=movement,
        angle=classify_angle(phi0),
        scale_start=classify_scale(float(d[0]), h),
        scale_end=classify_scale(float(d[-1]), h),
        direction_start=classify_direction(float(theta[0]) % (2.0 * math.pi)),
        direction_end=classify_direction(float(theta[-1]) % (2.0 * math.pi)),
        screen_x=classify_screen_x(float(screen[0, 0])),
        screen_y=classify_screen_y(float(screen[0, 1])),
        velocity=classify_velocity(effective_len, frame_scale),
    )


def _match_movement(pos, screen, d, theta, tol, screen_tol, screen_const) -> Movement:
    static_tol = 1e-6 * max(1.0, float(d[0]))
    if float(np.max(np.ptp(pos, axis=0))) <= static_tol and float(
        np.max(np.ptp(screen, axis=0))
    ) <= static_tol:
        return Movement.STATIC

    d_delta = float(d[-1] - d[0])

    # push / pull: constant unit direction, linear distance, fixed framing
    units = pos / d[:, None]
    dir_drift = float(np.max(np.linalg.norm(units - units[0], axis=1)))
    if (
        screen_const
        and dir_drift <= MOVEMENT_TOLERANCE
        and abs(d_delta) > tol
        and _is_linear(d, tol)
    ):
        return Movement.PUSH if d_delta < 0 else Movement.PULL

    # orbit: constant horizontal radius and height, sweeping azimuth
    radius = np.hypot(pos[:, 0], pos[:, 2])
    theta_sweep = float(theta[-1] - theta[0])
    if (
        screen_const
        and float(np.ptp(radius)) <= tol
        and float(np.ptp(pos[:, 1])) <= tol
        and abs(theta_sweep) > 0.05 * math.pi
        and _is_linear(theta, MOVEMENT_TOLERANCE * abs(theta_sweep))
    ):
        return Movement.ORBIT

    # boom: vertical translation coupled with a vertical screen sweep
    if (
        float(np.ptp(pos[:, 0])) <= tol
        and float(np.ptp(pos[:, 2])) <= tol
        and float(np.ptp(pos[:, 1])) > tol
        and _is_linear(pos[:, 1], tol)
        and float(np.ptp(screen[:, 0])) <= screen_tol
        and _is_linear(screen[:, 1], screen_tol)
    ):
        return Movement.BOOM

    # pan: pure forward-axis translation with fixed framing
    if (
        screen_const
        and float(np.ptp(pos[:, 0])) <= tol
        and float(np.ptp(pos[:, 1])) <= tol
        and float(np.ptp(pos[:, 2])) > tol
        and _is_linear(pos[:, 2], tol)
    ):
        return Movement.PAN

    return Movement.UNCLASSIFIABLE
