"""Cinematographic property taxonomy: enums, numeric ranges, and anchors.

All ranges follow the conventions of the character-centric camera frame:
polar angle ``phi`` is measured from +Y (up), azimuth ``theta`` from +Z
(front) increasing toward +X (character's left side axis).
"""

from __future__ import annotations

import enum
import math


class Movement(str, enum.Enum):
    STATIC = "static"
    PUSH = "push"
    PULL = "pull"
    PAN = "pan"
    BOOM = "boom"
    ORBIT = "orbit"
    # sentinel emitted by the rule-based labeler when no signature matches
    UNCLASSIFIABLE = "unclassifiable"


#: the six trainable movement classes (excludes the labeler sentinel)
MOVEMENT_CLASSES = (
    Movement.STATIC,
    Movement.PUSH,
    Movement.PULL,
    Movement.PAN,
    Movement.BOOM,
    Movement.ORBIT,
)


class Angle(str, enum.Enum):
    HIGH = "high"
    EYE = "eye"
    LOW = "low"


class Scale(str, enum.Enum):
    EXTREME_CLOSE = "extreme close"
    CLOSE = "close"
    MEDIUM_CLOSE = "medium close-up"
    MEDIUM = "medium"
    LONG = "long"
    EXTREME_LONG = "extreme long"


class Direction(str, enum.Enum):
    FRONT = "front"
    RIGHT_FRONT = "right front"
    RIGHT = "right"
    RIGHT_BACK = "right back"
    BACK = "back"
    LEFT_BACK = "left back"
    LEFT = "left"
    LEFT_FRONT = "left front"


class ScreenX(str, enum.Enum):
    LEFT = "left"
    CENTER = "center"
    RIGHT = "right"


class ScreenY(str, enum.Enum):
    TOP = "top"
    MIDDLE = "middle"
    BOTTOM = "bottom"


class Velocity(str, enum.Enum):
    FAST = "fast"
    NORMAL = "normal"
    SLOW = "slow"


# polar-angle bands for shot angle (radians, measured from +Y)
ANGLE_RANGES = {
    Angle.HIGH: (0.25 * math.pi, 0.4 * math.pi),
    Angle.EYE: (0.4 * math.pi, 0.6 * math.pi),
    Angle.LOW: (0.6 * math.pi, 0.75 * math.pi),
}

# shot-scale distance bands in units of character height h
SCALE_RANGES = {
    Scale.EXTREME_CLOSE: (0.1, 0.2),
    Scale.CLOSE: (0.2, 0.3),
    Scale.MEDIUM_CLOSE: (0.3, 0.6),
    Scale.MEDIUM: (0.6, 1.2),
    Scale.LONG: (1.2, 2.0),
    Scale.EXTREME_LONG: (2.0, 4.0),
}

SCALE_ORDER = (
    Scale.EXTREME_CLOSE,
    Scale.CLOSE,
    Scale.MEDIUM_CLOSE,
    Scale.MEDIUM,
    Scale.LONG,
    Scale.EXTREME_LONG,
)

# azimuth anchors at k*0.25pi, Appendix-order preserved
DIRECTION_ANCHORS = {
    Direction.FRONT: 0.0,
    Direction.RIGHT_FRONT: 0.25 * math.pi,
    Direction.RIGHT: 0.5 * math.pi,
    Direction.RIGHT_BACK: 0.75 * math.pi,
    Direction.BACK: math.pi,
    Direction.LEFT_BACK: 1.25 * math.pi,
    Direction.LEFT: 1.5 * math.pi,
    Direction.LEFT_FRONT: 1.75 * math.pi,
}

#: uniform jitter applied around a direction anchor when sampling
DIRECTION_JITTER = 0.05 * math.pi

# normalized screen-position bands; screen y grows downward, so the
# negative band is the top of the frame
SCREEN_X_RANGES = {
    ScreenX.LEFT: (-0.7, -0.3),
    ScreenX.CENTER: (-0.2, 0.2),
    ScreenX.RIGHT: (0.3, 0.7),
}
SCREEN_Y_RANGES = {
    ScreenY.TOP: (-0.7, -0.3),
    ScreenY.MIDDLE: (-0.2, 0.2),
    ScreenY.BOTTOM: (0.3, 0.7),
}

# effective (unpadded) length bands at the reference 300-frame scale, fps 30
VELOCITY_FRAME_RANGES = {
    Velocity.FAST: (75, 105),
    Velocity.NORMAL: (160, 200),
    Velocity.SLOW: (240, 300),
}

#: reference sequence length the velocity bands are defined against
REFERENCE_MAX_LEN = 300


def classify_angle(phi: float) -> Angle:
    if phi <= 0.4 * math.pi:
        return Angle.HIGH
    if phi >= 0.6 * math.pi:
        return Angle.LOW
    return Angle.EYE


def classify_scale(d: float, h: float) -> Scale:
    ratio = d / h
    for scale in SCALE_ORDER:
        lo, hi = SCALE_RANGES[scale]
        if lo <= ratio < hi:
            return scale
    return Scale.EXTREME_CLOSE if ratio < 0.1 else Scale.EXTREME_LONG


def classify_direction(theta: float) -> Direction:
    two_pi = 2.0 * math.pi
    best, best_err = Direction.FRONT, math.inf
    for direction, anchor in DIRECTION_ANCHORS.items():
        err = abs((theta - anchor + math.pi) % two_pi - math.pi)
        if err < best_err:
            best, best_err = direction, err
    return best


def _classify_band(value: float, ranges, order):
    best, best_err = order[0], math.inf
    for name in order:
        lo, hi = ranges[name]
        if lo <= value <= hi:
            return name
        err = min(abs(value - lo), abs(value - hi))
        if err < best_err:
            best, best_err = name, err
    return best


def classify_screen_x(px: float) -> ScreenX:
    return _classify_band(px, SCREEN_X_RANGES, tuple(ScreenX))


def classify_screen_y(py: float) -> ScreenY:
    return _classify_band(py, SCREEN_Y_RANGES, tuple(ScreenY))


def velocity_frame_range(velocity: Velocity, frame_scale: float = 1.0) -> tuple[int, int]:
    """Inclusive frame-count range for a velocity class at a given time scale."""
    lo, hi = VELOCITY_FRAME_RANGES[velocity]
    lo_s = int(math.ceil(lo * frame_scale))
    hi_s = int(math.floor(hi * frame_scale))
    return max(lo_s, 2), max(hi_s, max(lo_s, 2))


def classify_velocity(effective_len: int, frame_scale: float = 1.0) -> Velocity:
    best, best_err = Velocity.NORMAL, math.inf
    for velocity in Velocity:
        lo, hi = velocity_frame_range(velocity, frame_scale)
        if lo <= effective_len <= hi:
            return velocity
        err = min(abs(effective_len - lo), abs(effective_len - hi))
        if err < best_err:
            best, best_err = velocity, err
    return best
