import math

import pytest
from hypothesis import given, strategies as st

from camdiff.taxonomy import (
    ANGLE_RANGES,
    DIRECTION_ANCHORS,
    SCALE_ORDER,
    SCALE_RANGES,
    SCREEN_X_RANGES,
    SCREEN_Y_RANGES,
    VELOCITY_FRAME_RANGES,
    Angle,
    Direction,
    Movement,
    MOVEMENT_CLASSES,
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
    velocity_frame_range,
)


def test_trainable_classes_exclude_sentinel():
    assert len(MOVEMENT_CLASSES) == 6
    assert Movement.UNCLASSIFIABLE not in MOVEMENT_CLASSES


def test_angle_band_constants():
    assert ANGLE_RANGES[Angle.HIGH] == (0.25 * math.pi, 0.4 * math.pi)
    assert ANGLE_RANGES[Angle.EYE] == (0.4 * math.pi, 0.6 * math.pi)
    assert ANGLE_RANGES[Angle.LOW] == (0.6 * math.pi, 0.75 * math.pi)


def test_scale_band_constants():
    edges = [0.1, 0.2, 0.3, 0.6, 1.2, 2.0, 4.0]
    for scale, (lo, hi) in zip(SCALE_ORDER, zip(edges, edges[1:])):
        assert SCALE_RANGES[scale] == (lo, hi)


def test_direction_anchors_quarter_pi():
    values = list(DIRECTION_ANCHORS.values())
    assert values == [k * 0.25 * math.pi for k in range(8)]


def test_velocity_bands():
    assert VELOCITY_FRAME_RANGES[Velocity.FAST] == (75, 105)
    assert VELOCITY_FRAME_RANGES[Velocity.NORMAL] == (160, 200)
    assert VELOCITY_FRAME_RANGES[Velocity.SLOW] == (240, 300)


@pytest.mark.parametrize(
    "phi,expected",
    [
        (0.3 * math.pi, Angle.HIGH),
        (0.4 * math.pi, Angle.HIGH),
        (0.5 * math.pi, Angle.EYE),
        (0.6 * math.pi, Angle.LOW),
        (0.7 * math.pi, Angle.LOW),
    ],
)
def test_classify_angle(phi, expected):
    assert classify_angle(phi) == expected


@pytest.mark.parametrize(
    "ratio,expected",
    [
        (0.15, Scale.EXTREME_CLOSE),
        (0.25, Scale.CLOSE),
        (0.45, Scale.MEDIUM_CLOSE),
        (0.9, Scale.MEDIUM),
        (1.5, Scale.LONG),
        (3.0, Scale.EXTREME_LONG),
        (0.05, Scale.EXTREME_CLOSE),  # below the smallest bin clamps inward
        (9.0, Scale.EXTREME_LONG),  # above the largest bin clamps inward
    ],
)
def test_classify_scale(ratio, expected):
    assert classify_scale(ratio * 1.7, 1.7) == expected


@pytest.mark.parametrize(
    "theta,expected",
    [
        (0.0, Direction.FRONT),
        (0.05 * math.pi, Direction.FRONT),
        (0.25 * math.pi, Direction.RIGHT_FRONT),
        (math.pi, Direction.BACK),
        (1.75 * math.pi, Direction.LEFT_FRONT),
        (1.99 * math.pi, Direction.FRONT),  # wraps across 2*pi
    ],
)
def test_classify_direction(theta, expected):
    assert classify_direction(theta) == expected


def test_classify_screen_bands():
    assert classify_screen_x(-0.5) == ScreenX.LEFT
    assert classify_screen_x(0.0) == ScreenX.CENTER
    assert classify_screen_x(0.5) == ScreenX.RIGHT
    # screen y grows downward: negative band = top of frame
    assert classify_screen_y(-0.5) == ScreenY.TOP
    assert classify_screen_y(0.0) == ScreenY.MIDDLE
    assert classify_screen_y(0.5) == ScreenY.BOTTOM
    assert SCREEN_X_RANGES[ScreenX.LEFT] == (-0.7, -0.3)
    assert SCREEN_Y_RANGES[ScreenY.TOP] == (-0.7, -0.3)


def test_velocity_frame_range_scaling():
    # [DERIVED] 60/300 scale: fast (75,105) -> (15, 21)
    assert velocity_frame_range(Velocity.FAST, 0.2) == (15, 21)
    assert velocity_frame_range(Velocity.NORMAL, 0.2) == (32, 40)
    assert velocity_frame_range(Velocity.SLOW, 0.2) == (48, 60)
    assert velocity_frame_range(Velocity.SLOW, 1.0) == (240, 300)


def test_classify_velocity_inside_and_nearest():
    assert classify_velocity(90, 1.0) == Velocity.FAST
    assert classify_velocity(180, 1.0) == Velocity.NORMAL
    assert classify_velocity(270, 1.0) == Velocity.SLOW
    # gaps resolve to the nearest band edge
    assert classify_velocity(130, 1.0) == Velocity.FAST
    assert classify_velocity(135, 1.0) in (Velocity.FAST, Velocity.NORMAL)
    assert classify_velocity(220, 1.0) in (Velocity.NORMAL, Velocity.SLOW)  # tie band
    assert classify_velocity(225, 1.0) == Velocity.SLOW


@given(st.floats(min_value=0.0, max_value=2.0 * math.pi, exclude_max=True))
def test_direction_nearest_anchor_property(theta):
    chosen = classify_direction(theta)
    err = abs((theta - DIRECTION_ANCHORS[chosen] + math.pi) % (2 * math.pi) - math.pi)
    for anchor in DIRECTION_ANCHORS.values():
        other = abs((theta - anchor + math.pi) % (2 * math.pi) - math.pi)
        assert err <= other + 1e-12


@given(
    st.sampled_from(list(Velocity)),
    st.floats(min_value=0.05, max_value=1.0),
)
def test_velocity_roundtrip_property(velocity, frame_scale):
    lo, hi = velocity_frame_range(velocity, frame_scale)
    assert 2 <= lo <= hi
    for n in {lo, hi, (lo + hi) // 2}:
        got = classify_velocity(n, frame_scale)
        # the scaled bands can merge at very small scales; the class is
        # correct whenever n lies inside its own band
        glo, ghi = velocity_frame_range(got, frame_scale)
        assert glo <= n <= ghi
