import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from camdiff.camera import (
    CameraSample,
    CharacterFrame,
    CinematicLabels,
    SphericalPose,
    Trajectory,
    WorldCameraPose,
    classify_properties,
    local_to_spherical,
    project_to_ndc,
    resolve_world_pose,
    spherical_to_local,
    strip_padding,
)
from camdiff.errors import Degenerate, ShapeMismatch, Unreachable, ZeroVector
from camdiff.taxonomy import Movement


def test_spherical_to_local_known_value():
    # [DERIVED] theta=0.25pi, phi=0.4pi, d=1:
    # x = sin(0.4pi) sin(0.25pi), y = cos(0.4pi), z = sin(0.4pi) cos(0.25pi)
    x, y, z = spherical_to_local(SphericalPose(0.25 * math.pi, 0.4 * math.pi, 1.0))
    assert x == pytest.approx(0.672498512, abs=1e-6)
    assert y == pytest.approx(0.309016994, abs=1e-6)
    assert z == pytest.approx(0.672498512, abs=1e-6)


def test_spherical_axis_conventions():
    # theta=0 is straight in front (+Z); phi=pi/2 is eye height
    x, y, z = spherical_to_local(SphericalPose(0.0, 0.5 * math.pi, 2.0))
    assert (x, y, z) == pytest.approx((0.0, 0.0, 2.0), abs=1e-12)
    # theta=pi/2 points toward the character's left (+X)
    x, y, z = spherical_to_local(SphericalPose(0.5 * math.pi, 0.5 * math.pi, 2.0))
    assert (x, y, z) == pytest.approx((2.0, 0.0, 0.0), abs=1e-12)
    # phi -> 0 rises toward +Y
    x, y, z = spherical_to_local(SphericalPose(0.0, 1e-3, 2.0))
    assert y == pytest.approx(2.0, abs=1e-5)


def test_local_to_spherical_zero_vector():
    with pytest.raises(ZeroVector):
        local_to_spherical(0.0, 0.0, 0.0)


@given(
    st.floats(min_value=0.0, max_value=2.0 * math.pi, exclude_max=True),
    st.floats(min_value=0.05, max_value=math.pi - 0.05),
    st.floats(min_value=0.1, max_value=10.0),
)
def test_spherical_roundtrip_property(theta, phi, d):
    x, y, z = spherical_to_local(SphericalPose(theta, phi, d))
    back = local_to_spherical(x, y, z)
    assert back.d == pytest.approx(d, rel=1e-9)
    assert back.phi == pytest.approx(phi, abs=1e-9)
    assert abs((back.theta - theta + math.pi) % (2 * math.pi) - math.pi) < 1e-8


def test_camera_sample_invariants():
    with pytest.raises(ValueError):
        CameraSample(0.0, 0.0, 0.0, 0.0, 0.0)  # coincides with head
    with pytest.raises(ValueError):
        CameraSample(1.0, 0.0, 0.0, 2.0, 0.0)  # screen outside soft band
    with pytest.raises(ValueError):
        CameraSample(float("nan"), 0.0, 1.0, 0.0, 0.0)
    s = CameraSample(1.0, 2.0, 3.0, 0.1, -0.1)
    assert np.allclose(s.as_array(), [1, 2, 3, 0.1, -0.1])
    assert CameraSample.from_array(s.as_array()) == s


def test_trajectory_shape_and_serialization():
    with pytest.raises(ShapeMismatch):
        Trajectory(np.zeros((4, 3)))
    t = Trajectory(np.arange(10.0).reshape(2, 5), fps=30.0, meta={"k": 1})
    d = t.to_dict()
    back = Trajectory.from_dict(d)
    assert np.allclose(back.frames, t.frames)
    assert back.fps == 30.0 and back.meta == {"k": 1}
    # serialization keeps 9 significant digits
    t2 = Trajectory(np.full((1, 5), 1.0 / 3.0))
    assert t2.to_dict()["frames"][0][0] == pytest.approx(1 / 3, abs=1e-9)


def test_world_pose_roll_free():
    with pytest.raises(ValueError):
        WorldCameraPose((0, 0, 0), 0.0, 0.0, roll=0.1)
    with pytest.raises(ValueError):
        WorldCameraPose((0, 0, 0), 0.0, math.pi / 2)


def test_project_to_ndc_center():
    # camera 2m behind the origin looking forward: origin projects to center
    pose = WorldCameraPose(position=(0.0, 0.0, -2.0), yaw=0.0, pitch=0.0)
    px, py = project_to_ndc(pose, (0.0, 0.0, 0.0))
    assert (px, py) == pytest.approx((0.0, 0.0), abs=1e-12)


def test_project_to_ndc_offsets():
    # [DERIVED] point 1m toward world +X at depth 2 with fov 90:
    # screen right axis is -X for a camera at yaw 0, so px = -0.5
    pose = WorldCameraPose(position=(0.0, 0.0, -2.0), yaw=0.0, pitch=0.0, fov=90.0)
    px, py = project_to_ndc(pose, (1.0, 0.0, 0.0))
    assert px == pytest.approx(-0.5, abs=1e-9)
    # point 1m up at depth 2 with fov 90 -> py = -0.5 (screen y grows down)
    px, py = project_to_ndc(pose, (0.0, 1.0, 0.0))
    assert py == pytest.approx(-0.5, abs=1e-9)


def test_project_behind_camera():
    pose = WorldCameraPose(position=(0.0, 0.0, -2.0), yaw=0.0, pitch=0.0)
    with pytest.raises(Degenerate):
        project_to_ndc(pose, (0.0, 0.0, -5.0))


def test_resolve_world_pose_reprojection_exact():
    character = CharacterFrame((1.0, 1.6, -2.0), facing_yaw=0.7, height=1.7)
    sample = CameraSample(0.4, 0.3, 2.0, 0.35, -0.25)
    pose = resolve_world_pose(sample, character)
    px, py = project_to_ndc(pose, character.head_position)
    assert (px, py) == pytest.approx((sample.px, sample.py), abs=1e-6)
    assert pose.roll == 0.0


@settings(max_examples=300, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=2 * math.pi, exclude_max=True),
    st.floats(min_value=0.25 * math.pi, max_value=0.75 * math.pi),
    st.floats(min_value=0.2, max_value=6.0),
    st.floats(min_value=-0.7, max_value=0.7),
    st.floats(min_value=-0.7, max_value=0.7),
    st.floats(min_value=-math.pi, max_value=math.pi),
)
def test_resolve_world_pose_fuzz(theta, phi, d, px, py, facing):
    x, y, z = spherical_to_local(SphericalPose(theta, phi, d))
    sample = CameraSample(x, y, z, px, py)
    character = CharacterFrame((0.3, 1.5, -1.2), facing_yaw=facing, height=1.7)
    pose = resolve_world_pose(sample, character)
    got = project_to_ndc(pose, character.head_position)
    assert max(abs(got[0] - px), abs(got[1] - py)) < 1e-4


def test_resolve_degenerate_distance():
    character = CharacterFrame((0.0, 0.0, 0.0), 0.0, 1.7)
    sample = CameraSample(1e-9, 1e-9, 1e-9, 0.0, 0.0)
    with pytest.raises(Degenerate):
        resolve_world_pose(sample, character)


def test_strip_padding():
    frames = np.vstack([np.arange(5.0), np.arange(5.0) + 1, np.arange(5.0) + 1])
    assert len(strip_padding(frames)) == 2
    assert len(strip_padding(frames[:2])) == 2
    # all-constant collapses to one frame
    assert len(strip_padding(np.tile(np.arange(5.0), (6, 1)))) == 1


def _orbit_frames(n=40, d=2.0, phi=0.5 * math.pi, sweep=0.5 * math.pi):
    theta = np.linspace(0.0, sweep, n)
    r = d * math.sin(phi)
    frames = np.zeros((n, 5))
    frames[:, 0] = r * np.sin(theta)
    frames[:, 1] = d * math.cos(phi)
    frames[:, 2] = r * np.cos(theta)
    return frames


def test_classify_movement_signatures():
    # static
    t = Trajectory(np.tile([0.0, 0.0, 2.0, 0.0, 0.0], (30, 1)))
    assert classify_properties(t, 1.7).movement == Movement.STATIC
    # push: position scales down along a fixed ray
    u = np.linspace(1.0, 0.4, 30)
    frames = np.zeros((30, 5))
    frames[:, 2] = 3.0 * u
    assert classify_properties(Trajectory(frames), 1.7).movement == Movement.PUSH
    # pull
    frames[:, 2] = 3.0 * u[::-1]
    assert classify_properties(Trajectory(frames), 1.7).movement == Movement.PULL
    # orbit
    assert (
        classify_properties(Trajectory(_orbit_frames()), 1.7).movement
        == Movement.ORBIT
    )
    # boom: y and py linear, coupled
    frames = np.tile([0.5, 0.0, 2.0, 0.0, -0.3], (30, 1))
    py = np.linspace(-0.3, 0.4, 30)
    d0 = math.sqrt(0.5**2 + 2.0**2)
    frames[:, 4] = py
    frames[:, 1] = d0 * (py - py[0])
    assert classify_properties(Trajectory(frames), 1.7).movement == Movement.BOOM
    # pan: z sweeps linearly, x/y fixed
    frames = np.tile([1.5, 0.2, 1.0, 0.0, 0.0], (30, 1))
    frames[:, 2] = np.linspace(1.0, -1.0, 30)
    assert classify_properties(Trajectory(frames), 1.7).movement == Movement.PAN


def test_classify_unclassifiable():
    rng = np.random.default_rng(0)
    frames = rng.normal(size=(30, 5)) * 0.5 + np.array([0, 0, 3, 0, 0])
    frames[:, 3:] = np.clip(frames[:, 3:], -1, 1)
    labels = classify_properties(Trajectory(frames), 1.7)
    assert labels.movement == Movement.UNCLASSIFIABLE


def test_labels_roundtrip_dict():
    t = Trajectory(_orbit_frames())
    labels = classify_properties(t, 1.7)
    assert CinematicLabels.from_dict(labels.to_dict()) == labels
