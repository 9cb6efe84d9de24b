/** Start/end keyframe handles, editable numerically or via the gizmo.
 *
 * Poses are 5-vectors (x, y, z, px, py) in the character frame:
 * left-handed, X = character's left, Y = up, Z = forward; y is measured
 * from eye level; screen py grows downward.  The gizmo exposes the same
 * pose in spherical terms (distance, azimuth from +Z toward +X, polar
 * from +Y) plus the screen offset.
 */

import type { KeyframePair, Pose } from "./types";

export interface GizmoPose {
  distance: number;
  azimuth: number; // radians, 0 = in front of the character
  polar: number; // radians from +Y, pi/2 = eye level
  px: number;
  py: number;
}

export interface KeyframeState {
  start?: Pose;
  end?: Pose;
}

/** Preset: directly in front at eye level, two meters out. */
export function frontEyeLevel(distance = 2): Pose {
  return [0, 0, distance, 0, 0];
}

export function gizmoToPose(g: GizmoPose): Pose {
  const x = g.distance * Math.sin(g.polar) * Math.sin(g.azimuth);
  const y = g.distance * Math.cos(g.polar);
  const z = g.distance * Math.sin(g.polar) * Math.cos(g.azimuth);
  return [x, y, z, g.px, g.py];
}

export function poseToGizmo(pose: Pose): GizmoPose {
  const [x, y, z, px, py] = pose;
  const distance = Math.hypot(x, y, z);
  if (distance === 0) {
    throw new Error("camera position coincides with the character");
  }
  return {
    distance,
    azimuth: Math.atan2(x, z),
    polar: Math.acos(Math.min(1, Math.max(-1, y / distance))),
    px,
    py,
  };
}

/** The 2x5 request block, or undefined when either handle is unset so the
 * request omits keyframes entirely. */
export function toRequestBlock(state: KeyframeState): KeyframePair | undefined {
  if (!state.start || !state.end) return undefined;
  return { start: [...state.start], end: [...state.end] };
}
