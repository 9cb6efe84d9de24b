/** Trajectory viewer: projects camera paths from the character frame
 * (left-handed, X = character's left, Y = up, Z = forward) onto an SVG
 * canvas, with per-frame frusta at intervals, a mannequin proxy at the
 * origin facing +Z, and a framing panel driven by the scrubber.
 *
 * All geometry here is presentation only — trajectory data is used
 * read-only and never modified. */

import type { Pose, TrajectoryJSON } from "./types";

export interface ViewConfig {
  width: number;
  height: number;
  yaw: number; // rotation about +Y, radians
  pitch: number; // rotation about the screen-horizontal axis, radians
  scale: number; // pixels per world unit
}

export const DEFAULT_VIEW: ViewConfig = {
  width: 480,
  height: 360,
  yaw: Math.PI / 6,
  pitch: Math.PI / 8,
  scale: 60,
};

export interface Point2 {
  x: number;
  y: number;
}

/** Orthographic projection after yaw/pitch; SVG y grows downward. */
export function project(p: [number, number, number], view: ViewConfig): Point2 {
  const [x, y, z] = p;
  const cy = Math.cos(view.yaw);
  const sy = Math.sin(view.yaw);
  // world X points left, so screen-right is -X before the yaw
  const rx = -x * cy + z * sy;
  const rz = x * sy + z * cy;
  const cp = Math.cos(view.pitch);
  const sp = Math.sin(view.pitch);
  const ry = y * cp - rz * sp;
  return {
    x: view.width / 2 + rx * view.scale,
    y: view.height / 2 - ry * view.scale,
  };
}

/** SVG polyline points string for the camera path. */
export function pathPoints(frames: number[][], view: ViewConfig): string {
  return frames
    .map((f) => {
      const { x, y } = project([f[0], f[1], f[2]], view);
      return `${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(" ");
}

const norm = (v: [number, number, number]): [number, number, number] => {
  const n = Math.hypot(...v) || 1;
  return [v[0] / n, v[1] / n, v[2] / n];
};

/** Small wedge per sampled frame, pointing from the camera toward the
 * character's head; one wedge every `interval` frames. */
export function frustumWedges(
  frames: number[][],
  view: ViewConfig,
  interval = 10,
  headY = 0,
  size = 0.25,
): string[] {
  const wedges: string[] = [];
  for (let i = 0; i < frames.length; i += interval) {
    const [x, y, z] = frames[i];
    const dir = norm([-x, headY - y, -z]);
    // a horizontal-ish perpendicular for the wedge base
    const side = norm([dir[2], 0, -dir[0]]);
    const apex: [number, number, number] = [x, y, z];
    const baseA: [number, number, number] = [
      x + (dir[0] + side[0] * 0.5) * size,
      y + dir[1] * size,
      z + (dir[2] + side[2] * 0.5) * size,
    ];
    const baseB: [number, number, number] = [
      x + (dir[0] - side[0] * 0.5) * size,
      y + dir[1] * size,
      z + (dir[2] - side[2] * 0.5) * size,
    ];
    const points = [apex, baseA, baseB]
      .map((p) => project(p, view))
      .map((q) => `${q.x.toFixed(2)},${q.y.toFixed(2)}`)
      .join(" ");
    wedges.push(points);
  }
  return wedges;
}

/** Mannequin at the origin facing +Z: body, head, and a facing tick. */
export function characterProxySegments(
  view: ViewConfig,
  height = 1.7,
): Array<[Point2, Point2]> {
  const segments: Array<[[number, number, number], [number, number, number]]> = [
    [[0, -height * 0.9, 0], [0, 0, 0]], // body: feet to eye level
    [[0, 0, 0], [0, height * 0.1, 0]], // head
    [[-0.25, -height * 0.5, 0], [0.25, -height * 0.5, 0]], // arms
    [[0, -height * 0.3, 0], [0, -height * 0.3, 0.4]], // facing tick toward +Z
  ];
  return segments.map(([a, b]) => [project(a, view), project(b, view)]);
}

/** Clamp the scrubber to the trajectory's frame range. */
export function clampScrub(index: number, frameCount: number): number {
  if (frameCount <= 0) return 0;
  return Math.min(frameCount - 1, Math.max(0, Math.round(index)));
}

/** Head position inside the framing panel for the scrubbed frame: the
 * pose's screen offset directly (py already grows downward). */
export function framingMarker(pose: number[] | Pose): Point2 {
  return { x: pose[3], y: pose[4] };
}

export const OVERLAY_COLORS = [
  "#2f6fed",
  "#e5484d",
  "#30a46c",
  "#f5a524",
  "#8e4ec6",
  "#12a594",
];

export function overlayColor(index: number): string {
  return OVERLAY_COLORS[index % OVERLAY_COLORS.length];
}

const SVG_NS = "http://www.w3.org/2000/svg";

export interface Overlay {
  trajectory: TrajectoryJSON;
  label: string; // e.g. "seed 3"
}

/** Draws the full scene into an <svg> element.  An empty overlay list
 * yields just the character proxy — never a crash. */
export function renderScene(
  svg: SVGSVGElement,
  overlays: Overlay[],
  view: ViewConfig = DEFAULT_VIEW,
  frustumInterval = 10,
): void {
  svg.innerHTML = "";
  svg.setAttribute("viewBox", `0 0 ${view.width} ${view.height}`);

  for (const [a, b] of characterProxySegments(view)) {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", a.x.toFixed(2));
    line.setAttribute("y1", a.y.toFixed(2));
    line.setAttribute("x2", b.x.toFixed(2));
    line.setAttribute("y2", b.y.toFixed(2));
    line.setAttribute("class", "proxy");
    line.setAttribute("stroke", "#555");
    svg.appendChild(line);
  }

  overlays.forEach((overlay, i) => {
    const frames = overlay.trajectory.frames;
    if (frames.length === 0) return;
    const color = overlayColor(i);
    const path = document.createElementNS(SVG_NS, "polyline");
    path.setAttribute("points", pathPoints(frames, view));
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", color);
    path.setAttribute("class", "trajectory");
    path.setAttribute("data-label", overlay.label);
    svg.appendChild(path);
    for (const wedge of frustumWedges(frames, view, frustumInterval)) {
      const poly = document.createElementNS(SVG_NS, "polygon");
      poly.setAttribute("points", wedge);
      poly.setAttribute("fill", color);
      poly.setAttribute("fill-opacity", "0.4");
      poly.setAttribute("class", "frustum");
      svg.appendChild(poly);
    }
  });
}
