/** Shared request/response types for the camera-motion service API. */

export type Pose = [number, number, number, number, number]; // x, y, z, px, py

export interface KeyframePair {
  start: Pose;
  end: Pose;
}

export interface GenerateRequest {
  prompt: string;
  keyframes?: KeyframePair;
  omega?: number;
  length?: number;
  seed?: number;
  steps?: number;
  height?: number;
}

export interface InterpolateRequest {
  prompt_a: string;
  prompt_b: string;
  lambda: number;
  keyframes?: KeyframePair;
  omega?: number;
  seed?: number;
  steps?: number;
}

export interface SegmentJSON {
  prompt: string;
  frames: number;
  keyframes?: KeyframePair;
}

export interface SequenceRequest {
  segments: SegmentJSON[];
  transition_steps?: number;
  transition_frames?: number;
  omega?: number;
  seed?: number;
  steps?: number;
}

export interface TrajectoryJSON {
  fps: number;
  frames: number[][];
  meta: Record<string, unknown>;
}

export interface Labels {
  movement: string;
  angle: string;
  scale_start: string;
  scale_end: string;
  direction_start: string;
  direction_end: string;
  screen_x: string;
  screen_y: string;
  velocity: string;
}

export interface TrajectoryResponse {
  api_version: number;
  trajectory: TrajectoryJSON;
  labels: Labels;
  seed: number;
  omega: number;
  lambda?: number;
}

export interface Vocab {
  api_version: number;
  movements: string[];
  angles: string[];
  scales: string[];
  directions: string[];
  screen_x: string[];
  screen_y: string[];
  velocities: string[];
  templates: {
    movement: Record<string, string[]>;
    boom_up: string[];
    boom_down: string[];
    angle: Record<string, string>;
    scale: Record<string, string>;
    velocity: Record<string, string>;
  };
}
