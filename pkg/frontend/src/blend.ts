/** Style-interpolation slider: snaps lambda to detents (0.2 apart by
 * default) and is disabled until two prompts are pinned. */

import type { InterpolateRequest } from "./types";

export interface BlendState {
  promptA?: string;
  promptB?: string;
  lambda: number;
  step: number;
}

export function makeBlend(step = 0.2): BlendState {
  return { lambda: 0, step };
}

export function detents(state: BlendState): number[] {
  const out: number[] = [];
  for (let v = 0; v < 1 - 1e-9; v += state.step) out.push(round(v));
  out.push(1);
  return out;
}

const round = (v: number) => Math.round(v * 1e9) / 1e9;

/** Snap an arbitrary slider value to the nearest detent in [0, 1]. */
export function snap(state: BlendState, value: number): number {
  const clamped = Math.min(1, Math.max(0, value));
  return round(Math.min(1, Math.round(clamped / state.step) * state.step));
}

export function blendReady(state: BlendState): boolean {
  return Boolean(state.promptA?.trim()) && Boolean(state.promptB?.trim());
}

export function blendRequest(state: BlendState, seed: number): InterpolateRequest {
  if (!blendReady(state)) {
    throw new Error("pin two prompts before blending");
  }
  return {
    prompt_a: state.promptA!,
    prompt_b: state.promptB!,
    lambda: state.lambda,
    seed,
  };
}
