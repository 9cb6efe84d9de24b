/** Test doubles: a vocabulary snapshot matching the service's template
 * bank, and a deterministic in-memory mock of the HTTP API so replay and
 * blend identities can be asserted bit-for-bit without a server. */

import type { FetchLike } from "../src/api";
import type { TrajectoryResponse, Vocab } from "../src/types";

export const VOCAB: Vocab = {
  api_version: 1,
  movements: ["static", "push", "pull", "pan", "boom", "orbit"],
  angles: ["high", "eye", "low"],
  scales: ["extreme close", "close", "medium close-up", "medium", "long", "extreme long"],
  directions: [
    "front", "right front", "right", "right back",
    "back", "left back", "left", "left front",
  ],
  screen_x: ["left", "center", "right"],
  screen_y: ["top", "middle", "bottom"],
  velocities: ["fast", "normal", "slow"],
  templates: {
    movement: {
      static: ["The camera is static.", "The camera remains still."],
      push: ["The camera pushes in to the character."],
      pull: ["The camera pulls out from the character."],
      pan: ["The camera pans to the character."],
      boom: ["The camera booms vertically."],
      orbit: ["The camera rotates around the character."],
    },
    boom_up: ["The camera booms up."],
    boom_down: ["The camera booms down."],
    angle: { high: "high angle", eye: "eye level", low: "low angle" },
    scale: {
      "extreme close": "extreme close shot",
      close: "close shot",
      "medium close-up": "medium close-up shot",
      medium: "medium shot",
      long: "long shot",
      "extreme long": "extreme long shot",
    },
    velocity: {
      fast: "The camera moves fast.",
      normal: "The camera moves at normal speed.",
      slow: "The camera moves slowly.",
    },
  },
};

/** FNV-1a string hash, scaled into a small float. */
const hash = (s: string): number => {
  let h = 0x811c9dc5;
  for (let i = 0; i < s.length; i++) {
    h ^= s.charCodeAt(i);
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return (h % 10_000) / 10_000;
};

const trajectory = (value: number, seed: number, frames: number): TrajectoryResponse => ({
  api_version: 1,
  trajectory: {
    fps: 30,
    frames: Array.from({ length: frames }, (_, i) => [
      Math.sin(value * 7 + i * 0.1 + seed),
      Math.cos(value * 3 + i * 0.1),
      2 + value + seed * 0.01,
      0,
      0,
    ]),
    meta: {},
  },
  labels: {
    movement: "push", angle: "eye",
    scale_start: "medium", scale_end: "close",
    direction_start: "front", direction_end: "front",
    screen_x: "center", screen_y: "middle", velocity: "normal",
  },
  seed,
  omega: 1,
});

export interface MockLogEntry {
  path: string;
  body: Record<string, unknown>;
}

/** Deterministic fetch: generation depends only on (prompt, seed); the
 * interpolation embedding is the affine mix of the two prompt hashes, so
 * lambda=0 reproduces prompt_a's generation exactly. */
export function mockFetch(log: MockLogEntry[] = []): FetchLike {
  return async (input, init) => {
    if (init?.signal?.aborted) {
      throw new DOMException("aborted", "AbortError");
    }
    const json = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), {
        status,
        headers: { "Content-Type": "application/json" },
      });
    if (input.endsWith("/healthz")) return json({ ready: true, checkpoint: "ckpt" });
    if (input.endsWith("/api/vocab")) return json(VOCAB);
    const body = JSON.parse(String(init?.body ?? "{}")) as Record<string, unknown>;
    log.push({ path: input, body });
    const seed = Number(body.seed ?? 0);
    if (input.endsWith("/api/generate")) {
      const prompt = String(body.prompt ?? "");
      if (!prompt) return json({ detail: "empty prompt" }, 400);
      return json(trajectory(hash(prompt), seed, 60));
    }
    if (input.endsWith("/api/interpolate")) {
      const lam = Number(body.lambda ?? 0);
      const value =
        (1 - lam) * hash(String(body.prompt_a)) + lam * hash(String(body.prompt_b));
      return json({ ...trajectory(value, seed, 60), lambda: lam });
    }
    if (input.endsWith("/api/sequence")) {
      const segments = body.segments as Array<{ prompt: string; frames: number }>;
      const total = segments.reduce((n, s) => n + s.frames, 0);
      return json(trajectory(hash(segments.map((s) => s.prompt).join("|")), seed, total));
    }
    return json({ detail: "not found" }, 404);
  };
}
