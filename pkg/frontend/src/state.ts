/** Session state: append-only history of (request, response, seed) turns,
 * current prompt parts, keyframe handles, active trajectory, and the
 * interpolation pair.  The UI never mutates trajectory data; every entry
 * keeps the exact request so it can be replayed bit-identically. */

import type { KeyframeState } from "./keyframes";
import type { PromptParts } from "./prompt";
import type {
  GenerateRequest,
  InterpolateRequest,
  SequenceRequest,
  TrajectoryResponse,
} from "./types";

export type Endpoint = "generate" | "interpolate" | "sequence";
export type AnyRequest = GenerateRequest | InterpolateRequest | SequenceRequest;

export interface HistoryEntry {
  readonly index: number;
  readonly endpoint: Endpoint;
  readonly request: AnyRequest;
  readonly response: TrajectoryResponse;
  readonly seed: number;
}

export interface SessionState {
  history: readonly HistoryEntry[];
  parts: PromptParts;
  keyframes: KeyframeState;
  active?: TrajectoryResponse;
  blend: { promptA?: string; promptB?: string; lambda: number };
}

export function initialState(): SessionState {
  return {
    history: [],
    parts: {},
    keyframes: {},
    blend: { lambda: 0 },
  };
}

const deepFreeze = <T>(value: T): T => {
  if (value && typeof value === "object" && !Object.isFrozen(value)) {
    Object.freeze(value);
    for (const key of Object.keys(value)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
  }
  return value;
};

/** Appends a completed turn; existing entries are never modified. */
export function appendHistory(
  state: SessionState,
  endpoint: Endpoint,
  request: AnyRequest,
  response: TrajectoryResponse,
): HistoryEntry {
  const entry = deepFreeze({
    index: state.history.length,
    endpoint,
    request: structuredClone(request) as AnyRequest,
    response,
    seed: response.seed,
  });
  state.history = Object.freeze([...state.history, entry]);
  state.active = response;
  return entry;
}

/** The exact request to re-issue for a history entry, seed pinned. */
export function replayRequest(entry: HistoryEntry): AnyRequest {
  const request = structuredClone(entry.request) as AnyRequest;
  request.seed = entry.seed;
  return request;
}
