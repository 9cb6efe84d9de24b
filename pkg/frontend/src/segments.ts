/** Long-sequence builder: segment cards that map 1:1 to the service's
 * SequencePlan JSON. */

import type { KeyframePair, SegmentJSON, SequenceRequest } from "./types";

export interface SegmentCard {
  prompt: string;
  frames: number;
  keyframes?: KeyframePair;
}

export interface SequenceOptions {
  transitionSteps?: number;
  transitionFrames?: number;
  omega?: number;
  seed?: number;
  steps?: number;
}

export function cardToJSON(card: SegmentCard): SegmentJSON {
  const out: SegmentJSON = { prompt: card.prompt, frames: card.frames };
  if (card.keyframes) out.keyframes = card.keyframes;
  return out;
}

export function cardFromJSON(json: SegmentJSON): SegmentCard {
  const card: SegmentCard = { prompt: json.prompt, frames: json.frames };
  if (json.keyframes) card.keyframes = json.keyframes;
  return card;
}

export function toSequenceRequest(
  cards: SegmentCard[],
  options: SequenceOptions = {},
): SequenceRequest {
  if (cards.length === 0) {
    throw new Error("a sequence needs at least one segment");
  }
  const request: SequenceRequest = { segments: cards.map(cardToJSON) };
  if (options.transitionSteps !== undefined) request.transition_steps = options.transitionSteps;
  if (options.transitionFrames !== undefined) request.transition_frames = options.transitionFrames;
  if (options.omega !== undefined) request.omega = options.omega;
  if (options.seed !== undefined) request.seed = options.seed;
  if (options.steps !== undefined) request.steps = options.steps;
  return request;
}
