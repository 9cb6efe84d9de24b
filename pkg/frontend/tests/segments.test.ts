import { describe, expect, it } from "vitest";

import { cardFromJSON, cardToJSON, toSequenceRequest } from "../src/segments";
import type { SegmentCard } from "../src/segments";

describe("segment cards", () => {
  it("maps cards 1:1 to sequence-plan JSON", () => {
    const cards: SegmentCard[] = [
      { prompt: "The camera pushes in to the character.", frames: 40 },
      {
        prompt: "The camera rotates around the character.",
        frames: 60,
        keyframes: { start: [0, 0, 2, 0, 0], end: [2, 0, 0, 0, 0] },
      },
    ];
    const request = toSequenceRequest(cards, {
      transitionSteps: 10,
      transitionFrames: 30,
      seed: 3,
    });
    expect(request).toEqual({
      segments: [
        { prompt: "The camera pushes in to the character.", frames: 40 },
        {
          prompt: "The camera rotates around the character.",
          frames: 60,
          keyframes: { start: [0, 0, 2, 0, 0], end: [2, 0, 0, 0, 0] },
        },
      ],
      transition_steps: 10,
      transition_frames: 30,
      seed: 3,
    });
  });

  it("omits the keyframe chip when unset and round-trips through JSON", () => {
    const card: SegmentCard = { prompt: "The camera is static.", frames: 20 };
    const json = cardToJSON(card);
    expect("keyframes" in json).toBe(false);
    expect(cardFromJSON(json)).toEqual(card);
  });

  it("rejects an empty plan", () => {
    expect(() => toSequenceRequest([])).toThrow();
  });

  it("leaves optional plan settings out when not provided", () => {
    const request = toSequenceRequest([{ prompt: "p", frames: 10 }]);
    expect(request).toEqual({ segments: [{ prompt: "p", frames: 10 }] });
  });
});
