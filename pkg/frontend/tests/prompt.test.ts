import { describe, expect, it } from "vitest";

import { buildPrompt, canSend, promptSentences } from "../src/prompt";
import { VOCAB } from "./fixtures";

describe("prompt builder", () => {
  it("movement-only selection yields a single sentence", () => {
    const sentences = promptSentences({ movement: "push" }, VOCAB);
    expect(sentences).toEqual(["The camera pushes in to the character."]);
  });

  it("adding a screen property appends exactly one sentence", () => {
    const before = promptSentences({ movement: "orbit" }, VOCAB);
    const after = promptSentences(
      { movement: "orbit", screenX: "left", screenY: "top" },
      VOCAB,
    );
    expect(after.length).toBe(before.length + 1);
    expect(after.slice(0, before.length)).toEqual(before);
    expect(after.at(-1)).toBe("The character is at the top left of the screen.");
  });

  it("clearing all selections disables send", () => {
    expect(canSend({}, VOCAB)).toBe(false);
    expect(canSend({ freeText: "   " }, VOCAB)).toBe(false);
    expect(canSend({ movement: "static" }, VOCAB)).toBe(true);
    expect(canSend({ freeText: "drift upward" }, VOCAB)).toBe(true);
  });

  it("assembles sentences in canonical order with free text last", () => {
    const prompt = buildPrompt(
      {
        velocity: "slow",
        movement: "pull",
        scaleStart: "close",
        scaleEnd: "long",
        angle: "low",
        directionStart: "front",
        directionEnd: "right",
        screenX: "center",
        screenY: "middle",
        freeText: "A gentle retreat.",
      },
      VOCAB,
    );
    expect(prompt).toBe(
      "The camera pulls out from the character. " +
        "The camera shoots the character at low angle. " +
        "The camera switches from front view to right view. " +
        "The character is at the middle center of the screen. " +
        "The camera moves from close shot to long shot. " +
        "The camera moves slowly. " +
        "A gentle retreat.",
    );
  });

  it("single-valued direction and scale collapse to the static phrasing", () => {
    const sentences = promptSentences(
      { directionStart: "back", scaleStart: "medium" },
      VOCAB,
    );
    expect(sentences).toEqual([
      "The camera shoots in back view.",
      "The camera shoots at medium shot.",
    ]);
  });

  it("the preview string is exactly the request prompt", () => {
    const parts = { movement: "boom", velocity: "fast" };
    expect(buildPrompt(parts, VOCAB)).toBe(promptSentences(parts, VOCAB).join(" "));
  });
});
