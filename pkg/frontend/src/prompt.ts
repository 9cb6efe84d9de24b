/** Prompt assembly from property selections, in the canonical sentence
 * order the service's template bank uses:
 * movement, angle, direction, screen, scale, velocity, then free text. */

import type { Vocab } from "./types";

export interface PromptParts {
  movement?: string; // movement name, e.g. "push"
  angle?: string; // "high" | "eye" | "low"
  directionStart?: string;
  directionEnd?: string;
  screenX?: string;
  screenY?: string;
  scaleStart?: string;
  scaleEnd?: string;
  velocity?: string;
  freeText?: string;
}

export function movementSentence(vocab: Vocab, movement: string): string {
  const bank = vocab.templates.movement[movement];
  if (!bank || bank.length === 0) {
    throw new Error(`unknown movement: ${movement}`);
  }
  return bank[0];
}

export function angleSentence(vocab: Vocab, angle: string): string {
  const name = vocab.templates.angle[angle];
  if (!name) throw new Error(`unknown angle: ${angle}`);
  return `The camera shoots the character at ${name}.`;
}

export function directionSentence(start: string, end: string): string {
  if (start === end) return `The camera shoots in ${start} view.`;
  return `The camera switches from ${start} view to ${end} view.`;
}

export function screenSentence(sx: string, sy: string): string {
  return `The character is at the ${sy} ${sx} of the screen.`;
}

export function scaleSentence(vocab: Vocab, start: string, end: string): string {
  const a = vocab.templates.scale[start];
  const b = vocab.templates.scale[end];
  if (!a || !b) throw new Error(`unknown scale: ${start} / ${end}`);
  if (start === end) return `The camera shoots at ${a}.`;
  return `The camera moves from ${a} to ${b}.`;
}

export function velocitySentence(vocab: Vocab, velocity: string): string {
  const sentence = vocab.templates.velocity[velocity];
  if (!sentence) throw new Error(`unknown velocity: ${velocity}`);
  return sentence;
}

/** One sentence per selected property, canonical order preserved. */
export function promptSentences(parts: PromptParts, vocab: Vocab): string[] {
  const out: string[] = [];
  if (parts.movement) out.push(movementSentence(vocab, parts.movement));
  if (parts.angle) out.push(angleSentence(vocab, parts.angle));
  if (parts.directionStart) {
    out.push(
      directionSentence(parts.directionStart, parts.directionEnd ?? parts.directionStart),
    );
  }
  if (parts.screenX && parts.screenY) {
    out.push(screenSentence(parts.screenX, parts.screenY));
  }
  if (parts.scaleStart) {
    out.push(scaleSentence(vocab, parts.scaleStart, parts.scaleEnd ?? parts.scaleStart));
  }
  if (parts.velocity) out.push(velocitySentence(vocab, parts.velocity));
  const free = parts.freeText?.trim();
  if (free) out.push(free);
  return out;
}

/** The exact string sent to the service (live preview shows this value). */
export function buildPrompt(parts: PromptParts, vocab: Vocab): string {
  return promptSentences(parts, vocab).join(" ");
}

/** Send is disabled whenever the assembled prompt is empty. */
export function canSend(parts: PromptParts, vocab: Vocab): boolean {
  return buildPrompt(parts, vocab).length > 0;
}
