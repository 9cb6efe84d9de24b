"""Prompt template bank for cinematographic properties.

Every property renders to exactly one sentence; the movement sentence is
drawn from a synonym bank. Sentence order in a full prompt is fixed
(movement, angle, direction, screen, scale, velocity) so full prompt
strings are canonical cache keys.
"""

from __future__ import annotations

import numpy as np

from .camera import CinematicLabels
from .taxonomy import Angle, Direction, Movement, Scale, ScreenX, ScreenY, Velocity

MOVEMENT_SYNONYMS: dict[Movement, list[str]] = {
    Movement.STATIC: [
        "The camera is static.",
        "The camera remains still.",
    ],
    Movement.PUSH: [
        "The camera pushes in to the character.",
        "The camera moves towards the character.",
        "The camera gets closer to the character.",
    ],
    Movement.PULL: [
        "The camera pulls out from the character.",
        "The camera moves away from the character.",
    ],
    Movement.PAN: [
        "The camera pans to the character.",
        "The camera pans across the scene.",
    ],
    Movement.BOOM: [
        "The camera booms vertically.",
        "The camera moves vertically.",
    ],
    Movement.ORBIT: [
        "The camera rotates around the character.",
        "The camera circles around the character.",
    ],
}

BOOM_UP_SYNONYMS = ["The camera booms up.", "The camera rises up."]
BOOM_DOWN_SYNONYMS = ["The camera booms down.", "The camera lowers down."]

#: static shots seen from the side or back read as tracking shots
TRACKING_SENTENCE = "The camera tracks the character."
TRACKING_DIRECTIONS = {
    Direction.LEFT,
    Direction.RIGHT,
    Direction.BACK,
    Direction.LEFT_BACK,
    Direction.RIGHT_BACK,
}

ANGLE_NAMES = {
    Angle.HIGH: "high angle",
    Angle.EYE: "eye level",
    Angle.LOW: "low angle",
}

SCALE_NAMES = {
    Scale.EXTREME_CLOSE: "extreme close shot",
    Scale.CLOSE: "close shot",
    Scale.MEDIUM_CLOSE: "medium close-up shot",
    Scale.MEDIUM: "medium shot",
    Scale.LONG: "long shot",
    Scale.EXTREME_LONG: "extreme long shot",
}

VELOCITY_SENTENCES = {
    Velocity.FAST: "The camera moves fast.",
    Velocity.NORMAL: "The camera moves at normal speed.",
    Velocity.SLOW: "The camera moves slowly.",
}


def movement_sentences(labels: CinematicLabels, boom_up: bool | None = None) -> list[str]:
    """All acceptable movement phrasings for the given labels."""
    if labels.movement == Movement.BOOM and boom_up is not None:
        bank = list(BOOM_UP_SYNONYMS if boom_up else BOOM_DOWN_SYNONYMS)
        bank += MOVEMENT_SYNONYMS[Movement.BOOM]
        return bank
    bank = list(MOVEMENT_SYNONYMS[labels.movement])
    if (
        labels.movement == Movement.STATIC
        and labels.direction_start in TRACKING_DIRECTIONS
    ):
        bank.append(TRACKING_SENTENCE)
    return bank


def angle_sentence(angle: Angle) -> str:
    return f"The camera shoots the character at {ANGLE_NAMES[angle]}."


def direction_sentence(start: Direction, end: Direction) -> str:
    if start == end:
        return f"The camera shoots in {start.value} view."
    return f"The camera switches from {start.value} view to {end.value} view."


def screen_sentence(sx: ScreenX, sy: ScreenY) -> str:
    return f"The character is at the {sy.value} {sx.value} of the screen."


def scale_sentence(start: Scale, end: Scale) -> str:
    if start == end:
        return f"The camera shoots at {SCALE_NAMES[start]}."
    return f"The camera moves from {SCALE_NAMES[start]} to {SCALE_NAMES[end]}."


def render_prompts(
    labels: CinematicLabels,
    boom_up: bool | None = None,
    rng: np.random.Generator | None = None,
) -> list[str]:
    """One sentence per property in canonical order.

    Without an rng the first (canonical) movement synonym is used, which
    keeps the full prompt a stable cache key; with an rng the movement
    sentence is drawn uniformly from its synonym bank.
    """
    bank = movement_sentences(labels, boom_up=boom_up)
    movement = bank[0] if rng is None else bank[int(rng.integers(len(bank)))]
    return [
        movement,
        angle_sentence(labels.angle),
        direction_sentence(labels.direction_start, labels.direction_end),
        screen_sentence(labels.screen_x, labels.screen_y),
        scale_sentence(labels.scale_start, labels.scale_end),
        VELOCITY_SENTENCES[labels.velocity],
    ]


def full_prompt(labels: CinematicLabels, boom_up: bool | None = None) -> str:
    """Canonical single-string prompt for a label set."""
    return " ".join(render_prompts(labels, boom_up=boom_up))


def augment_prompt_subset(rng_seed: int, sentences: list[str]) -> list[str]:
    """Uniformly pick a subset size in 1..K, then a uniform subset of that
    size, preserving sentence order. Deterministic under the seed."""
    if not sentences:
        raise ValueError("cannot augment an empty sentence list")
    rng = np.random.default_rng(rng_seed)
    k = int(rng.integers(1, len(sentences) + 1))
    idx = sorted(rng.choice(len(sentences), size=k, replace=False).tolist())
    return [sentences[i] for i in idx]
