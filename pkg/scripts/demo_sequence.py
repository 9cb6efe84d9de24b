#!/usr/bin/env python3
"""Generate a multi-segment camera sequence with a style transition and
print a per-segment summary.

Usage:
  python scripts/demo_sequence.py --ckpt CKPT [--out seq.json] [--steps 50]
"""

import argparse
import json
from pathlib import Path

import numpy as np

from camdiff.camera import classify_properties
from camdiff.composer import SegmentSpec, SequencePlan, generate_long_sequence
from camdiff.model import SamplerConfig
from camdiff.training import ModelCheckpoint


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--ckpt", required=True)
    parser.add_argument("--out", default="sequence.json")
    parser.add_argument("--steps", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    ckpt = ModelCheckpoint.load(args.ckpt)
    plan = SequencePlan(
        segments=[
            SegmentSpec("The camera pushes in to the character.", 40),
            SegmentSpec("The camera rotates around the character.", 60),
            SegmentSpec("The camera pulls out from the character.", 40),
        ],
        transition_steps=0,
    )
    cfg = SamplerConfig(omega=1.0, steps=args.steps, seed=args.seed)
    trajectory = generate_long_sequence(plan, ckpt, cfg)

    start = 0
    for spec, end in zip(plan.segments, trajectory.meta["segments"]):
        segment = trajectory.frames[start:end]
        labels = classify_properties(type(trajectory)(segment), 1.7)
        junction = (
            np.linalg.norm(trajectory.frames[start] - trajectory.frames[start - 1])
            if start
            else 0.0
        )
        print(
            f"frames {start:>3}-{end:>3}  prompt={spec.prompt!r}  "
            f"labeled={labels.movement.value}  junction={junction:.4f}"
        )
        start = end

    Path(args.out).write_text(json.dumps(trajectory.to_dict(), indent=2) + "\n")
    print(f"wrote {args.out} ({len(trajectory)} frames)")


if __name__ == "__main__":
    main()
