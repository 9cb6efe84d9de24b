#!/usr/bin/env python3
"""Sweep the guidance weight and report R-precision per omega.

Usage:
  python scripts/guidance_sweep.py --ckpt CKPT --classifier CLF --dataset D \
      [--omegas 0 0.5 1 1.5 2.5] [--n 60] [--seeds 3] [--steps 50]
"""

import argparse

import numpy as np

from camdiff.conditioning import build_condition
from camdiff.dataset import load_dataset
from camdiff.evaluation import ClassifierCheckpoint, r_precision
from camdiff.model import SamplerConfig
from camdiff.sampling import sample
from camdiff.training import ModelCheckpoint


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--ckpt", required=True)
    parser.add_argument("--classifier", required=True)
    parser.add_argument("--dataset", required=True)
    parser.add_argument("--omegas", nargs="+", type=float, default=[0.0, 0.5, 1.0, 1.5, 2.5])
    parser.add_argument("--n", type=int, default=60)
    parser.add_argument("--seeds", type=int, default=3)
    parser.add_argument("--steps", type=int, default=50)
    args = parser.parse_args()

    ckpt = ModelCheckpoint.load(args.ckpt)
    classifier = ClassifierCheckpoint.load(args.classifier)
    provider = ckpt.make_provider()
    records = [r for r in load_dataset(args.dataset) if r.split == "test"][: args.n]
    intended = [r.labels.movement for r in records]

    print(f"{'omega':>6}  {'mean':>6}  per-seed")
    for omega in args.omegas:
        values = []
        for seed in range(args.seeds):
            trajs = []
            for i, rec in enumerate(records):
                condition = build_condition(provider.embed(" ".join(rec.prompts)), None)
                cfg = SamplerConfig(
                    omega=omega, steps=args.steps, seed=seed * 100_000 + i
                )
                trajs.append(sample(ckpt, condition, cfg))
            values.append(r_precision(classifier, trajs, intended))
        print(
            f"{omega:>6.2f}  {np.mean(values):>6.3f}  "
            + " ".join(f"{v:.3f}" for v in values)
        )


if __name__ == "__main__":
    main()
