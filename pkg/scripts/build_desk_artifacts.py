#!/usr/bin/env python3
"""Pre-build the desk-scale artifacts the acceptance suite uses.

Running this before ``pytest tests/test_acceptance.py`` moves the slow
training out of the test session; the suite finds the cached artifacts
under .artifacts/acceptance and skips retraining.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from test_acceptance import (  # noqa: E402
    ARTIFACTS,
    DESK_CLASSIFIER,
    DESK_CLASSIFIER_STEPS,
    DESK_DATASET,
    DESK_DENOISER,
    DESK_TRAIN,
)

from camdiff.dataset import DatasetConfig, generate_dataset, load_dataset  # noqa: E402
from camdiff.evaluation import ClassifierCheckpoint, train_classifier  # noqa: E402
from camdiff.schedule import make_linear_schedule  # noqa: E402
from camdiff.training import ModelCheckpoint, train_diffusion  # noqa: E402


def main():
    t0 = time.time()
    data_dir = ARTIFACTS / "dataset"
    if not (data_dir / "manifest.json").exists():
        print("generating dataset ...", flush=True)
        generate_dataset(DatasetConfig(out_dir=str(data_dir), **DESK_DATASET))
    records = load_dataset(data_dir)
    print(f"dataset ready ({len(records)} records, {time.time() - t0:.0f}s)", flush=True)

    denoiser_dir = ARTIFACTS / "denoiser"
    if not (denoiser_dir / "checkpoint.json").exists():
        print("training denoiser ...", flush=True)
        train_diffusion(
            records,
            denoiser_dir,
            DESK_DENOISER,
            DESK_TRAIN,
            schedule=make_linear_schedule(1000),
            metrics_path=denoiser_dir / "metrics.jsonl",
        )
    print(f"denoiser ready ({time.time() - t0:.0f}s)", flush=True)

    classifier_dir = ARTIFACTS / "classifier"
    if not (classifier_dir / "checkpoint.json").exists():
        print("training classifier ...", flush=True)
        ckpt = train_classifier(
            records,
            seed=0,
            config=DESK_CLASSIFIER,
            steps=DESK_CLASSIFIER_STEPS,
            batch_size=64,
            lr=1e-3,
        )
        ckpt.save(classifier_dir)
    clf = ClassifierCheckpoint.load(classifier_dir)
    print(
        f"classifier ready, held-out accuracy {clf.heldout_accuracy:.4f} "
        f"({time.time() - t0:.0f}s)",
        flush=True,
    )


if __name__ == "__main__":
    main()
