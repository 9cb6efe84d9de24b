"""Command-line driver for dataset generation, training, sampling,
composition, and evaluation. Every run writes a job manifest."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
import uuid
from pathlib import Path

import numpy as np

from . import __version__
from .camera import Trajectory, classify_properties
from .composer import SequencePlan, generate_long_sequence, truncate_padding
from .conditioning import FileEmbeddingProvider, build_condition
from .dataset import DatasetConfig, generate_dataset, load_dataset
from .errors import CamdiffError
from .evaluation import (
    ClassifierCheckpoint,
    ClassifierConfig,
    MetricReport,
    MOVEMENT_INDEX,
    diversity,
    fid,
    keyframe_distance,
    multimodality,
    r_precision,
    train_classifier,
)
from .model import DenoiserConfig, SamplerConfig, TrainConfig
from .sampling import sample
from .schedule import make_linear_schedule
from .training import ModelCheckpoint, train_diffusion

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def _file_hash(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_job_manifest(command: str, args: dict, inputs: list[str], outputs: list[str], started: float):
    manifest = {
        "job_id": str(uuid.uuid4()),
        "command": command,
        "config_hash": hashlib.sha256(
            json.dumps(args, sort_keys=True, default=str).encode()
        ).hexdigest(),
        "args": args,
        "input_hashes": {
            p: _file_hash(Path(p)) for p in inputs if Path(p).is_file()
        },
        "outputs": outputs,
        "wallclock_seconds": time.time() - started,
        "versions": {"camdiff": __version__},
    }
    target = None
    for out in outputs:
        p = Path(out)
        target = p if p.is_dir() else p.parent
        break
    target = target or Path(".")
    target.mkdir(parents=True, exist_ok=True)
    path = target / f"job-{manifest['job_id']}.json"
    path.write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    return path


def cmd_dataset(args) -> list[str]:
    config = DatasetConfig(
        n_sequences=args.n,
        seed=args.seed,
        out_dir=args.out,
        max_len=args.max_len,
        easing=args.easing,
    )
    manifest = generate_dataset(config)
    print(json.dumps(manifest["counts"], indent=2))
    return [args.out]


def cmd_train_diffusion(args) -> list[str]:
    records = load_dataset(args.dataset)
    manifest_path = Path(args.dataset) / "manifest.json"
    manifest_hash = _file_hash(manifest_path) if manifest_path.is_file() else ""
    denoiser = DenoiserConfig(
        max_len=args.max_len,
        model_dim=args.model_dim,
        n_layers=args.layers,
        n_heads=args.heads,
    )
    train_cfg = TrainConfig(
        batch_size=args.batch, lr=args.lr, steps=args.steps, seed=args.seed
    )
    train_diffusion(
        records,
        args.out,
        denoiser,
        train_cfg,
        schedule=make_linear_schedule(args.timesteps),
        provider_seed=args.provider_seed,
        dataset_manifest_hash=manifest_hash,
        metrics_path=Path(args.out) / "metrics.jsonl" if args.log_metrics else None,
    )
    print(f"checkpoint written to {args.out}")
    return [args.out]


def cmd_train_classifier(args) -> list[str]:
    records = load_dataset(args.dataset)
    config = ClassifierConfig(
        max_len=args.max_len,
        model_dim=args.model_dim,
        n_layers=args.layers,
        n_heads=args.heads,
        ff_dim=args.ff_dim,
    )
    ckpt = train_classifier(
        records, seed=args.seed, config=config, steps=args.steps, batch_size=args.batch
    )
    ckpt.save(args.out)
    print(f"held-out accuracy: {ckpt.heldout_accuracy:.4f}")
    return [args.out]


def _parse_keyframes(raw: str | None):
    if raw is None:
        return None
    data = json.loads(raw)
    return np.asarray([data["start"], data["end"]], dtype=float)


def cmd_sample(args) -> list[str]:
    ckpt = ModelCheckpoint.load(args.ckpt)
    provider = ckpt.make_provider()
    condition = build_condition(
        provider.embed(args.prompt) if args.prompt else None,
        _parse_keyframes(args.keyframes),
    )
    cfg = SamplerConfig(omega=args.omega, steps=args.steps, seed=args.seed)
    trajectory = sample(ckpt, condition, cfg, length=args.length)
    if args.truncate:
        trajectory = truncate_padding(trajectory)
    payload = trajectory.to_dict()
    payload["meta"]["labels"] = classify_properties(
        trajectory, float(args.height)
    ).to_dict()
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    print(f"trajectory ({len(trajectory)} frames) written to {args.out}")
    return [args.out]


def cmd_compose(args) -> list[str]:
    ckpt = ModelCheckpoint.load(args.ckpt)
    plan = SequencePlan.from_dict(json.loads(Path(args.plan).read_text()))
    cfg = SamplerConfig(omega=args.omega, steps=args.steps, seed=args.seed)
    trajectory = generate_long_sequence(plan, ckpt, cfg)
    Path(args.out).write_text(json.dumps(trajectory.to_dict(), indent=2) + "\n")
    print(f"sequence ({len(trajectory)} frames) written to {args.out}")
    return [args.out]


def cmd_evaluate(args) -> list[str]:
    from .prompts import full_prompt

    ckpt = ModelCheckpoint.load(args.ckpt)
    classifier = ClassifierCheckpoint.load(args.classifier)
    provider = ckpt.make_provider()
    records = [r for r in load_dataset(args.dataset) if r.split == "test"]
    if args.limit:
        records = records[: args.limit]
    rng = np.random.default_rng(args.seed)

    generated, intended, kf_dists = [], [], []
    for i, rec in enumerate(records):
        condition = build_condition(provider.embed(" ".join(rec.prompts)), None)
        cfg = SamplerConfig(omega=args.omega, steps=args.steps, seed=args.seed + i)
        traj = sample(ckpt, condition, cfg)
        generated.append(traj)
        intended.append(rec.labels.movement)
        kf_dists.append(
            keyframe_distance(traj, rec.trajectory.frames[0], rec.trajectory.frames[-1])
        )

    real = [r.trajectory for r in records]
    feats_gen = classifier.features(generated)
    feats_real = classifier.features(real)
    rp = r_precision(classifier, generated, intended)

    prompts = {}
    mm_records = records[: args.mm_prompts]
    for j, rec in enumerate(mm_records):
        trajs = []
        for k in range(args.mm_samples):
            condition = build_condition(provider.embed(" ".join(rec.prompts)), None)
            cfg = SamplerConfig(
                omega=args.omega, steps=args.steps, seed=args.seed + 10_000 + j * 1000 + k
            )
            trajs.append(sample(ckpt, condition, cfg))
        prompts[" ".join(rec.prompts)] = classifier.features(trajs)

    report = MetricReport(
        fid=fid(feats_gen, feats_real),
        r_precision=rp,
        diversity=diversity(feats_gen, pairs=len(feats_gen) // 2, seed=args.seed),
        multimodality=multimodality(prompts, seed=args.seed),
        kf_distance=float(np.mean(kf_dists)),
        n_generated=len(generated),
        n_real=len(real),
        seed=args.seed,
        diversity_pairs=len(feats_gen) // 2,
    )
    Path(args.out).write_text(report.to_json() + "\n")
    print(report.to_json())
    return [args.out]


def cmd_embed_import(args) -> list[str]:
    count = FileEmbeddingProvider.import_json(args.json, args.out)
    print(f"imported {count} embeddings into {args.out}")
    return [args.out]


def cmd_export(args) -> list[str]:
    records = load_dataset(args.dataset)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for rec in records[: args.limit] if args.limit else records:
        path = out / f"{rec.id}.json"
        payload = rec.trajectory.to_dict()
        payload["meta"]["labels"] = rec.labels.to_dict()
        payload["meta"]["prompts"] = rec.prompts
        path.write_text(json.dumps(payload, indent=2) + "\n")
        written.append(str(path))
    print(f"exported {len(written)} trajectories to {out}")
    return [str(out)]


def cmd_serve(args) -> list[str]:
    import uvicorn

    from .service import create_app

    app = create_app(checkpoint_path=args.ckpt)
    uvicorn.run(app, host=args.host, port=args.port)
    return []


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="camdiff")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dataset", help="generate the synthetic dataset")
    p.add_argument("--n", type=int, default=2670)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--max-len", type=int, default=60)
    p.add_argument("--easing", action="store_true")
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("train-diffusion", help="train the denoiser")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-len", type=int, default=60)
    p.add_argument("--model-dim", type=int, default=256)
    p.add_argument("--layers", type=int, default=4)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--batch", type=int, default=256)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--steps", type=int, default=4000)
    p.add_argument("--timesteps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--provider-seed", type=int, default=0)
    p.add_argument("--log-metrics", action="store_true")
    p.set_defaults(func=cmd_train_diffusion)

    p = sub.add_parser("train-classifier", help="train the movement classifier")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-len", type=int, default=60)
    p.add_argument("--model-dim", type=int, default=256)
    p.add_argument("--layers", type=int, default=6)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--ff-dim", type=int, default=1024)
    p.add_argument("--batch", type=int, default=64)
    p.add_argument("--steps", type=int, default=600)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train_classifier)

    p = sub.add_parser("sample", help="generate one trajectory")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--prompt", default=None)
    p.add_argument("--keyframes", default=None, help='JSON {"start": [...], "end": [...]}')
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--height", type=float, default=1.7)
    p.add_argument("--truncate", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("compose", help="generate a long sequence from a plan")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("evaluate", help="compute the metric report")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--classifier", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--mm-prompts", type=int, default=10)
    p.add_argument("--mm-samples", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("embed-import", help="import a JSON embedding dump")
    p.add_argument("--json", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed_import)

    p = sub.add_parser("export", help="export dataset trajectories as JSON files")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--limit", type=int, default=0)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--ckpt", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    started = time.time()
    arg_dict = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    inputs = [
        str(v)
        for k, v in arg_dict.items()
        if k in ("dataset", "ckpt", "classifier", "plan", "json") and v
    ]
    try:
        outputs = args.func(args)
    except CamdiffError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if outputs:
        write_job_manifest(args.command, arg_dict, inputs, outputs, started)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
