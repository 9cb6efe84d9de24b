import time, numpy as np
from pathlib import Path
from camdiff.dataset import DatasetConfig, generate_dataset, load_dataset
from camdiff.model import DenoiserConfig, TrainConfig, SamplerConfig
from camdiff.training import train_diffusion, ModelCheckpoint
from camdiff.schedule import make_linear_schedule
from camdiff.sampling import sample
from camdiff.conditioning import build_condition
from camdiff.camera import classify_properties

art = Path("/root/pkg/.artifacts")
ds = art / "dataset"
if not (ds / "manifest.json").exists():
    generate_dataset(DatasetConfig(n_sequences=2670, seed=0, out_dir=str(ds)))
    print("dataset done", flush=True)
records = load_dataset(ds)
t0 = time.time()
ck_path = art / "pilot_ckpt"
cfg = DenoiserConfig(model_dim=64, n_layers=4, n_heads=4)
tc = TrainConfig(batch_size=128, lr=2e-4, steps=1500, seed=0)
ckpt = train_diffusion(records, ck_path, cfg, tc, schedule=make_linear_schedule(1000),
                       metrics_path=ck_path / "metrics.jsonl")
print("train mins", (time.time() - t0) / 60, flush=True)

from camdiff.training import HashProjectionEncoder
provider = ckpt.make_provider()
test = [r for r in records if r.split == "test"][:60]
t0 = time.time()
hits = 0
for i, rec in enumerate(test):
    cond = build_condition(provider.embed(" ".join(rec.prompts)), None)
    traj = sample(ckpt, cond, SamplerConfig(omega=1.0, steps=50, seed=1000 + i))
    lab = classify_properties(traj, 1.7)
    hits += lab.movement == rec.labels.movement
print("rule-based movement match", hits, "/", len(test), "sample mins", (time.time()-t0)/60, flush=True)
