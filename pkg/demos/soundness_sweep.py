"""Run every shipped config and report satisfied counts and violations.

    python3 demos/soundness_sweep.py [--trials N]
"""
import argparse
import pathlib
import time

from omp_perturb.experiment import ExperimentConfig, aggregate, run_experiment

ap = argparse.ArgumentParser()
ap.add_argument("--trials", type=int, default=None)
args = ap.parse_args()

for path in sorted((pathlib.Path(__file__).parent / "configs").glob("*.json")):
    cfg = ExperimentConfig.load(path)
    if args.trials:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "trials": args.trials})
    start = time.perf_counter()
    summary = aggregate(cfg, run_experiment(cfg))
    per = ", ".join(f"{c}: {v['satisfied_count']}/{v['violations']}"
                    for c, v in summary["per_checker"].items())
    print(f"{path.name:<26} {cfg.trials:>4} trials  satisfied/violations  {per}  "
          f"({time.perf_counter() - start:.1f}s)")
