"""Sweep the lambda-box family in both scenarios and locate the four crossings.

Writes ``<outdir>/sweep_chsh.csv`` and ``<outdir>/sweep_3322.csv`` (columns
lambda, v, stderr) and prints the singlet and PR-box reference volumes and
the crossing parameters, with their values in degrees.
"""

import argparse
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from bellvolume import (CHSH, I3322, estimate_volume, find_crossover, lambda_box_model,
                        pr_box_model, singlet_model, sweep_lambda)
from bellvolume.cli import format_sweep_table
from bellvolume.models import LAMBDA_MAX, LAMBDA_MIN


@dataclass
class CurveConfig:
    outdir: str = "results"
    steps: int = 45
    seed: int = 1
    chsh_samples: int = 1_000_000
    i3322_samples: int = 10_000_000
    tol: float = 0.01
    threads: int | None = None


def run(cfg: CurveConfig) -> None:
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    lambdas = np.linspace(LAMBDA_MIN, LAMBDA_MAX, cfg.steps).tolist()
    for scenario, samples, name in ((CHSH, cfg.chsh_samples, "chsh"),
                                    (I3322, cfg.i3322_samples, "3322")):
        points = sweep_lambda(lambdas, scenario, samples, cfg.seed, True, cfg.threads)
        rows = [(p.lam, p.estimate.v, p.estimate.stderr) for p in points]
        (out / f"sweep_{name}.csv").write_text(format_sweep_table(rows))
        print(f"{scenario.name}: wrote {out / f'sweep_{name}.csv'} ({len(rows)} rows)")
        for ref in (singlet_model(), pr_box_model()):
            est = estimate_volume(ref, scenario, samples, cfg.seed, cfg.threads)
            cross = find_crossover(lambda_box_model, ref, scenario, samples=samples,
                                   seed=cfg.seed, tol=cfg.tol, threads=cfg.threads)
            print(f"  {ref.label:8s} v={est.v:.6f}  crossing lambda={cross.lambda_star:.4f} rad "
                  f"({math.degrees(cross.lambda_star):.1f} deg)")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    for name, default in vars(CurveConfig()).items():
        kind = int if name in ("steps", "seed", "chsh_samples", "i3322_samples", "threads") \
            else float if name == "tol" else str
        parser.add_argument("--" + name.replace("_", "-"), type=kind, default=default)
    run(CurveConfig(**vars(parser.parse_args())))
