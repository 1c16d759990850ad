"""Print the relative volume of violation of the singlet and PR-box in both scenarios."""

import argparse
import math
from dataclasses import dataclass

from bellvolume import CHSH, I3322, estimate_volume, pr_box_model, singlet_model


@dataclass
class TableConfig:
    seed: int = 1
    chsh_samples: int = 1_000_000
    i3322_samples: int = 10_000_000
    threads: int | None = None


# Previously reported values the estimates are compared against.
REFERENCE = {
    ("singlet", "CHSH"): (math.pi - 3) / 2,
    ("pr", "CHSH"): 0.180717,
    ("singlet", "I3322"): 2.17e-3,
    ("pr", "I3322"): 2.69e-2,
}


def run(cfg: TableConfig) -> None:
    print(f"{'model':8s} {'scenario':8s} {'samples':>9s} {'v':>10s} {'stderr':>9s} {'ref':>10s}")
    for scenario, samples in ((CHSH, cfg.chsh_samples), (I3322, cfg.i3322_samples)):
        for model in (singlet_model(), pr_box_model()):
            est = estimate_volume(model, scenario, samples, cfg.seed, cfg.threads)
            ref = REFERENCE[(model.label, scenario.name)]
            print(f"{model.label:8s} {scenario.name:8s} {samples:9d} {est.v:10.6f} "
                  f"{est.stderr:9.2e} {ref:10.6f}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=TableConfig.seed)
    parser.add_argument("--chsh-samples", type=int, default=TableConfig.chsh_samples)
    parser.add_argument("--i3322-samples", type=int, default=TableConfig.i3322_samples)
    parser.add_argument("--threads", type=int)
    run(TableConfig(**vars(parser.parse_args())))
