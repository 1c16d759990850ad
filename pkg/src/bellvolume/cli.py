"""Command-line front end.

Every run prints one JSON record on stdout echoing its inputs, so any result
can be reproduced from the record alone. Exit codes: 0 success, 1 model
validation failure, 2 usage or parameter error, 3 runtime/numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .estimation import (DEFAULT_SAMPLES, BracketingError, default_threads, estimate_volume,
                         find_crossover, sweep_lambda)
from .geometry import ChshConfig
from .inequalities import get_scenario
from .models import (LAMBDA_MAX, LAMBDA_MIN, ModelValidationError, lambda_box_model,
                     load_model, pr_box_model, singlet_model)
from .search import search_max_violation

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

SWEEP_HEADER = "lambda,v,stderr"
# (restarts, iterations) per scenario
SEARCH_DEFAULTS = {"CHSH": (50, 2000), "I3322": (200, 5000)}


class UsageError(Exception):
    pass


@dataclass
class RunRecord:
    command: str
    parameters: dict
    result: object = None
    wall_time_seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        out = {"command": self.command, "parameters": self.parameters,
               "result": self.result, "wall_time_seconds": self.wall_time_seconds}
        out.update(self.extra)
        return json.dumps(out, indent=2)


def parse_model_spec(spec: str, degrees: bool = False):
    """``singlet``, ``pr``, ``lambda:<angle>`` or ``file:<path>``."""
    if spec == "singlet":
        return singlet_model()
    if spec == "pr":
        return pr_box_model()
    if spec.startswith("lambda:"):
        try:
            lam = float(spec[len("lambda:"):])
        except ValueError:
            raise UsageError(f"bad lambda in model spec {spec!r}") from None
        if degrees:
            lam = math.radians(lam)
        try:
            return lambda_box_model(lam)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if spec.startswith("file:"):
        path = Path(spec[len("file:"):])
        try:
            return load_model(path.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read model file: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"invalid model file {path}: {exc}") from None
    raise UsageError(f"unknown model spec {spec!r}; use singlet, pr, lambda:<x> or file:<path>")


def format_sweep_table(rows) -> str:
    lines = [SWEEP_HEADER] + [",".join("%.17g" % x for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def parse_sweep_table(text: str) -> list[tuple[float, float, float]]:
    lines = text.splitlines()
    if not lines or lines[0] != SWEEP_HEADER:
        raise ValueError(f"sweep table must start with {SWEEP_HEADER!r}")
    return [tuple(float(x) for x in line.split(",")) for line in lines[1:] if line]


def _angle(value: float, degrees: bool) -> float:
    return math.radians(value) if degrees else value


def _config_angles(config) -> dict:
    names = (["ab", "ab'", "a'b", "a'b'"] if isinstance(config, ChshConfig) else
             ["ab", "ab'", "ab''", "a'b", "a'b'", "a'b''", "a''b", "a''b'"])
    return dict(zip(names, config.angles()))


def cmd_estimate(args) -> RunRecord:
    scenario = get_scenario(args.scenario)
    model = parse_model_spec(args.model, args.degrees)
    samples = args.samples or DEFAULT_SAMPLES[scenario.name]
    est = estimate_volume(model, scenario, samples, args.seed, args.threads)
    params = {"model": args.model, "model_label": model.label, "scenario": scenario.name,
              "samples": samples, "seed": args.seed, "threads": args.threads}
    return RunRecord("estimate", params, est.to_dict())


def cmd_sweep(args) -> RunRecord:
    scenario = get_scenario(args.scenario)
    lo = _angle(args.lambda_min, args.degrees) if args.lambda_min is not None else LAMBDA_MIN
    hi = _angle(args.lambda_max, args.degrees) if args.lambda_max is not None else LAMBDA_MAX
    if args.steps < 2:
        raise UsageError(f"--steps must be >= 2, got {args.steps}")
    if not (LAMBDA_MIN - 1e-12 <= lo < hi <= LAMBDA_MAX + 1e-12):
        raise UsageError(f"need pi/6 <= lambda-min < lambda-max <= 4pi/9, got [{lo}, {hi}]")
    lo, hi = max(lo, LAMBDA_MIN), min(hi, LAMBDA_MAX)
    samples = args.samples or DEFAULT_SAMPLES[scenario.name]
    lambdas = np.linspace(lo, hi, args.steps).tolist()
    points = sweep_lambda(lambdas, scenario, samples, args.seed, True, args.threads)
    rows = [(p.lam, p.estimate.v, p.estimate.stderr) for p in points]
    out = Path(args.out or f"sweep_{scenario.name.lower()}.csv")
    out.write_text(format_sweep_table(rows))
    params = {"scenario": scenario.name, "lambda_min": lo, "lambda_max": hi,
              "steps": args.steps, "samples": samples, "seed": args.seed,
              "threads": args.threads, "common_random_numbers": True, "out": str(out)}
    result = [{"lambda": p.lam, **p.estimate.to_dict()} for p in points]
    return RunRecord("sweep", params, result)


def cmd_crossover(args) -> RunRecord:
    scenario = get_scenario(args.scenario)
    if args.reference not in ("singlet", "pr"):
        raise UsageError("--reference must be singlet or pr")
    reference = parse_model_spec(args.reference)
    lo = _angle(args.lambda_min, args.degrees) if args.lambda_min is not None else LAMBDA_MIN
    hi = _angle(args.lambda_max, args.degrees) if args.lambda_max is not None else LAMBDA_MAX
    tol = _angle(args.tol, args.degrees)
    if tol <= 0:
        raise UsageError(f"--tol must be positive, got {args.tol}")
    if not (LAMBDA_MIN - 1e-12 <= lo < hi <= LAMBDA_MAX + 1e-12):
        raise UsageError(f"need pi/6 <= lambda-min < lambda-max <= 4pi/9, got [{lo}, {hi}]")
    lo, hi = max(lo, LAMBDA_MIN), min(hi, LAMBDA_MAX)
    samples = args.samples or DEFAULT_SAMPLES[scenario.name]
    res = find_crossover(lambda_box_model, reference, scenario, (lo, hi), samples,
                         args.seed, tol, args.threads)
    params = {"reference": args.reference, "scenario": scenario.name, "lambda_min": lo,
              "lambda_max": hi, "tol": tol, "samples": samples, "seed": args.seed,
              "threads": args.threads}
    result = {**asdict(res), "lambda_star_degrees": math.degrees(res.lambda_star)}
    return RunRecord("crossover", params, result)


def cmd_maxviol(args) -> RunRecord:
    scenario = get_scenario(args.scenario)
    model = parse_model_spec(args.model, args.degrees)
    restarts, iterations = SEARCH_DEFAULTS[scenario.name]
    restarts = args.restarts or restarts
    iterations = args.iterations or iterations
    res = search_max_violation(model, scenario, restarts, iterations, args.seed)
    params = {"model": args.model, "model_label": model.label, "scenario": scenario.name,
              "restarts": restarts, "iterations": iterations, "seed": args.seed}
    directions = {name: [d["x"], d["y"], d["z"]] for name, d in asdict(res.config).items()}
    result = {"value": res.value, "pair_angles": _config_angles(res.config),
              "directions": directions, "iterations": res.iterations}
    return RunRecord("maxviol", params, result)


def cmd_validate(args) -> RunRecord:
    path = Path(args.path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        load_model(text)
        problems = []
    except ModelValidationError as exc:
        problems = exc.problems
    except ValueError as exc:
        problems = [f"parse error: {exc}"]
    record = RunRecord("validate", {"path": str(path)}, {"valid": not problems,
                                                         "problems": problems})
    record.extra["exit_code"] = EXIT_OK if not problems else EXIT_INVALID
    return record


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellvolume",
        description="Volume of violation of CHSH and 3322 Bell inequalities.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True,
                           help="singlet | pr | lambda:<angle> | file:<path>")
        p.add_argument("--scenario", choices=["chsh", "3322"], default="chsh")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--degrees", action="store_true",
                       help="read angle arguments in degrees (lambda in [30, 80])")

    p = sub.add_parser("estimate", help="relative volume of violation of one model")
    common(p)
    p.add_argument("--samples", type=int)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="lambda-box volume over a lambda grid (CSV output)")
    common(p, model=False)
    p.add_argument("--lambda-min", type=float)
    p.add_argument("--lambda-max", type=float)
    p.add_argument("--steps", type=int, default=45)
    p.add_argument("--samples", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("crossover", help="lambda at which lambda-boxes match a reference")
    common(p, model=False)
    p.add_argument("--reference", required=True, choices=["singlet", "pr"])
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--lambda-min", type=float)
    p.add_argument("--lambda-max", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("maxviol", help="largest functional value by hill climbing")
    common(p)
    p.add_argument("--restarts", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--threads", type=int, help="accepted for uniformity; the search is serial")
    p.set_defaults(func=cmd_maxviol)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("samples", "threads", "restarts", "iterations"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            print(f"error: --{name} must be >= 1", file=sys.stderr)
            return EXIT_USAGE
    if hasattr(args, "threads") and args.threads is None:
        args.threads = default_threads()
    started = time.perf_counter()
    try:
        record = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BracketingError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    record.wall_time_seconds = time.perf_counter() - started
    code = record.extra.pop("exit_code", EXIT_OK)
    print(record.to_json())
    if code == EXIT_INVALID:
        for problem in record.result["problems"]:
            print(problem, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
