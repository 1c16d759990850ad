"""Monte Carlo estimation of the relative volume of violation.

A configuration sample is fixed by ``(scenario, samples, seed)``: sample ``i``
always uses stream index ``i``. Work is split into fixed-size chunks, so the
violation count is an integer sum that does not depend on the worker count.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .geometry import batch_pair_angles, sample_directions
from .inequalities import Scenario, functional_from_angles, violates
from .models import LAMBDA_MAX, LAMBDA_MIN, CorrelationModel, ParameterError, lambda_box_model

log = logging.getLogger(__name__)

CHUNK = 1 << 16
# Cached pair angles above this size are regenerated on demand instead.
CACHE_LIMIT_BYTES = 1_500_000_000
DEFAULT_SAMPLES = {"CHSH": 1_000_000, "I3322": 10_000_000}


class BracketingError(RuntimeError):
    """The crossover difference has no sign change across the bracket."""


@dataclass(frozen=True)
class VolumeEstimate:
    violations: int
    samples: int
    seed: int
    scenario: str
    model: str

    @property
    def v(self) -> float:
        return self.violations / self.samples

    @property
    def stderr(self) -> float:
        v = self.v
        return math.sqrt(v * (1.0 - v) / self.samples)

    def to_dict(self) -> dict:
        return {**asdict(self), "v": self.v, "stderr": self.stderr}


@dataclass(frozen=True)
class SweepPoint:
    lam: float
    estimate: VolumeEstimate


@dataclass(frozen=True)
class CrossoverResult:
    lambda_star: float
    bracket_width: float
    samples_per_eval: int
    reference: str
    evaluations: int
    reference_v: float


def default_threads() -> int:
    return os.cpu_count() or 1


class ConfigSample:
    """The pair angles of ``samples`` random configs, evaluated chunk by chunk.

    With ``cache=True`` (and the angles fitting in CACHE_LIMIT_BYTES) they are
    computed once and reused, which is what repeated evaluations under common
    random numbers want.
    """

    def __init__(self, scenario: Scenario, samples: int, seed: int,
                 threads: int | None = None, cache: bool = False):
        if samples < 1:
            raise ParameterError(f"samples must be >= 1, got {samples}")
        self.scenario = scenario
        self.samples = int(samples)
        self.seed = int(seed)
        self.threads = max(1, threads or default_threads())
        self.chunks = [(s, min(CHUNK, self.samples - s)) for s in range(0, self.samples, CHUNK)]
        nbytes = self.samples * len(scenario.pairs) * 8
        self._cache = None
        if cache and nbytes <= CACHE_LIMIT_BYTES:
            self._cache = self._map(self._angles)

    def _map(self, fn):
        if self.threads == 1 or len(self.chunks) == 1:
            return [fn(c) for c in self.chunks]
        with ThreadPoolExecutor(self.threads) as pool:
            return list(pool.map(fn, self.chunks))

    def _angles(self, chunk) -> np.ndarray:
        start, count = chunk
        free = sample_directions(self.seed, start, count, len(self.scenario.slots))
        return batch_pair_angles(free, self.scenario.pairs)

    def count_many(self, models: Sequence[CorrelationModel]) -> list[int]:
        """Violation count for each model, all on the same configurations."""
        def work(k):
            angles = self._cache[k] if self._cache is not None else self._angles(self.chunks[k])
            return [int(np.count_nonzero(violates(self.scenario,
                                                  functional_from_angles(m, self.scenario, angles))))
                    for m in models]
        if self.threads == 1 or len(self.chunks) == 1:
            per_chunk = [work(k) for k in range(len(self.chunks))]
        else:
            with ThreadPoolExecutor(self.threads) as pool:
                per_chunk = list(pool.map(work, range(len(self.chunks))))
        return [sum(col) for col in zip(*per_chunk)] if per_chunk else [0] * len(models)

    def count_violations(self, model: CorrelationModel) -> int:
        return self.count_many([model])[0]

    def estimate(self, model: CorrelationModel) -> VolumeEstimate:
        return VolumeEstimate(self.count_violations(model), self.samples, self.seed,
                              self.scenario.name, model.label)


def estimate_volume(model: CorrelationModel, scenario: Scenario, samples: int, seed: int,
                    threads: int | None = None) -> VolumeEstimate:
    """Fraction of random configurations on which ``model`` violates ``scenario``."""
    return ConfigSample(scenario, samples, seed, threads).estimate(model)


def _check_lambda(lam: float) -> None:
    if not LAMBDA_MIN - 1e-15 <= lam <= LAMBDA_MAX + 1e-15:
        raise ParameterError(f"lambda={lam!r} outside [pi/6, 4pi/9]")


def sweep_lambda(lambdas: Sequence[float], scenario: Scenario, samples: int, seed: int,
                 common_random_numbers: bool = True,
                 threads: int | None = None) -> list[SweepPoint]:
    """Volume of violation of the lambda-box at each ``lambdas`` value.

    Under common random numbers every lambda sees the same configurations;
    otherwise lambda number ``j`` uses seed ``seed + j``.
    """
    for lam in lambdas:
        _check_lambda(lam)
    models = [lambda_box_model(lam) for lam in lambdas]
    if common_random_numbers:
        sample = ConfigSample(scenario, samples, seed, threads)
        counts = sample.count_many(models)
        seeds = [seed] * len(models)
    else:
        seeds = [seed + j for j in range(len(models))]
        counts = [ConfigSample(scenario, samples, s, threads).count_violations(m)
                  for s, m in zip(seeds, models)]
    return [SweepPoint(lam, VolumeEstimate(c, samples, s, scenario.name, m.label))
            for lam, m, c, s in zip(lambdas, models, counts, seeds)]


def find_crossover(family: Callable[[float], CorrelationModel], reference: CorrelationModel,
                   scenario: Scenario, bracket: tuple[float, float] = (LAMBDA_MIN, LAMBDA_MAX),
                   samples: int | None = None, seed: int = 0, tol: float = 0.01,
                   threads: int | None = None) -> CrossoverResult:
    """Bisect for the parameter where the family's volume meets the reference's.

    Every evaluation, the reference included, uses the same configurations, so
    the difference being bisected is a fixed step function of the parameter.
    """
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    lo, hi = bracket
    if not lo < hi:
        raise ParameterError(f"empty bracket {bracket}")
    samples = samples or DEFAULT_SAMPLES[scenario.name]
    sample = ConfigSample(scenario, samples, seed, threads, cache=True)
    ref_count = sample.count_violations(reference)

    def diff(lam):
        return sample.count_violations(family(lam)) - ref_count

    d_lo, d_hi = diff(lo), diff(hi)
    evaluations = 3
    if d_lo == 0 or d_hi == 0:
        hi = lo = lo if d_lo == 0 else hi
    elif (d_lo > 0) == (d_hi > 0):
        raise BracketingError(
            f"no sign change on [{lo:.6g}, {hi:.6g}]: differences {d_lo} and {d_hi} "
            f"(of {samples} samples)")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        d_mid = diff(mid)
        evaluations += 1
        log.debug("bisect lambda=%.6f diff=%d", mid, d_mid)
        if d_mid == 0:
            lo = hi = mid
        elif (d_mid > 0) == (d_lo > 0):
            lo, d_lo = mid, d_mid
        else:
            hi = mid
    return CrossoverResult(0.5 * (lo + hi), hi - lo, samples, reference.label,
                           evaluations, ref_count / samples)
