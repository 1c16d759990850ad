"""Maximal value of a Bell functional by restarted hill climbing.

All restarts advance together as one numpy batch. A sweep perturbs each free
direction in turn, drawing the candidate uniformly from a spherical cap around
the current direction, and keeps it only if the functional strictly rises.
A restart whose sweep brings no improvement shrinks its cap radius.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ChshConfig, I3322Config, batch_pair_angles, config_from_free
from .inequalities import Scenario, functional_from_angles, functional_value
from .models import CorrelationModel

INITIAL_RADIUS = np.pi / 2
MIN_RADIUS = 1e-4
SHRINK = 0.95


@dataclass(frozen=True)
class MaxViolationResult:
    value: float
    config: ChshConfig | I3322Config
    iterations: int
    restarts: int
    seed: int


def _random_directions(rng: np.random.Generator, shape) -> np.ndarray:
    v = rng.standard_normal((*shape, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def perturb_in_cap(rng: np.random.Generator, d: np.ndarray, radius: np.ndarray) -> np.ndarray:
    """Uniform point in the cap of angular ``radius`` around each row of ``d``."""
    n = d.shape[0]
    cos_t = 1.0 - rng.random(n) * (1.0 - np.cos(radius))
    sin_t = np.sqrt(np.maximum(0.0, 1.0 - cos_t * cos_t))
    phi = 2.0 * np.pi * rng.random(n)
    helper = np.where(np.abs(d[:, 2:3]) < 0.9, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0])
    e1 = np.cross(d, helper)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(d, e1)
    v = (cos_t[:, None] * d + (sin_t * np.cos(phi))[:, None] * e1
         + (sin_t * np.sin(phi))[:, None] * e2)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def search_max_violation(model: CorrelationModel, scenario: Scenario, restarts: int = 50,
                         iterations: int = 2000, seed: int = 0) -> MaxViolationResult:
    """Best functional value found over ``restarts`` climbs of ``iterations`` sweeps."""
    if restarts < 1 or iterations < 1:
        raise ValueError("restarts and iterations must both be >= 1")
    rng = np.random.default_rng(seed)
    nslots = len(scenario.slots)

    def value_of(free):
        return functional_from_angles(model, scenario, batch_pair_angles(free, scenario.pairs))

    free = _random_directions(rng, (restarts, nslots))
    value = value_of(free)
    radius = np.full(restarts, INITIAL_RADIUS)
    for _ in range(iterations):
        improved = np.zeros(restarts, dtype=bool)
        for k in range(nslots):
            trial = free.copy()
            trial[:, k] = perturb_in_cap(rng, free[:, k], radius)
            trial_value = value_of(trial)
            better = trial_value > value
            free[better] = trial[better]
            value = np.where(better, trial_value, value)
            improved |= better
        radius = np.where(improved, radius, np.maximum(radius * SHRINK, MIN_RADIUS))

    best = int(np.argmax(value))
    config = config_from_free(scenario.slots, free[best])
    return MaxViolationResult(functional_value(model, scenario, config), config,
                              iterations, restarts, seed)
