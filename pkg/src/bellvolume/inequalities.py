"""CHSH and 3322 Bell functionals and their violation predicates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CHSH_PAIRS, CHSH_SLOTS, I3322_PAIRS, I3322_SLOTS, ChshConfig, I3322Config
from .models import CorrelationModel, eval_correlation, single_party_marginal

TWO_SIDED = "two_sided"
ONE_SIDED = "one_sided"


@dataclass(frozen=True)
class Scenario:
    """A Bell test: how many directions are free and what counts as a violation.

    ``pair_coefficients`` are the signs of the two-party terms, in the order
    the config's ``angles()`` produces the pair angles. ``slots`` and
    ``pairs`` describe the free directions for batch evaluation.
    """

    name: str
    free_directions: int
    local_bound: float
    predicate_sense: str
    algebraic_max_symmetric: float
    pair_coefficients: tuple[float, ...]
    slots: tuple[str, ...]
    pairs: tuple[tuple[int, int], ...]

    @property
    def total_volume(self) -> float:
        """Configuration-space volume, (4 pi)^free_directions."""
        return (4 * np.pi) ** self.free_directions


CHSH = Scenario("CHSH", 3, 2.0, TWO_SIDED, 4.0, (1.0, 1.0, 1.0, -1.0),
                CHSH_SLOTS, CHSH_PAIRS)
I3322 = Scenario("I3322", 5, 4.0, ONE_SIDED, 8.0,
                 (1.0, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0),
                 I3322_SLOTS, I3322_PAIRS)

SCENARIOS = {"chsh": CHSH, "3322": I3322, "i3322": I3322}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose chsh or 3322") from None


def chsh_value(model: CorrelationModel, config: ChshConfig) -> float:
    t_ab, t_abP, t_aPb, t_aPbP = config.angles()
    e = lambda t: eval_correlation(model, t)
    return e(t_ab) + e(t_abP) + e(t_aPb) - e(t_aPbP)


def i3322_value(model: CorrelationModel, config: I3322Config) -> float:
    m = lambda d: single_party_marginal(model, d)
    marginals = -m(config.a) - m(config.aP) + m(config.b) + m(config.bP)
    terms = sum(c * eval_correlation(model, t)
                for c, t in zip(I3322.pair_coefficients, config.angles()))
    return marginals + terms


def functional_value(model: CorrelationModel, scenario: Scenario, config) -> float:
    if scenario.name == "CHSH":
        return chsh_value(model, config)
    return i3322_value(model, config)


def functional_from_angles(model: CorrelationModel, scenario: Scenario,
                           angles: np.ndarray) -> np.ndarray:
    """Functional for a batch of configs given their pair angles, shape (n, pairs).

    Marginal terms are omitted: they vanish for every spherically symmetric
    model, which is all this package builds.
    """
    coeffs = scenario.pair_coefficients
    total = coeffs[0] * model.evaluate(angles[:, 0])
    for j in range(1, len(coeffs)):
        total += coeffs[j] * model.evaluate(angles[:, j])
    return total


def violates(scenario: Scenario, value):
    """Strict violation test; works on scalars and arrays."""
    if scenario.predicate_sense == TWO_SIDED:
        out = np.abs(value) > scenario.local_bound
    else:
        out = np.asarray(value) > scenario.local_bound
    return bool(out) if out.ndim == 0 else out
