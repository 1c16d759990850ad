"""Correlation functions E(theta) of spherically symmetric two-party boxes.

Two kinds of model exist: the singlet, E(theta) = -cos(theta), and continuous
piecewise-linear functions stored as node lists. The PR-box and the lambda-box
family are built-in piecewise-linear models; custom ones load from JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .geometry import Direction

PI = math.pi
LAMBDA_MIN = PI / 6
LAMBDA_MAX = 4 * PI / 9

# Tolerance for node positions at the ends of the domain, so that files
# holding a decimal rendering of pi still validate.
_DOMAIN_TOL = 1e-12


class DomainError(ValueError):
    """An angle outside [0, pi] was passed to a correlation function."""


class ParameterError(ValueError):
    """A model parameter lies outside its admissible range."""


class ModelValidationError(ValueError):
    """A model document parsed but violates the model invariants."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class PiecewiseNode:
    theta: float
    value: float


@dataclass(frozen=True)
class Singlet:
    label: str = "singlet"

    def evaluate(self, theta):
        return -np.cos(theta)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation through ``nodes``.

    Consecutive nodes may share a theta (a zero-length segment) only if they
    also share a value. No validation happens here; see :func:`validate_model`.
    """

    nodes: tuple[PiecewiseNode, ...]
    label: str = "custom"
    _xs: np.ndarray = field(init=False, repr=False, compare=False)
    _ys: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = tuple(n if isinstance(n, PiecewiseNode) else PiecewiseNode(*map(float, n))
                      for n in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        # np.interp divides by the segment width, so drop zero-length segments.
        xs, ys = [], []
        for n in nodes:
            if xs and n.theta == xs[-1]:
                continue
            xs.append(n.theta)
            ys.append(n.value)
        object.__setattr__(self, "_xs", np.array(xs))
        object.__setattr__(self, "_ys", np.array(ys))

    def evaluate(self, theta):
        return np.interp(theta, self._xs, self._ys)

    def max_slope(self) -> float:
        if len(self._xs) < 2:
            return 0.0
        return float(np.max(np.abs(np.diff(self._ys) / np.diff(self._xs))))


CorrelationModel = Union[Singlet, PiecewiseLinear]


def eval_correlation(model: CorrelationModel, theta):
    """E(theta) for scalar or array ``theta``; raises DomainError outside [0, pi]."""
    t = np.asarray(theta, dtype=float)
    if np.any(~((t >= 0.0) & (t <= PI))):
        raise DomainError(f"angle outside [0, pi]: {theta!r}")
    out = model.evaluate(t)
    return float(out) if out.ndim == 0 else out


def singlet_model() -> Singlet:
    return Singlet()


def pr_box_model() -> PiecewiseLinear:
    nodes = [(0.0, 1.0), (PI / 6, 1.0), (PI / 4, -1.0), (PI / 3, -1.0),
             (2 * PI / 3, 1.0), (3 * PI / 4, 1.0), (5 * PI / 6, -1.0), (PI, -1.0)]
    return PiecewiseLinear(tuple(PiecewiseNode(t, v) for t, v in nodes), label="pr")


def lambda_box_model(lam: float) -> PiecewiseLinear:
    """The lambda-box for ``lam`` in [pi/6, 4 pi/9]; all of them reach CHSH = 4."""
    if not LAMBDA_MIN - 1e-15 <= lam <= LAMBDA_MAX + 1e-15:
        raise ParameterError(
            f"lambda={lam!r} outside [pi/6, 4pi/9] = [{LAMBDA_MIN:.6f}, {LAMBDA_MAX:.6f}]")
    lam = min(max(lam, LAMBDA_MIN), LAMBDA_MAX)
    nodes = [(0.0, 1.0), (PI / 18, 1.0), (PI / 6, -1.0), (lam, -1.0),
             (lam + PI / 18, 0.0), (17 * PI / 18 - lam, 0.0), (PI - lam, 1.0),
             (5 * PI / 6, 1.0), (17 * PI / 18, -1.0), (PI, -1.0)]
    return PiecewiseLinear(tuple(PiecewiseNode(t, v) for t, v in nodes),
                           label=f"lambda:{lam!r}")


def validate_model(model: CorrelationModel) -> list[str]:
    """List every invariant violation of ``model``; an empty list means valid."""
    if isinstance(model, Singlet):
        return []
    problems = []
    nodes = model.nodes
    if len(nodes) < 2:
        return [f"need at least 2 nodes, got {len(nodes)}"]
    for i, n in enumerate(nodes):
        if not (math.isfinite(n.theta) and math.isfinite(n.value)):
            problems.append(f"node {i}: non-finite entry ({n.theta!r}, {n.value!r})")
            continue
        if n.value < -1.0 or n.value > 1.0:
            problems.append(f"node {i}: value {n.value!r} outside [-1, 1]")
        if n.theta < -_DOMAIN_TOL or n.theta > PI + _DOMAIN_TOL:
            problems.append(f"node {i}: theta {n.theta!r} outside [0, pi]")
    for i in range(1, len(nodes)):
        prev, cur = nodes[i - 1], nodes[i]
        if cur.theta < prev.theta:
            problems.append(f"node {i}: theta {cur.theta!r} smaller than node {i - 1} "
                            f"theta {prev.theta!r} (nodes must be sorted)")
        elif cur.theta == prev.theta and cur.value != prev.value:
            problems.append(f"node {i}: discontinuity at theta {cur.theta!r} "
                            f"(values {prev.value!r} and {cur.value!r})")
    if abs(nodes[0].theta) > _DOMAIN_TOL:
        problems.append(f"domain not covered: first theta is {nodes[0].theta!r}, expected 0")
    if abs(nodes[-1].theta - PI) > _DOMAIN_TOL:
        problems.append(f"domain not covered: last theta is {nodes[-1].theta!r}, expected pi")
    return problems


def load_model(document) -> PiecewiseLinear:
    """Build a validated model from a JSON string or an already-parsed mapping.

    Raises ``json.JSONDecodeError`` / ``ValueError`` on malformed input and
    :class:`ModelValidationError` when the nodes break an invariant.
    """
    if isinstance(document, (str, bytes)):
        document = json.loads(document)
    if not isinstance(document, dict) or "nodes" not in document:
        raise ValueError("model document must be an object with a 'nodes' array")
    try:
        nodes = tuple(PiecewiseNode(float(t), float(v)) for t, v in document["nodes"])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"nodes must be [theta, value] pairs: {exc}") from None
    model = PiecewiseLinear(nodes, label=str(document.get("label", "custom")))
    problems = validate_model(model)
    if problems:
        raise ModelValidationError(problems)
    return model


def load_model_file(path) -> PiecewiseLinear:
    return load_model(Path(path).read_text())


def dump_model(model: PiecewiseLinear) -> str:
    return json.dumps({"label": model.label,
                       "nodes": [[n.theta, n.value] for n in model.nodes]}, indent=2)


def joint_outcome_probabilities(model: CorrelationModel, theta: float):
    """Outcome table (p++, p--, p+-, p-+) with unbiased marginals and correlation E."""
    e = eval_correlation(model, theta)
    same = (1.0 + e) / 4.0
    diff = (1.0 - e) / 4.0
    return same, same, diff, diff


def single_party_marginal(model: CorrelationModel, direction: Direction) -> float:
    """<A> for one party alone. Every model here has unbiased outcomes."""
    return 0.0
