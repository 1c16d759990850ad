"""Measurement directions on the unit sphere and reproducible sampling of them.

Randomness is counter-based: draw ``k`` of sample ``i`` under seed ``s`` is a
pure function of ``(s, i, k)``, obtained by pushing the triple through the
SplitMix64 finalizer. Nothing is shared between samples, so any partition of
the index range over workers reproduces the same configurations bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MASK64 = (1 << 64) - 1

# Uniform draws consumed per direction (u = cos(polar), azimuth).
DRAWS_PER_DIRECTION = 2


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer, elementwise on uint64 arrays (wrapping arithmetic)."""
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


def uniform_draws(seed: int, indices: np.ndarray, count: int) -> np.ndarray:
    """Return a ``(len(indices), count)`` array of uniforms in ``[0, 1)``.

    Row ``r`` holds draws ``0..count-1`` of sample ``indices[r]``. Draw ``k``
    is the same no matter how many draws are requested, so a caller asking for
    fewer draws sees a prefix of a longer request.
    """
    idx = np.asarray(indices, dtype=_U64)
    with np.errstate(over="ignore"):
        key = _mix64(_U64(seed & _MASK64) * _GOLDEN + _U64(1))
        base = _mix64(key ^ _mix64((idx + _U64(1)) * _GOLDEN))
        offsets = (np.arange(count, dtype=_U64) + _U64(1)) * _GOLDEN
        bits = _mix64(base[:, None] + offsets[None, :])
    return (bits >> _U64(11)).astype(np.float64) * (1.0 / (1 << 53))


def directions_from_uniforms(u_cos: np.ndarray, u_phi: np.ndarray) -> np.ndarray:
    """Map pairs of uniforms to unit vectors, shape ``(..., 3)``.

    Inverse-CDF construction: ``z = 2u - 1`` is uniform on [-1, 1) and the
    azimuth ``2 pi u'`` is uniform on [0, 2 pi).
    """
    z = 2.0 * u_cos - 1.0
    phi = 2.0 * np.pi * u_phi
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)


def sample_directions(seed: int, start: int, count: int, slots: int) -> np.ndarray:
    """Directions for samples ``start..start+count-1``: shape ``(count, slots, 3)``."""
    u = uniform_draws(seed, np.arange(start, start + count, dtype=np.uint64),
                      slots * DRAWS_PER_DIRECTION)
    u = u.reshape(count, slots, DRAWS_PER_DIRECTION)
    return directions_from_uniforms(u[..., 0], u[..., 1])


def pair_angles(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorised :func:`angle_between` over the last axis."""
    dot = u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] + u[..., 2] * v[..., 2]
    return np.arccos(np.clip(dot, -1.0, 1.0))


# Free directions (``a`` is pinned to z) in the order they are drawn, and the
# (first, second) pairs each functional consumes. Index -1 stands for ``a``.
CHSH_SLOTS = ("b", "aP", "bP")
CHSH_PAIRS = ((-1, 0), (-1, 2), (1, 0), (1, 2))
I3322_SLOTS = ("aP", "aPP", "b", "bP", "bPP")
I3322_PAIRS = ((-1, 2), (-1, 3), (-1, 4), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3))


def batch_pair_angles(free: np.ndarray, pairs) -> np.ndarray:
    """Pair angles for a batch of configs; ``free`` has shape ``(n, slots, 3)``.

    Returns shape ``(n, len(pairs))``. Angles against the pinned axis reduce
    to ``arccos(z)``.
    """
    out = np.empty((free.shape[0], len(pairs)))
    for j, (i, k) in enumerate(pairs):
        if i < 0:
            out[:, j] = np.arccos(np.clip(free[:, k, 2], -1.0, 1.0))
        else:
            out[:, j] = pair_angles(free[:, i], free[:, k])
    return out


@dataclass(frozen=True)
class Direction:
    """A measurement axis: a unit vector on the 2-sphere."""

    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, v) -> "Direction":
        v = np.asarray(v, dtype=float)
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def from_polar(cls, polar: float, azimuth: float = 0.0) -> "Direction":
        s = math.sin(polar)
        return cls(s * math.cos(azimuth), s * math.sin(azimuth), math.cos(polar))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


Z_AXIS = Direction(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class RandomStream:
    """Position in the counter-based random sequence: a seed and a sample index.

    ``draw(k)`` is the k-th uniform belonging to this sample. Streams are plain
    values; advancing one returns a new stream.
    """

    seed: int
    index: int = 0

    def draw(self, k: int) -> float:
        return float(uniform_draws(self.seed, np.array([self.index]), k + 1)[0, k])

    def draws(self, count: int) -> np.ndarray:
        return uniform_draws(self.seed, np.array([self.index]), count)[0]

    def advance(self, k: int = 1) -> "RandomStream":
        return RandomStream(self.seed, self.index + k)


@dataclass(frozen=True)
class ChshConfig:
    a: Direction
    b: Direction
    aP: Direction
    bP: Direction

    def angles(self) -> tuple[float, float, float, float]:
        """(theta_ab, theta_ab', theta_a'b, theta_a'b')"""
        return (angle_between(self.a, self.b), angle_between(self.a, self.bP),
                angle_between(self.aP, self.b), angle_between(self.aP, self.bP))


@dataclass(frozen=True)
class I3322Config:
    a: Direction
    aP: Direction
    aPP: Direction
    b: Direction
    bP: Direction
    bPP: Direction

    def angles(self) -> tuple[float, ...]:
        """Pair angles in the order the 3322 functional consumes them.

        (a,b), (a,b'), (a,b''), (a',b), (a',b'), (a',b''), (a'',b), (a'',b')
        """
        pairs = [(self.a, self.b), (self.a, self.bP), (self.a, self.bPP),
                 (self.aP, self.b), (self.aP, self.bP), (self.aP, self.bPP),
                 (self.aPP, self.b), (self.aPP, self.bP)]
        return tuple(angle_between(u, v) for u, v in pairs)


def angle_between(u: Direction, v: Direction) -> float:
    """Angle in [0, pi] between two unit vectors; the cosine is clamped first."""
    dot = u.x * v.x + u.y * v.y + u.z * v.z
    return math.acos(min(1.0, max(-1.0, dot)))


def config_from_free(slots, free: np.ndarray):
    """Config dataclass for one row of free directions, ``a`` set to z."""
    dirs = {name: Direction.from_array(v) for name, v in zip(slots, free)}
    if tuple(slots) == CHSH_SLOTS:
        return ChshConfig(a=Z_AXIS, **dirs)
    return I3322Config(a=Z_AXIS, **dirs)


def sample_direction(stream: RandomStream, slot: int = 0) -> Direction:
    """Uniform direction built from draws ``2*slot`` and ``2*slot + 1`` of ``stream``."""
    u = stream.draws(DRAWS_PER_DIRECTION * (slot + 1))
    v = directions_from_uniforms(u[2 * slot], u[2 * slot + 1])
    return Direction.from_array(v)


def sample_chsh_config(stream: RandomStream) -> ChshConfig:
    """``a`` pinned to z; ``b``, ``a'``, ``b'`` drawn from slots 0, 1, 2."""
    free = sample_directions(stream.seed, stream.index, 1, len(CHSH_SLOTS))[0]
    return config_from_free(CHSH_SLOTS, free)


def sample_i3322_config(stream: RandomStream) -> I3322Config:
    """``a`` pinned to z; ``a', a'', b, b', b''`` drawn from slots 0..4."""
    free = sample_directions(stream.seed, stream.index, 1, len(I3322_SLOTS))[0]
    return config_from_free(I3322_SLOTS, free)


def coplanar_chsh_config(alpha_a: float, alpha_b: float,
                         alpha_aP: float, alpha_bP: float) -> ChshConfig:
    """CHSH configuration in the x-z plane, each axis at polar angle alpha."""
    return ChshConfig(a=Direction.from_polar(alpha_a), b=Direction.from_polar(alpha_b),
                      aP=Direction.from_polar(alpha_aP), bP=Direction.from_polar(alpha_bP))
