"""Finitely supported probability measures on the line and on the plane.

Measures are immutable. Atoms with identical coordinates are merged on exact
equality, zero-weight atoms are dropped and the total mass must already be 1
up to ``TOL_MASS``; totals off by more than ``RESCALE_TOL`` are rescaled to 1.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyMeasure, LengthMismatch, UnbalancedMass

TOL_MASS = 1e-9
# totals closer to 1 than this are kept as is, so parsing an emitted measure is exact
RESCALE_TOL = 1e-12

Point = tuple[float, float]


def accumulate(items: Iterable[tuple[tuple, float]]) -> dict[tuple, float]:
    """Sum masses of identical keys."""
    acc: dict[tuple, float] = defaultdict(float)
    for key, mass in items:
        acc[key] += mass
    return dict(acc)


def max_deviation(a: dict, b: dict) -> float:
    """Largest atom-wise absolute difference between two sparse measures."""
    keys = set(a) | set(b)
    if not keys:
        return 0.0
    return max(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys)


def _normalize(weights: dict) -> dict:
    weights = {k: float(w) for k, w in weights.items() if w > 0.0}
    if not weights:
        raise EmptyMeasure("measure has no positive weight")
    total = math.fsum(weights.values())
    if abs(total - 1.0) > TOL_MASS:
        raise UnbalancedMass(f"total mass {total!r} differs from 1 by more than {TOL_MASS}")
    if abs(total - 1.0) <= RESCALE_TOL:
        return weights
    return {k: w / total for k, w in weights.items()}


@dataclass(frozen=True)
class DiscreteMeasure1D:
    """Probability measure on the real line, atoms sorted by position."""

    positions: tuple[float, ...]
    weights: tuple[float, ...]
    _cumulative: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.positions) != len(self.weights):
            raise LengthMismatch("positions and weights differ in length")
        merged = _normalize(accumulate(((float(x),), w) for x, w in zip(self.positions, self.weights)))
        keys = sorted(merged)
        object.__setattr__(self, "positions", tuple(k[0] for k in keys))
        object.__setattr__(self, "weights", tuple(merged[k] for k in keys))
        object.__setattr__(self, "_cumulative", tuple(np.cumsum(self.weights).tolist()))

    @classmethod
    def dirac(cls, x: float) -> DiscreteMeasure1D:
        return cls((x,), (1.0,))

    @classmethod
    def from_dict(cls, weights: dict[float, float]) -> DiscreteMeasure1D:
        return cls(tuple(weights), tuple(weights.values()))

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.positions, self.weights))

    @property
    def cumulative(self) -> tuple[float, ...]:
        return self._cumulative

    def __len__(self) -> int:
        return len(self.positions)

    def as_dict(self) -> dict[float, float]:
        return dict(zip(self.positions, self.weights))

    def shift(self, t: float) -> DiscreteMeasure1D:
        return DiscreteMeasure1D(tuple(x + t for x in self.positions), self.weights)

    def mass_below(self, t: float) -> float:
        """Total weight of atoms at positions <= t."""
        k = bisect_right(self.positions, t)
        return self._cumulative[k - 1] if k else 0.0


@dataclass(frozen=True)
class DiscreteMeasure2D:
    """Probability measure on a product X1 x X2 of two real lines."""

    points: tuple[Point, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) != len(self.weights):
            raise LengthMismatch("points and weights differ in length")
        merged = _normalize(
            accumulate(((float(p[0]), float(p[1])), w) for p, w in zip(self.points, self.weights))
        )
        keys = sorted(merged)
        object.__setattr__(self, "points", tuple(keys))
        object.__setattr__(self, "weights", tuple(merged[k] for k in keys))

    @classmethod
    def from_dict(cls, weights: dict[Point, float]):
        return cls(tuple(weights), tuple(weights.values()))

    @property
    def atoms(self) -> list[tuple[Point, float]]:
        return list(zip(self.points, self.weights))

    def __len__(self) -> int:
        return len(self.points)

    def as_dict(self) -> dict[Point, float]:
        return dict(zip(self.points, self.weights))

    def support(self, axis: int) -> tuple[float, ...]:
        """Sorted distinct values of one coordinate."""
        _check_axis(axis)
        return tuple(sorted({p[axis - 1] for p in self.points}))


@dataclass(frozen=True)
class Disintegration:
    """A 2D measure split into its marginal on one axis and the conditionals on the other."""

    axis: int
    base: DiscreteMeasure1D
    slices: tuple[tuple[float, DiscreteMeasure1D], ...]

    def conditional(self, v: float) -> DiscreteMeasure1D:
        for pos, cond in self.slices:
            if pos == v:
                return cond
        raise KeyError(v)

    def as_mapping(self) -> dict[float, DiscreteMeasure1D]:
        return dict(self.slices)

    def reassemble(self) -> dict[Point, float]:
        """Sum of base weight times conditional, as a sparse 2D measure."""
        out = {}
        for (v, bw), (pos, cond) in zip(self.base.atoms, self.slices):
            for u, cw in cond.atoms:
                key = (v, u) if self.axis == 1 else (u, v)
                out[key] = bw * cw
        return out


def _check_axis(axis: int) -> None:
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis!r}")


def make_measure_1d(positions: Sequence[float], weights: Sequence[float]) -> DiscreteMeasure1D:
    if len(positions) != len(weights):
        raise LengthMismatch(f"{len(positions)} positions but {len(weights)} weights")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    return DiscreteMeasure1D(tuple(positions), tuple(weights))


def make_measure_2d(points: Sequence[Sequence[float]], weights: Sequence[float]) -> DiscreteMeasure2D:
    if len(points) != len(weights):
        raise LengthMismatch(f"{len(points)} points but {len(weights)} weights")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    return DiscreteMeasure2D(tuple((p[0], p[1]) for p in points), tuple(weights))


def marginal(m: DiscreteMeasure2D, axis: int) -> DiscreteMeasure1D:
    _check_axis(axis)
    acc = accumulate(((p[axis - 1],), w) for p, w in m.atoms)
    return DiscreteMeasure1D(tuple(k[0] for k in acc), tuple(acc.values()))


def disintegrate(m: DiscreteMeasure2D, axis: int) -> Disintegration:
    """Condition ``m`` on coordinate ``axis``.

    Each slice is the law of the other coordinate given the value ``v`` of
    ``axis``; weights inside a slice are divided by the base weight of ``v``.
    """
    _check_axis(axis)
    other = 2 - axis
    groups: dict[float, dict[float, float]] = defaultdict(dict)
    for p, w in m.atoms:
        groups[p[axis - 1]][p[other]] = w
    base = marginal(m, axis)
    slices = []
    for v, bw in base.atoms:
        g = groups[v]
        total = math.fsum(g.values())
        slices.append((v, DiscreteMeasure1D(tuple(g), tuple(w / total for w in g.values()))))
    return Disintegration(axis, base, tuple(slices))


def pushforward_affine(m: DiscreteMeasure2D, A, b) -> DiscreteMeasure2D:
    A = np.asarray(A, dtype=float).reshape(2, 2)
    b = np.asarray(b, dtype=float).reshape(2)
    pts = np.asarray(m.points, dtype=float) @ A.T + b
    return DiscreteMeasure2D(tuple(map(tuple, pts.tolist())), m.weights)


def product_measure(a: DiscreteMeasure1D, b: DiscreteMeasure1D) -> DiscreteMeasure2D:
    pts, ws = [], []
    for x, wx in a.atoms:
        for y, wy in b.atoms:
            pts.append((x, y))
            ws.append(wx * wy)
    return DiscreteMeasure2D(tuple(pts), tuple(ws))

