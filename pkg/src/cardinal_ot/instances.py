"""Random test instances, all driven by a numpy Generator for reproducibility."""

from __future__ import annotations

import numpy as np

from .closedform import LineSpec
from .measures import DiscreteMeasure1D, DiscreteMeasure2D


def random_weights(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.dirichlet(np.ones(n))


def random_measure_2d(rng: np.random.Generator, max_atoms: int = 8, low: float = 0.0, high: float = 10.0,
                      grid: bool = False) -> DiscreteMeasure2D:
    """Up to ``max_atoms`` atoms, uniform coordinates, Dirichlet weights.

    With ``grid=True`` coordinates are integers so that atoms share rows and
    columns and the conditional slices carry several atoms.
    """
    n = int(rng.integers(1, max_atoms + 1))
    if grid:
        pts = rng.integers(int(low), int(high) + 1, size=(n, 2)).astype(float)
    else:
        pts = rng.uniform(low, high, size=(n, 2))
    return DiscreteMeasure2D(tuple(map(tuple, pts.tolist())), tuple(random_weights(rng, n).tolist()))


def random_measure_1d(rng: np.random.Generator, max_atoms: int = 12, low: float = 0.0,
                      high: float = 10.0) -> DiscreteMeasure1D:
    n = int(rng.integers(1, max_atoms + 1))
    return DiscreteMeasure1D(tuple(rng.uniform(low, high, n).tolist()), tuple(random_weights(rng, n).tolist()))


def random_pair(rng: np.random.Generator, max_atoms: int = 8, grid: bool = False):
    return random_measure_2d(rng, max_atoms, grid=grid), random_measure_2d(rng, max_atoms, grid=grid)


def random_axis_measure(rng: np.random.Generator, max_atoms: int = 8) -> DiscreteMeasure2D:
    """Random measure on the horizontal axis {x2 = 0}."""
    n = int(rng.integers(1, max_atoms + 1))
    xs = rng.uniform(0.0, 10.0, n)
    return DiscreteMeasure2D(tuple((float(x), 0.0) for x in xs), tuple(random_weights(rng, n).tolist()))


def random_line(rng: np.random.Generator) -> LineSpec:
    theta = rng.uniform(0.0, 2 * np.pi)
    return LineSpec(np.cos(theta), np.sin(theta), rng.uniform(-5.0, 5.0))


def random_line_measure(rng: np.random.Generator, line: LineSpec, max_atoms: int = 8) -> DiscreteMeasure2D:
    """Random measure on ``line``, parametrized as foot-of-normal plus a multiple of the direction."""
    n = int(rng.integers(1, max_atoms + 1))
    ts = rng.uniform(-5.0, 5.0, n)
    foot = np.array([line.a, line.b]) * line.q
    direction = np.array([line.b, -line.a])
    pts = foot[None, :] + ts[:, None] * direction[None, :]
    return DiscreteMeasure2D(tuple(map(tuple, pts.tolist())), tuple(random_weights(rng, n).tolist()))
