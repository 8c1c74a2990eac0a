"""Sparse couplings: transport plans, cardinal flows and pivot measures.

Coordinates are stored as plain tuples and compared exactly; they always come
from input atoms, never from arithmetic. Masses are strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .measures import DiscreteMeasure2D, accumulate

Key3 = tuple[float, float, float]
Key4 = tuple[float, float, float, float]


def _sorted_entries(masses: dict) -> tuple:
    return tuple((k, float(masses[k])) for k in sorted(masses) if masses[k] > 0.0)


@dataclass(frozen=True)
class TransportPlan:
    """Coupling on (X1 x X2) x (Y1 x Y2); entries are ``((x1, x2, y1, y2), mass)``."""

    entries: tuple[tuple[Key4, float], ...]

    @classmethod
    def from_masses(cls, items: dict | Iterable[tuple[Key4, float]]) -> TransportPlan:
        items = items.items() if isinstance(items, dict) else items
        merged = accumulate((tuple(float(v) for v in k), m) for k, m in items)
        return cls(_sorted_entries(merged))

    def as_dict(self) -> dict[Key4, float]:
        return dict(self.entries)

    def source_marginal(self) -> dict[tuple[float, float], float]:
        return accumulate(((k[0], k[1]), m) for k, m in self.entries)

    def target_marginal(self) -> dict[tuple[float, float], float]:
        return accumulate(((k[2], k[3]), m) for k, m in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class CardinalFlow:
    """Pair of sparse measures: ``f1`` on X1 x X2 x Y1, ``f2`` on X2 x Y1 x Y2.

    ``f1`` moves the first coordinate while keeping ``x2``; ``f2`` then moves the
    second coordinate while keeping ``y1``.
    """

    f1: tuple[tuple[Key3, float], ...]
    f2: tuple[tuple[Key3, float], ...]

    @classmethod
    def from_masses(cls, f1, f2) -> CardinalFlow:
        def norm(items):
            items = items.items() if isinstance(items, dict) else items
            return _sorted_entries(accumulate((tuple(float(v) for v in k), m) for k, m in items))

        return cls(norm(f1), norm(f2))

    def f1_dict(self) -> dict[Key3, float]:
        return dict(self.f1)

    def f2_dict(self) -> dict[Key3, float]:
        return dict(self.f2)

    def glue_marginals(self) -> tuple[dict, dict]:
        """The (y1, x2) marginals of ``f1`` and of ``f2``."""
        g1 = accumulate(((k[2], k[1]), m) for k, m in self.f1)
        g2 = accumulate(((k[1], k[0]), m) for k, m in self.f2)
        return g1, g2


class PivotMeasure(DiscreteMeasure2D):
    """Probability measure on Y1 x X2; atoms are ``(y1, x2)`` pairs."""

    def as_measure(self) -> DiscreteMeasure2D:
        """The same atoms read as points of the common plane, ``(y1, x2)``."""
        return DiscreteMeasure2D(self.points, self.weights)
