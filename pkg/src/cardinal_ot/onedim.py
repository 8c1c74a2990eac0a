"""Exact transport between measures on the real line.

For a convex radial cost the co-monotone (quantile) coupling is optimal. With
finitely many atoms both quantile functions are step functions, so pairing
them is a merge of the two cumulative-weight sequences.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .costs import ConvexRadialCost
from .errors import DomainError
from .measures import TOL_MASS, DiscreteMeasure1D, accumulate, max_deviation

# cumulative weights closer than this are treated as the same breakpoint
TIE_EPS = 1e-15


@dataclass(frozen=True)
class Plan1D:
    """Coupling of two 1D measures; entries are ``(source, target, mass)``."""

    entries: tuple[tuple[float, float, float], ...]

    def source_marginal(self) -> dict:
        return accumulate((x, m) for x, _, m in self.entries)

    def target_marginal(self) -> dict:
        return accumulate((y, m) for _, y, m in self.entries)

    def is_coupling(self, mu: DiscreteMeasure1D, nu: DiscreteMeasure1D, tol: float = TOL_MASS) -> bool:
        return (
            max_deviation(self.source_marginal(), mu.as_dict()) <= tol
            and max_deviation(self.target_marginal(), nu.as_dict()) <= tol
        )

    def crossings(self) -> int:
        """Number of entry pairs with x < x' but y > y'."""
        count = 0
        for k, (x, y, _) in enumerate(self.entries):
            for x2, y2, _ in self.entries[k + 1:]:
                if (x < x2 and y > y2) or (x > x2 and y < y2):
                    count += 1
        return count

    def cost(self, c: ConvexRadialCost) -> float:
        return math.fsum(m * c(x, y) for x, y, m in self.entries)


def cdf(m: DiscreteMeasure1D, t: float) -> float:
    return min(m.mass_below(t), 1.0)


def quantile(m: DiscreteMeasure1D, s: float) -> float:
    """Pseudo-inverse CDF, ``inf{t : F(t) >= s}`` for ``0 < s <= 1``."""
    if not 0.0 < s <= 1.0:
        raise DomainError(f"quantile level must lie in (0, 1], got {s!r}")
    k = bisect_left(m.cumulative, s)
    return m.positions[min(k, len(m) - 1)]


def comonotone_plan(mu: DiscreteMeasure1D, nu: DiscreteMeasure1D) -> Plan1D:
    ca, cb = list(mu.cumulative), list(nu.cumulative)
    ca[-1] = cb[-1] = 1.0
    entries = []
    i = j = 0
    level = 0.0
    while i < len(ca) and j < len(cb):
        nxt = min(ca[i], cb[j])
        mass = nxt - level
        if mass > 0.0:
            entries.append((mu.positions[i], nu.positions[j], mass))
        level = nxt
        if ca[i] - nxt <= TIE_EPS:
            i += 1
        if cb[j] - nxt <= TIE_EPS:
            j += 1
    return Plan1D(tuple(entries))


def transport_plan_1d(mu: DiscreteMeasure1D, nu: DiscreteMeasure1D, c: Optional[ConvexRadialCost] = None,
                      method: str = "comonotone") -> Plan1D:
    """Optimal 1D plan, by quantile merge or (``method="lp"``) by the bipartite oracle.

    The LP route is for custom costs whose convexity is in doubt.
    """
    if method == "comonotone":
        return comonotone_plan(mu, nu)
    if method != "lp":
        raise ValueError(f"unknown 1D method {method!r}")
    from .oracle import solve_transportation

    C = np.array([[c(x, y) for y in nu.positions] for x in mu.positions])
    X = solve_transportation(np.array(mu.weights), np.array(nu.weights), C).plan
    entries = [
        (mu.positions[i], nu.positions[j], float(X[i, j])) for i, j in zip(*np.nonzero(X))
    ]
    return Plan1D(tuple(entries))


def w_1d(mu: DiscreteMeasure1D, nu: DiscreteMeasure1D, c: ConvexRadialCost) -> float:
    return comonotone_plan(mu, nu).cost(c)


def w1_cdf(mu: DiscreteMeasure1D, nu: DiscreteMeasure1D) -> float:
    """W1 as the area between the two CDFs, summed exactly over merged breakpoints."""
    ts = sorted(set(mu.positions) | set(nu.positions))
    return math.fsum(
        abs(cdf(mu, t0) - cdf(nu, t0)) * (t1 - t0) for t0, t1 in zip(ts[:-1], ts[1:])
    )
