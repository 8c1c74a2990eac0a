"""Cardinal flows and pivot measures.

A cardinal flow ``(f1, f2)`` splits a transport between planar measures into
a horizontal move (``f1``: x1 -> y1 with x2 frozen) and a vertical move
(``f2``: x2 -> y2 with y1 frozen). The two halves meet on a measure over
Y1 x X2, the pivot. Under a separable cost the cheapest cardinal flow costs
exactly the Wasserstein cost, and given a pivot the best flow through it is
assembled from independent 1D problems on the slices.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .costs import SeparableCost, eval_total
from .errors import GlueMismatch, NotIntermedium
from .measures import (
    TOL_MASS,
    DiscreteMeasure2D,
    accumulate,
    disintegrate,
    marginal,
    max_deviation,
)
from .onedim import transport_plan_1d
from .structures import CardinalFlow, PivotMeasure, TransportPlan

__all__ = [
    "CardinalFlow",
    "PivotMeasure",
    "TransportPlan",
    "FlowReport",
    "plan_cost",
    "flow_cost",
    "plan_to_flow",
    "pivot_of",
    "pivot_functional",
    "flow_from_pivot",
    "flow_to_plan",
    "validate_flow",
    "check_intermedium",
    "conditional_blocks",
    "as_pivot",
    "flows_equal",
]


def plan_cost(pi: TransportPlan, c: SeparableCost) -> float:
    return math.fsum(m * eval_total(c, k[:2], k[2:]) for k, m in pi.entries)


def flow_cost(F: CardinalFlow, c: SeparableCost) -> float:
    horizontal = math.fsum(m * c.c1(x1, y1) for (x1, _, y1), m in F.f1)
    vertical = math.fsum(m * c.c2(x2, y2) for (x2, _, y2), m in F.f2)
    return horizontal + vertical


def plan_to_flow(pi: TransportPlan) -> CardinalFlow:
    """Project a plan onto X x Y1 and X2 x Y."""
    f1 = accumulate(((x1, x2, y1), m) for (x1, x2, y1, _), m in pi.entries)
    f2 = accumulate(((x2, y1, y2), m) for (_, x2, y1, y2), m in pi.entries)
    return CardinalFlow.from_masses(f1, f2)


def pivot_of(F: CardinalFlow, tol: float = TOL_MASS) -> PivotMeasure:
    g1, g2 = F.glue_marginals()
    dev = max_deviation(g1, g2)
    if dev > tol:
        raise GlueMismatch(f"f1 and f2 disagree on Y1 x X2 by {dev:.3g}")
    return PivotMeasure(tuple(g1), tuple(g1.values()))


def as_pivot(m: DiscreteMeasure2D) -> PivotMeasure:
    """Read a planar measure as a pivot candidate: atom (a, b) becomes (y1=a, x2=b)."""
    return PivotMeasure(m.points, m.weights)


def check_intermedium(zeta: DiscreteMeasure2D, mu: DiscreteMeasure2D, nu: DiscreteMeasure2D,
                      tol: float = TOL_MASS) -> None:
    """Raise NotIntermedium unless zeta has Y1-marginal nu_1 and X2-marginal mu_2."""
    d1 = max_deviation(marginal(zeta, 1).as_dict(), marginal(nu, 1).as_dict())
    d2 = max_deviation(marginal(zeta, 2).as_dict(), marginal(mu, 2).as_dict())
    if d1 > tol or d2 > tol:
        raise NotIntermedium(f"marginal mismatch: Y1 by {d1:.3g}, X2 by {d2:.3g}")


def _slice_plans(zeta, mu, nu, c, method):
    """Optimal 1D plans on every x2-slice (stage one) and y1-slice (stage two)."""
    check_intermedium(zeta, mu, nu)
    mu_given_x2 = disintegrate(mu, 2)
    zeta_given_x2 = disintegrate(zeta, 2).as_mapping()
    zeta_given_y1 = disintegrate(zeta, 1).as_mapping()
    nu_given_y1 = disintegrate(nu, 1)

    first = []
    for (x2, w), (_, cond) in zip(mu_given_x2.base.atoms, mu_given_x2.slices):
        first.append((x2, w, transport_plan_1d(cond, zeta_given_x2[x2], c.c1, method)))
    second = []
    for (y1, w), (_, cond) in zip(nu_given_y1.base.atoms, nu_given_y1.slices):
        second.append((y1, w, transport_plan_1d(zeta_given_y1[y1], cond, c.c2, method)))
    return first, second


def pivot_functional(zeta: DiscreteMeasure2D, mu: DiscreteMeasure2D, nu: DiscreteMeasure2D,
                     c: SeparableCost, method: str = "comonotone") -> float:
    """Sliced cost of routing the transport through ``zeta``.

    Sum over x2 of mu_2(x2) * W_c1(mu | x2, zeta | x2) plus sum over y1 of
    nu_1(y1) * W_c2(zeta | y1, nu | y1). Never below W_c(mu, nu); equal to it
    exactly when ``zeta`` is a pivot.
    """
    first, second = _slice_plans(zeta, mu, nu, c, method)
    return math.fsum(
        [w * plan.cost(c.c1) for _, w, plan in first] + [w * plan.cost(c.c2) for _, w, plan in second]
    )


def flow_from_pivot(zeta: DiscreteMeasure2D, mu: DiscreteMeasure2D, nu: DiscreteMeasure2D,
                    c: SeparableCost, method: str = "comonotone") -> CardinalFlow:
    first, second = _slice_plans(zeta, mu, nu, c, method)
    f1 = {}
    for x2, w, plan in first:
        for x1, y1, m in plan.entries:
            f1[x1, x2, y1] = w * m
    f2 = {}
    for y1, w, plan in second:
        for x2, y2, m in plan.entries:
            f2[x2, y1, y2] = w * m
    return CardinalFlow.from_masses(f1, f2)


def flow_to_plan(F: CardinalFlow) -> TransportPlan:
    """Glue a flow into a plan by coupling its two conditionals independently.

    For every pivot atom (y1, x2) the law of x1 under ``f1`` and the law of y2
    under ``f2`` are combined as a product, scaled by the pivot weight.
    """
    pivot_of(F)
    left = defaultdict(list)
    right = defaultdict(list)
    right_total = defaultdict(float)
    for (x1, x2, y1), m in F.f1:
        left[x2, y1].append((x1, m))
    for (x2, y1, y2), m in F.f2:
        right[x2, y1].append((y2, m))
        right_total[x2, y1] += m
    entries = {}
    for (x2, y1), xs in left.items():
        total = right_total[x2, y1]
        for y2, m2 in right[x2, y1]:
            share = m2 / total
            for x1, m1 in xs:
                entries[x1, x2, y1, y2] = m1 * share
    return TransportPlan.from_masses(entries)


def conditional_blocks(pi: TransportPlan) -> dict[tuple[float, float], np.ndarray]:
    """For each (x2, y1), the matrix of plan masses indexed by (x1, y2)."""
    groups = defaultdict(dict)
    for (x1, x2, y1, y2), m in pi.entries:
        groups[x2, y1][x1, y2] = m
    blocks = {}
    for key, cells in groups.items():
        rows = sorted({k[0] for k in cells})
        cols = sorted({k[1] for k in cells})
        M = np.zeros((len(rows), len(cols)))
        for (x1, y2), m in cells.items():
            M[rows.index(x1), cols.index(y2)] = m
        blocks[key] = M
    return blocks


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    max_deviation: float


@dataclass(frozen=True)
class FlowReport:
    checks: tuple[ConditionCheck, ...]

    @property
    def ok(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def __getitem__(self, name: str) -> ConditionCheck:
        for ch in self.checks:
            if ch.name == name:
                return ch
        raise KeyError(name)

    def lines(self) -> list[str]:
        return [
            f"{ch.name}: {'pass' if ch.passed else 'FAIL'} (max deviation {ch.max_deviation:.3g})"
            for ch in self.checks
        ]


def validate_flow(F: CardinalFlow, mu: DiscreteMeasure2D, nu: DiscreteMeasure2D,
                  tol: float = TOL_MASS) -> FlowReport:
    """Check the three defining conditions of a cardinal flow between mu and nu.

    ``source``: f1 projected on X equals mu; ``target``: f2 projected on Y
    equals nu; ``glue``: both agree on Y1 x X2.
    """
    src = accumulate(((x1, x2), m) for (x1, x2, _), m in F.f1)
    tgt = accumulate(((y1, y2), m) for (_, y1, y2), m in F.f2)
    g1, g2 = F.glue_marginals()
    checks = []
    for name, dev in (
        ("source", max_deviation(src, mu.as_dict())),
        ("target", max_deviation(tgt, nu.as_dict())),
        ("glue", max_deviation(g1, g2)),
    ):
        checks.append(ConditionCheck(name, dev <= tol, dev))
    nonneg = all(m > 0 for _, m in F.f1 + F.f2)
    checks.append(ConditionCheck("positive", nonneg, 0.0))
    return FlowReport(tuple(checks))


def flows_equal(F: CardinalFlow, G: CardinalFlow, tol: float = TOL_MASS) -> bool:
    return (
        max_deviation(F.f1_dict(), G.f1_dict()) <= tol
        and max_deviation(F.f2_dict(), G.f2_dict()) <= tol
    )
