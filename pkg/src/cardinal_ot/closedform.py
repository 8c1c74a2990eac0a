"""Closed-form pivots and flows.

When one of the marginals mu_2 or nu_1 is a single point the set of
intermedium measures has one element, which is then the pivot. In particular
a source measure supported on the horizontal axis has pivot nu_1 x delta_0,
and the optimal flow is a quantile coupling of mu_1 and nu_1 followed by
vertical moves out of 0. For the squared Euclidean cost a rotation reduces
any line to the horizontal axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .cardinal import flow_cost, flow_to_plan, plan_cost
from .costs import SeparableCost
from .errors import NotOnLine
from .measures import DiscreteMeasure1D, DiscreteMeasure2D, disintegrate, marginal, product_measure
from .onedim import comonotone_plan
from .structures import CardinalFlow, PivotMeasure, TransportPlan

LINE_TOL = 1e-9


@dataclass(frozen=True)
class LineSpec:
    """The line ``a*x1 + b*x2 = q``, normalized to a unit normal whose first nonzero entry is positive."""

    a: float
    b: float
    q: float

    def __post_init__(self):
        a, b, q = float(self.a), float(self.b), float(self.q)
        norm = math.hypot(a, b)
        if norm == 0.0:
            raise ValueError("line needs (a, b) != (0, 0)")
        sign = 1.0 if (a > 0 or (a == 0 and b > 0)) else -1.0
        object.__setattr__(self, "a", sign * a / norm)
        object.__setattr__(self, "b", sign * b / norm)
        object.__setattr__(self, "q", sign * q / norm)

    @classmethod
    def parse(cls, text: str) -> LineSpec:
        parts = [float(t) for t in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"line spec must be a,b,q, got {text!r}")
        return cls(*parts)

    def residual(self, p) -> float:
        return self.a * p[0] + self.b * p[1] - self.q

    def rotation(self) -> np.ndarray:
        """Rotation taking the direction (b, -a) to (1, 0) and the normal to (0, 1)."""
        return np.array([[self.b, -self.a], [self.a, self.b]])


def degenerate_pivot(mu: DiscreteMeasure2D, nu: DiscreteMeasure2D) -> Optional[PivotMeasure]:
    """The pivot when mu_2 or nu_1 is a Dirac mass, else None."""
    mu2 = marginal(mu, 2)
    nu1 = marginal(nu, 1)
    if len(mu2) == 1 or len(nu1) == 1:
        zeta = product_measure(nu1, mu2)
        return PivotMeasure(zeta.points, zeta.weights)
    return None


class LineFlow(NamedTuple):
    flow: CardinalFlow
    cost: float


def line_flow(mu: DiscreteMeasure2D, nu: DiscreteMeasure2D, c: SeparableCost) -> LineFlow:
    """Optimal cardinal flow from a measure on {x2 = 0}.

    ``f1`` is the quantile coupling of mu_1 and nu_1 at height 0; ``f2`` lifts
    each column y1 from 0 to the conditional nu | y1.
    """
    off = [p for p in mu.points if p[1] != 0.0]
    if off:
        raise NotOnLine(f"{len(off)} atom(s) of mu lie off the axis x2 = 0, e.g. {off[0]}")
    f1 = {(x1, 0.0, y1): m for x1, y1, m in comonotone_plan(marginal(mu, 1), marginal(nu, 1)).entries}
    f2 = {}
    nu_given_y1 = disintegrate(nu, 1)
    origin = DiscreteMeasure1D.dirac(0.0)
    for (y1, w), (_, cond) in zip(nu_given_y1.base.atoms, nu_given_y1.slices):
        for _, y2, m in comonotone_plan(origin, cond).entries:
            f2[0.0, y1, y2] = w * m
    flow = CardinalFlow.from_masses(f1, f2)
    return LineFlow(flow, flow_cost(flow, c))


class LinePlan(NamedTuple):
    plan: TransportPlan
    cost: float


def line_flow_general(mu: DiscreteMeasure2D, line: LineSpec, nu: DiscreteMeasure2D) -> LinePlan:
    """Optimal plan for the squared Euclidean cost from a measure on an arbitrary line.

    Both measures are moved by the rigid motion sending the line to {x2 = 0},
    solved there, and the plan is read back on the original atoms.
    """
    far = max(abs(line.residual(p)) for p in mu.points)
    if far > LINE_TOL:
        raise NotOnLine(f"an atom of mu lies {far:.3g} away from the line")
    R = line.rotation()
    shift = np.array([0.0, line.q])

    def move(p):
        z = R @ np.asarray(p, dtype=float) - shift
        return float(z[0]), float(z[1])

    back_mu = {}
    for p in mu.points:
        z = move(p)
        back_mu[z[0], 0.0] = p
    back_nu = {move(p): p for p in nu.points}
    if len(back_mu) != len(mu) or len(back_nu) != len(nu):
        raise NotOnLine("rotation merged distinct atoms; coordinates too close to resolve")
    mu_w, nu_w = mu.as_dict(), nu.as_dict()
    mu_r = DiscreteMeasure2D(tuple(back_mu), tuple(mu_w[p] for p in back_mu.values()))
    nu_r = DiscreteMeasure2D(tuple(back_nu), tuple(nu_w[p] for p in back_nu.values()))

    squared = SeparableCost.power(2, 2)
    plan_r = flow_to_plan(line_flow(mu_r, nu_r, squared).flow)
    entries = {}
    for (x1, x2, y1, y2), m in plan_r.entries:
        entries[back_mu[x1, x2] + back_nu[y1, y2]] = m
    plan = TransportPlan.from_masses(entries)
    return LinePlan(plan, plan_cost(plan, squared))
