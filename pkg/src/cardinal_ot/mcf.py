"""Optimal cardinal flows as an uncapacitated min-cost-flow problem.

The network has three layers. Each atom of mu is a source; each pair
(y1, x2) in supp(nu_1) x supp(mu_2) is a transit node; each atom of nu is a
sink. A source (x1, x2) reaches the transit nodes (y1, x2) that share its x2
at cost c1(x1, y1), and a transit node (y1, x2) reaches the sinks (y1, y2)
that share its y1 at cost c2(x2, y2). Feasible flows are exactly the cardinal
flows, so the min-cost flow is an optimal cardinal flow and its throughput on
the transit layer is a pivot measure.

Solved by successive shortest paths with node potentials (Dijkstra on
reduced costs). Final potentials are returned as an optimality certificate.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .costs import SeparableCost
from .errors import Infeasible, NumericalBreakdown
from .measures import TOL_MASS, DiscreteMeasure2D, marginal
from .structures import CardinalFlow, PivotMeasure

SNAP = 1e-12
REDUCED_COST_TOL = 1e-9

SOURCE, TRANSIT, SINK = "source", "transit", "sink"


@dataclass(frozen=True)
class FlowNetwork:
    sources: tuple[tuple[float, float], ...]
    supplies: tuple[float, ...]
    transit: tuple[tuple[float, float], ...]  # (y1, x2)
    sinks: tuple[tuple[float, float], ...]
    demands: tuple[float, ...]
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    costs: tuple[float, ...]

    @property
    def n_nodes(self) -> int:
        return len(self.sources) + len(self.transit) + len(self.sinks)

    @property
    def n_arcs(self) -> int:
        return len(self.tails)

    def node_kind(self, v: int) -> str:
        if v < len(self.sources):
            return SOURCE
        if v < len(self.sources) + len(self.transit):
            return TRANSIT
        return SINK

    def node_label(self, v: int) -> tuple[float, float]:
        s, t = len(self.sources), len(self.transit)
        if v < s:
            return self.sources[v]
        if v < s + t:
            return self.transit[v - s]
        return self.sinks[v - s - t]

    def balance(self) -> np.ndarray:
        """Supply (+) or demand (-) per node."""
        return np.concatenate([self.supplies, np.zeros(len(self.transit)), -np.asarray(self.demands)])

    def layer_arc_counts(self) -> tuple[int, int]:
        s = len(self.sources)
        first = sum(1 for t in self.tails if t < s)
        return first, self.n_arcs - first

    def to_dot(self) -> str:
        lines = ["digraph cardinal_flow {", "  rankdir=LR;"]
        for v in range(self.n_nodes):
            kind = self.node_kind(v)
            label = "({:g},{:g})".format(*self.node_label(v))
            bal = self.balance()[v]
            shape = {"source": "box", "transit": "triangle", "sink": "ellipse"}[kind]
            lines.append(f'  n{v} [label="{kind} {label}\\n{bal:g}", shape={shape}];')
        for t, h, c in zip(self.tails, self.heads, self.costs):
            lines.append(f'  n{t} -> n{h} [label="{c:g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_network(mu: DiscreteMeasure2D, nu: DiscreteMeasure2D, c: SeparableCost) -> FlowNetwork:
    y1s = marginal(nu, 1).positions
    x2s = marginal(mu, 2).positions
    transit = tuple((y1, x2) for y1 in y1s for x2 in x2s)
    s, t = len(mu), len(transit)
    transit_index = {p: s + k for k, p in enumerate(transit)}
    tails, heads, costs = [], [], []
    for i, (x1, x2) in enumerate(mu.points):
        for y1 in y1s:
            tails.append(i)
            heads.append(transit_index[y1, x2])
            costs.append(c.c1(x1, y1))
    for (y1, x2), v in transit_index.items():
        for j, (yy1, y2) in enumerate(nu.points):
            if yy1 == y1:
                tails.append(v)
                heads.append(s + t + j)
                costs.append(c.c2(x2, y2))
    return FlowNetwork(
        mu.points, mu.weights, transit, nu.points, nu.weights, tuple(tails), tuple(heads), tuple(costs)
    )


@dataclass(frozen=True)
class FlowSolution:
    network: FlowNetwork
    arc_flow: np.ndarray
    cost: float
    potentials: np.ndarray
    augmentations: int
    # augmentations whose bottleneck was a supply or demand; the rest cancel flow on some arc
    exhausting: int = 0

    def reduced_costs(self) -> np.ndarray:
        tails = np.asarray(self.network.tails)
        heads = np.asarray(self.network.heads)
        return np.asarray(self.network.costs) + self.potentials[tails] - self.potentials[heads]

    def certificate(self) -> tuple[float, float]:
        """(min reduced cost, max |reduced cost| over arcs carrying flow)."""
        rc = self.reduced_costs()
        used = self.arc_flow > 0
        return float(rc.min(initial=0.0)), float(np.abs(rc[used]).max(initial=0.0))

    def certificate_ok(self, tol: float = REDUCED_COST_TOL) -> bool:
        lo, used = self.certificate()
        return lo >= -tol and used <= tol

    def conservation_error(self) -> float:
        net = np.zeros(self.network.n_nodes)
        np.add.at(net, np.asarray(self.network.tails), self.arc_flow)
        np.subtract.at(net, np.asarray(self.network.heads), self.arc_flow)
        return float(np.abs(net - self.network.balance()).max())


class _Residual:
    """Residual graph with paired forward/backward edges."""

    def __init__(self, n: int):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[float] = []
        self.cost: list[float] = []

    def add(self, u: int, v: int, cap: float, cost: float) -> int:
        e = len(self.to)
        self.to += [v, u]
        self.cap += [cap, 0.0]
        self.cost += [cost, -cost]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e


def _initial_potentials(net: FlowNetwork, n: int) -> list[float]:
    """Shortest distances from the sources, one pass in topological order."""
    pot = [0.0] * n
    s = len(net.sources)
    best = [math.inf] * n
    for v in range(s):
        best[v] = 0.0
    for t, h, c in zip(net.tails, net.heads, net.costs):  # layer-1 arcs come first
        best[h] = min(best[h], best[t] + c)
    for v in range(s, net.n_nodes):
        pot[v] = best[v] if best[v] < math.inf else 0.0
    return pot


def solve(network: FlowNetwork) -> FlowSolution:
    """Min-cost flow by successive shortest augmenting paths."""
    if abs(math.fsum(network.supplies) - math.fsum(network.demands)) > TOL_MASS:
        raise Infeasible("total supply and total demand differ")
    N = network.n_nodes
    src, snk = N, N + 1
    n = N + 2
    g = _Residual(n)
    arc_edges = [g.add(t, h, math.inf, c) for t, h, c in zip(network.tails, network.heads, network.costs)]
    s = len(network.sources)
    supply_edges = [g.add(src, i, w, 0.0) for i, w in enumerate(network.supplies)]
    first_sink = s + len(network.transit)
    demand_edges = [g.add(first_sink + j, snk, w, 0.0) for j, w in enumerate(network.demands)]

    pot = _initial_potentials(network, N) + [0.0, 0.0]
    pot[snk] = min(pot[first_sink:N], default=0.0)

    augmentations = exhausting = 0
    boundary = set(supply_edges) | set(demand_edges)
    while any(g.cap[e] > SNAP for e in supply_edges) and any(g.cap[e] > SNAP for e in demand_edges):
        dist = [math.inf] * n
        pred = [-1] * n
        dist[src] = 0.0
        heap = [(0.0, src)]
        done = [False] * n
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for e in g.adj[u]:
                if g.cap[e] <= SNAP:
                    continue
                v = g.to[e]
                rc = g.cost[e] + pot[u] - pot[v]
                if rc < 0.0:
                    if rc < -REDUCED_COST_TOL:
                        raise NumericalBreakdown(f"reduced cost {rc:.3g} on a residual edge")
                    rc = 0.0
                nd = d + rc
                if nd < dist[v]:
                    dist[v] = nd
                    pred[v] = e
                    heapq.heappush(heap, (nd, v))
        if dist[snk] == math.inf:
            raise Infeasible("no augmenting path while supply remains")
        D = dist[snk]
        for v in range(n):
            pot[v] += min(dist[v], D)

        path = []
        v = snk
        while v != src:
            e = pred[v]
            path.append(e)
            v = g.to[e ^ 1]
        delta = min(g.cap[e] for e in path)
        if any(g.cap[e] - delta < SNAP for e in path if e in boundary):
            exhausting += 1
        for e in path:
            g.cap[e] -= delta
            g.cap[e ^ 1] += delta
            if g.cap[e] < SNAP:
                g.cap[e] = 0.0
        augmentations += 1

    if any(g.cap[e] > TOL_MASS for e in supply_edges + demand_edges):
        raise Infeasible("supply or demand left unrouted")

    flow = np.array([g.cap[e ^ 1] for e in arc_edges])
    flow[flow < SNAP] = 0.0
    cost = math.fsum(f * c for f, c in zip(flow, network.costs))
    return FlowSolution(network, flow, cost, np.array(pot[:N]), augmentations, exhausting)


def flow_from_solution(sol: FlowSolution) -> CardinalFlow:
    net = sol.network
    s = len(net.sources)
    f1, f2 = {}, {}
    for t, h, f in zip(net.tails, net.heads, sol.arc_flow):
        if f <= 0.0:
            continue
        if t < s:
            x1, x2 = net.sources[t]
            y1, _ = net.node_label(h)
            f1[x1, x2, y1] = f
        else:
            y1, x2 = net.node_label(t)
            _, y2 = net.node_label(h)
            f2[x2, y1, y2] = f
    return CardinalFlow.from_masses(f1, f2)


def transit_throughput(sol: FlowSolution) -> PivotMeasure:
    net = sol.network
    s = len(net.sources)
    inflow = np.zeros(net.n_nodes)
    np.add.at(inflow, np.asarray(net.heads), sol.arc_flow)
    points, weights = [], []
    for k, p in enumerate(net.transit):
        if inflow[s + k] > 0.0:
            points.append(p)
            weights.append(float(inflow[s + k]))
    return PivotMeasure(tuple(points), tuple(weights))


class CardinalOptimum(NamedTuple):
    flow: CardinalFlow
    pivot: PivotMeasure
    cost: float


def optimal_cardinal_flow(mu: DiscreteMeasure2D, nu: DiscreteMeasure2D, c: SeparableCost,
                          dump_network: Optional[str] = None) -> CardinalOptimum:
    net = build_network(mu, nu, c)
    if dump_network:
        with open(dump_network, "w") as fh:
            fh.write(net.to_dot())
    sol = solve(net)
    return CardinalOptimum(flow_from_solution(sol), transit_throughput(sol), sol.cost)
