"""Brute-force optimal transport on the full bipartite support.

This is the ground truth used to check every other module. It shares no code
with the min-cost-flow solver: it runs the textbook transportation simplex
(northwest-corner start, MODI potentials, Bland's rule) on the dense cost
matrix between all atoms of the two measures.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .costs import SeparableCost, eval_total
from .errors import NumericalBreakdown, TooLarge
from .measures import TOL_MASS, DiscreteMeasure2D, marginal
from .structures import PivotMeasure, TransportPlan

MAX_CELLS = 10_000
PERTURBATION = 1e-13


@dataclass(frozen=True)
class BipartiteInstance:
    sources: tuple[tuple[float, float], ...]
    supplies: np.ndarray
    sinks: tuple[tuple[float, float], ...]
    demands: np.ndarray
    cost: np.ndarray

    @classmethod
    def build(cls, mu: DiscreteMeasure2D, nu: DiscreteMeasure2D, c: SeparableCost):
        C = np.array([[eval_total(c, x, y) for y in nu.points] for x in mu.points], dtype=float)
        return cls(mu.points, np.array(mu.weights), nu.points, np.array(nu.weights), C)


@dataclass(frozen=True)
class TransportationSolution:
    plan: np.ndarray
    cost: float
    u: np.ndarray
    v: np.ndarray
    basis: tuple[tuple[int, int], ...]
    pivots: int


def _northwest_corner(a, b):
    n, m = len(a), len(b)
    ra, rb = a.copy(), b.copy()
    basis, x = [], {}
    i = j = 0
    while True:
        q = min(ra[i], rb[j])
        basis.append((i, j))
        x[i, j] = q
        ra[i] -= q
        rb[j] -= q
        if i == n - 1 and j == m - 1:
            break
        if (ra[i] <= rb[j] and i < n - 1) or j == m - 1:
            i += 1
        else:
            j += 1
    return basis, x


def _tree_adjacency(basis, n):
    adj: dict[int, list[int]] = {}
    for i, j in basis:
        adj.setdefault(i, []).append(n + j)
        adj.setdefault(n + j, []).append(i)
    return adj


def _potentials(basis, C, n, m):
    adj = _tree_adjacency(basis, n)
    u = np.full(n, np.nan)
    v = np.full(m, np.nan)
    u[0] = 0.0
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for nb in adj.get(node, ()):
            if node < n:
                j = nb - n
                if np.isnan(v[j]):
                    v[j] = C[node, j] - u[node]
                    queue.append(nb)
            else:
                if np.isnan(u[nb]):
                    u[nb] = C[nb, node - n] - v[node - n]
                    queue.append(nb)
    if np.isnan(u).any() or np.isnan(v).any():
        raise NumericalBreakdown("basis is not a spanning tree")
    return u, v


def _tree_path(basis, n, start, goal):
    """Node path from ``start`` to ``goal`` through the basis tree."""
    adj = _tree_adjacency(basis, n)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for nb in adj.get(node, ()):
            if nb not in parent:
                parent[nb] = node
                queue.append(nb)
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    return path[::-1]


def _basic_solution(basis, a, b, n):
    """Solve the tree system for the basic variables by peeling leaves."""
    ra, rb = a.astype(float).copy(), b.astype(float).copy()
    adj = {k: set(v) for k, v in _tree_adjacency(basis, n).items()}
    x = {}
    leaves = deque(sorted(k for k, nbs in adj.items() if len(nbs) == 1))
    while leaves:
        node = leaves.popleft()
        if not adj.get(node):
            continue
        (nb,) = adj[node]
        if node < n:
            cell, q = (node, nb - n), ra[node]
        else:
            cell, q = (nb, node - n), rb[node - n]
        x[cell] = q
        ra[cell[0]] -= q
        rb[cell[1]] -= q
        adj[node].discard(nb)
        adj[nb].discard(node)
        if len(adj[nb]) == 1:
            leaves.append(nb)
    return x


def solve_transportation(a, b, C, max_pivots: int = 100_000) -> TransportationSolution:
    """Minimize ``<C, X>`` over nonnegative ``X`` with row sums ``a`` and column sums ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    C = np.asarray(C, dtype=float)
    n, m = len(a), len(b)
    if C.shape != (n, m):
        raise ValueError(f"cost matrix shape {C.shape} does not match ({n}, {m})")
    if abs(a.sum() - b.sum()) > TOL_MASS:
        raise ValueError("supplies and demands do not balance")

    # perturb supplies so every basic solution is nondegenerate
    ap = a + PERTURBATION
    bp = b.copy()
    bp[-1] += n * PERTURBATION + (a.sum() - b.sum())

    basis, x = _northwest_corner(ap, bp)
    tol = 1e-12 * (1.0 + float(np.abs(C).max(initial=0.0)))
    pivots = 0
    while True:
        u, v = _potentials(basis, C, n, m)
        reduced = C - u[:, None] - v[None, :]
        candidates = np.argwhere(reduced < -tol)
        if len(candidates) == 0:
            break
        pivots += 1
        if pivots > max_pivots:
            raise NumericalBreakdown(f"no convergence after {max_pivots} pivots")
        ei, ej = (int(t) for t in candidates[0])  # Bland: lowest index enters
        path = _tree_path(basis, n, ei, n + ej)
        cells = []
        for p, q in zip(path[:-1], path[1:]):
            cells.append((p, q - n) if p < n else (q, p - n))
        minus = cells[0::2]
        plus = cells[1::2]
        theta = min(x[cell] for cell in minus)
        leaving = min(cell for cell in minus if x[cell] == theta)
        for cell in minus:
            x[cell] -= theta
        for cell in plus:
            x[cell] += theta
        x[ei, ej] = theta
        basis.remove(leaving)
        del x[leaving]
        basis.append((ei, ej))

    basic = _basic_solution(basis, a, b, n)
    X = np.zeros((n, m))
    for (i, j), q in basic.items():
        if q < -TOL_MASS:
            raise NumericalBreakdown(f"negative basic mass {q!r} after removing perturbation")
        X[i, j] = max(q, 0.0)
    X[X < 1e-15] = 0.0
    return TransportationSolution(X, float((C * X).sum()), u, v, tuple(basis), pivots)


def brute_force_wc(mu: DiscreteMeasure2D, nu: DiscreteMeasure2D, c: SeparableCost):
    """Optimal plan and Wasserstein cost by solving the full transportation problem."""
    if len(mu) * len(nu) > MAX_CELLS:
        raise TooLarge(f"{len(mu)} x {len(nu)} exceeds the {MAX_CELLS}-cell guard")
    inst = BipartiteInstance.build(mu, nu, c)
    sol = solve_transportation(inst.supplies, inst.demands, inst.cost)
    entries = {}
    for i, j in zip(*np.nonzero(sol.plan)):
        entries[inst.sources[i] + inst.sinks[j]] = sol.plan[i, j]
    return TransportPlan.from_masses(entries), sol.cost


def w_oracle(mu: DiscreteMeasure2D, nu: DiscreteMeasure2D, c: SeparableCost) -> float:
    return brute_force_wc(mu, nu, c)[1]


def random_intermedium(mu: DiscreteMeasure2D, nu: DiscreteMeasure2D, seed=None) -> PivotMeasure:
    """A random measure on supp(nu_1) x supp(mu_2) with marginals nu_1 and mu_2.

    Drawn as a Dirichlet mixture of the independent coupling and a few vertices
    of the transportation polytope (each the optimum for a random cost).
    """
    rng = np.random.default_rng(seed)
    nu1 = marginal(nu, 1)
    mu2 = marginal(mu, 2)
    a, b = np.array(nu1.weights), np.array(mu2.weights)
    couplings = [np.outer(a, b)]
    if len(a) > 1 and len(b) > 1:
        for _ in range(3):
            couplings.append(solve_transportation(a, b, rng.random((len(a), len(b)))).plan)
    mix = rng.dirichlet(np.ones(len(couplings)))
    M = sum(w * P for w, P in zip(mix, couplings))
    points, weights = [], []
    for i, y1 in enumerate(nu1.positions):
        for j, x2 in enumerate(mu2.positions):
            if M[i, j] > 0.0:
                points.append((y1, x2))
                weights.append(M[i, j])
    return PivotMeasure(tuple(points), tuple(weights))
