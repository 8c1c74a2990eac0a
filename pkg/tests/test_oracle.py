"""The brute-force solver, checked against hand enumeration and scipy's LP solver."""

import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from cardinal_ot.costs import SeparableCost
from cardinal_ot.errors import TooLarge
from cardinal_ot.instances import random_pair
from cardinal_ot.measures import TOL_MASS, make_measure_2d, marginal, max_deviation
from cardinal_ot.oracle import BipartiteInstance, brute_force_wc, random_intermedium, solve_transportation


def linprog_cost(a, b, C):
    n, m = C.shape
    A_eq = np.vstack([np.kron(np.eye(n), np.ones(m)), np.kron(np.ones(n), np.eye(m))])
    res = linprog(C.ravel(), A_eq=A_eq, b_eq=np.concatenate([a, b]), bounds=(0, None), method="highs")
    assert res.success
    return res.fun


def test_switching_cost(switching, l1, l2):
    mu, nu = switching
    # 2x2 uniform: the polytope vertices are the two matchings; both cost the same here
    for c, expected in ((l1, 3.0), (l2, 5.0)):
        plan, cost = brute_force_wc(mu, nu, c)
        assert cost == pytest.approx(expected, abs=1e-12)
        assert max_deviation(plan.source_marginal(), mu.as_dict()) <= TOL_MASS
        assert max_deviation(plan.target_marginal(), nu.as_dict()) <= TOL_MASS


def test_theta_cost(theta_example, l1):
    mu, nu = theta_example
    matchings = {
        perm: 0.5 * sum(l1(mu.points[i], nu.points[j]) for i, j in enumerate(perm))
        for perm in itertools.permutations(range(2))
    }
    assert sorted(matchings.values()) == [2.0, 7.0]
    plan, cost = brute_force_wc(mu, nu, l1)
    assert cost == pytest.approx(2.0, abs=1e-12)
    assert plan.as_dict() == {(0.0, 0.0, 1.0, 1.0): 0.5, (7.0, 1.0, 8.0, 0.0): 0.5}


def test_identity(l2):
    mu = make_measure_2d([(0, 0), (1, 3), (2, 5)], [0.2, 0.3, 0.5])
    plan, cost = brute_force_wc(mu, mu, l2)
    assert cost == 0.0
    assert plan.as_dict() == {p + p: w for p, w in mu.atoms}


def test_guard():
    pts = [(float(i), 0.0) for i in range(101)]
    mu = make_measure_2d(pts, [1 / 101] * 101)
    with pytest.raises(TooLarge):
        brute_force_wc(mu, mu, SeparableCost.power(1))


@pytest.mark.parametrize("seed", range(40))
def test_matches_linprog(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 11, size=2)
    a = rng.dirichlet(np.ones(n))
    b = rng.dirichlet(np.ones(m))
    C = rng.uniform(0, 10, size=(n, m))
    if seed % 4 == 0:
        C = np.round(C)  # ties between vertices
    sol = solve_transportation(a, b, C)
    assert sol.cost == pytest.approx(linprog_cost(a, b, C), abs=1e-9)
    assert np.allclose(sol.plan.sum(1), a, atol=TOL_MASS)
    assert np.allclose(sol.plan.sum(0), b, atol=TOL_MASS)
    assert (sol.plan >= 0).all()
    assert np.count_nonzero(sol.plan) <= n + m - 1


def test_degenerate_uniform_square():
    # equal supplies and demands make every northwest-corner step degenerate
    n = 6
    C = np.abs(np.subtract.outer(np.arange(n), np.arange(n)[::-1])).astype(float)
    a = np.full(n, 1 / n)
    sol = solve_transportation(a, a, C)
    assert sol.cost == pytest.approx(linprog_cost(a, a, C), abs=1e-12)


def test_dual_certificate():
    rng = np.random.default_rng(7)
    a, b = rng.dirichlet(np.ones(5)), rng.dirichlet(np.ones(7))
    C = rng.uniform(0, 5, size=(5, 7))
    sol = solve_transportation(a, b, C)
    reduced = C - sol.u[:, None] - sol.v[None, :]
    assert reduced.min() >= -1e-9
    assert np.abs(reduced[sol.plan > 0]).max() <= 1e-9
    assert sol.u @ a + sol.v @ b == pytest.approx(sol.cost, abs=1e-9)


def test_relabeling_invariance(rng):
    c = SeparableCost.power(2, 1)
    for _ in range(20):
        mu, nu = random_pair(rng, 7, grid=True)
        base = brute_force_wc(mu, nu, c)[1]
        inst = BipartiteInstance.build(mu, nu, c)
        p, q = rng.permutation(len(mu)), rng.permutation(len(nu))
        shuffled = solve_transportation(inst.supplies[p], inst.demands[q], inst.cost[np.ix_(p, q)])
        assert shuffled.cost == pytest.approx(base, abs=1e-9)


def _is_intermedium(zeta, mu, nu):
    return (
        max_deviation(marginal(zeta, 1).as_dict(), marginal(nu, 1).as_dict()) <= TOL_MASS
        and max_deviation(marginal(zeta, 2).as_dict(), marginal(mu, 2).as_dict()) <= TOL_MASS
    )


def test_random_intermedium_dirac_mu2():
    mu = make_measure_2d([(1, 3), (2, 3)], [0.5, 0.5])
    nu = make_measure_2d([(0, 1), (4, 2)], [0.25, 0.75])
    for seed in range(5):
        zeta = random_intermedium(mu, nu, seed)
        assert zeta.atoms == [((0.0, 3.0), 0.25), ((4.0, 3.0), 0.75)]


def test_random_intermedium_dirac_nu1():
    mu = make_measure_2d([(1, 3), (2, 5)], [0.4, 0.6])
    nu = make_measure_2d([(6, 1), (6, 2)], [0.5, 0.5])
    assert random_intermedium(mu, nu, 3).atoms == [((6.0, 3.0), 0.4), ((6.0, 5.0), 0.6)]


def test_random_intermedium_generic(rng):
    for seed in range(20):
        mu, nu = random_pair(rng, 6, grid=True)
        assert _is_intermedium(random_intermedium(mu, nu, seed), mu, nu)


def test_random_intermedium_seeded(theta_example):
    mu, nu = theta_example
    assert random_intermedium(mu, nu, 4) == random_intermedium(mu, nu, 4)
