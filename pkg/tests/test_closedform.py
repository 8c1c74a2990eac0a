import numpy as np
import pytest

from cardinal_ot.cardinal import pivot_functional, plan_cost, validate_flow
from cardinal_ot.closedform import LineSpec, degenerate_pivot, line_flow, line_flow_general
from cardinal_ot.costs import SeparableCost
from cardinal_ot.errors import NotOnLine
from cardinal_ot.instances import random_axis_measure, random_line, random_line_measure, random_measure_2d, random_pair
from cardinal_ot.measures import TOL_MASS, make_measure_2d, max_deviation, pushforward_affine
from cardinal_ot.mcf import optimal_cardinal_flow
from cardinal_ot.oracle import brute_force_wc, w_oracle


def test_linespec_normalization():
    line = LineSpec(0, -2, 4)
    assert (line.a, line.b, line.q) == (0.0, 1.0, -2.0)
    line = LineSpec(-3, 4, 10)
    assert (line.a, line.b, line.q) == pytest.approx((0.6, -0.8, -2.0))
    with pytest.raises(ValueError):
        LineSpec(0, 0, 1)


def test_rotation_is_proper():
    for theta in np.linspace(0, 2 * np.pi, 9):
        line = LineSpec(np.cos(theta), np.sin(theta), 1.0)
        R = line.rotation()
        assert R @ R.T == pytest.approx(np.eye(2))
        assert np.linalg.det(R) == pytest.approx(1.0)
        assert R @ np.array([line.b, -line.a]) == pytest.approx([1.0, 0.0])


def test_degenerate_pivot_both(switching):
    assert degenerate_pivot(*switching).atoms == [((0.0, 0.0), 1.0)]


def test_degenerate_pivot_axis(axis_example):
    mu, nu = axis_example
    assert degenerate_pivot(mu, nu).atoms == [((0.0, 0.0), 0.5), ((2.0, 0.0), 0.5)]


def test_degenerate_pivot_none(theta_example):
    assert degenerate_pivot(*theta_example) is None


def test_degenerate_pivot_is_optimal(rng):
    c = SeparableCost.power(2, 1)
    for k in range(40):
        mu, nu = random_pair(rng, 6, grid=True)
        if k % 2:
            mu = random_axis_measure(rng)
        else:
            nu = make_measure_2d([(3.0, y) for y in range(len(nu))], nu.weights)
        zeta = degenerate_pivot(mu, nu)
        w = w_oracle(mu, nu, c)
        assert abs(pivot_functional(zeta, mu, nu, c) - w) <= 1e-9 * (1 + w)


def test_line_flow_fixture(axis_example, l2):
    mu, nu = axis_example
    flow, cost = line_flow(mu, nu, l2)
    # W(mu_1, nu_1) = 1/2 * 1 and 1/2 (1 + 4) for the vertical moves
    assert cost == pytest.approx(3.0, abs=1e-15)
    assert w_oracle(mu, nu, l2) == pytest.approx(3.0, abs=1e-12)
    assert validate_flow(flow, mu, nu).ok


def test_line_flow_pure_1d(l1):
    mu = make_measure_2d([(0, 0), (2, 0), (5, 0)], [0.2, 0.3, 0.5])
    nu = make_measure_2d([(1, 0), (4, 0)], [0.6, 0.4])
    # quantile pairing: 0->1 (0.2), 2->1 (0.3), 5->1 (0.1), 5->4 (0.4)
    assert line_flow(mu, nu, l1).cost == pytest.approx(0.2 * 1 + 0.3 * 1 + 0.1 * 4 + 0.4 * 1, abs=1e-12)


def test_line_flow_dirac_source(rng, l2):
    mu = make_measure_2d([(0, 0)], [1.0])
    nu = random_measure_2d(rng, 6)
    expected = sum(w * l2((0, 0), y) for y, w in nu.atoms)
    assert line_flow(mu, nu, l2).cost == pytest.approx(expected, abs=1e-12)


def test_line_flow_off_axis(theta_example, l1):
    with pytest.raises(NotOnLine):
        line_flow(*theta_example, l1)


@pytest.mark.parametrize("c", [SeparableCost.power(1, 1), SeparableCost.power(2, 2), SeparableCost.power(1, 3)])
def test_line_flow_agreement(rng, c):
    for _ in range(40):
        mu, nu = random_axis_measure(rng), random_measure_2d(rng)
        cost = line_flow(mu, nu, c).cost
        assert abs(cost - optimal_cardinal_flow(mu, nu, c).cost) <= 1e-9 * (1 + cost)
        assert abs(cost - w_oracle(mu, nu, c)) <= 1e-9 * (1 + cost)


def test_vertical_line_is_swapped_axis(rng, l2):
    for _ in range(10):
        nu = random_measure_2d(rng)
        mu_axis = random_axis_measure(rng)
        mu_vertical = make_measure_2d([(0.0, x) for x, _ in mu_axis.points], mu_axis.weights)
        nu_swapped = make_measure_2d([(b, a) for a, b in nu.points], nu.weights)
        general = line_flow_general(mu_vertical, LineSpec(1, 0, 0), nu_swapped).cost
        assert general == pytest.approx(line_flow(mu_axis, nu, l2).cost, abs=1e-9)


def test_diagonal_line_fixture(l2):
    mu = make_measure_2d([(-1, 1), (1, -1)], [0.5, 0.5])
    nu = make_measure_2d([(0, 0), (2, 2)], [0.5, 0.5])
    matchings = [0.5 * (l2((-1, 1), (0, 0)) + l2((1, -1), (2, 2))), 0.5 * (l2((-1, 1), (2, 2)) + l2((1, -1), (0, 0)))]
    plan, cost = line_flow_general(mu, LineSpec(1, 1, 0), nu)
    assert cost == pytest.approx(min(matchings), abs=1e-9)
    assert cost == pytest.approx(w_oracle(mu, nu, l2), abs=1e-9)
    assert max_deviation(plan.source_marginal(), mu.as_dict()) <= TOL_MASS


def test_line_dirac(rng, l2):
    line = LineSpec(2, -1, 3)
    p = (1.0, -1.0)
    mu = make_measure_2d([p], [1.0])
    nu = random_measure_2d(rng)
    assert line_flow_general(mu, line, nu).cost == pytest.approx(sum(w * l2(p, y) for y, w in nu.atoms), abs=1e-9)


def test_line_general_off_line(theta_example):
    with pytest.raises(NotOnLine):
        line_flow_general(theta_example[0], LineSpec(0, 1, 0), theta_example[1])


def test_line_general_random(rng, l2):
    for _ in range(30):
        line = random_line(rng)
        mu, nu = random_line_measure(rng, line), random_measure_2d(rng)
        plan, cost = line_flow_general(mu, line, nu)
        assert cost == pytest.approx(plan_cost(plan, l2))
        assert abs(cost - w_oracle(mu, nu, l2)) <= 1e-9 * (1 + cost)


def test_rotation_invariance_of_oracle(rng, l2):
    for _ in range(30):
        mu, nu = random_pair(rng, 6)
        t = rng.uniform(0, 2 * np.pi)
        O = [[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]]
        rotated = w_oracle(pushforward_affine(mu, O, [0, 0]), pushforward_affine(nu, O, [0, 0]), l2)
        assert rotated == pytest.approx(w_oracle(mu, nu, l2), abs=1e-9)


def test_separable_distance_equality(rng, l1):
    for _ in range(30):
        mu, nu = random_pair(rng, 7, grid=True)
        zeta = optimal_cardinal_flow(mu, nu, l1).pivot.as_measure()
        assert abs(w_oracle(mu, nu, l1) - w_oracle(mu, zeta, l1) - w_oracle(zeta, nu, l1)) <= 1e-9


def test_theta_counterexample(theta_example, l1):
    mu, nu = theta_example
    res = optimal_cardinal_flow(mu, nu, l1)
    assert res.pivot.atoms == [((1.0, 0.0), 0.5), ((8.0, 1.0), 0.5)]
    zeta = res.pivot.as_measure()
    assert w_oracle(mu, zeta, l1) + w_oracle(zeta, nu, l1) == pytest.approx(2.0, abs=1e-9)
    # nu also minimizes W(mu, .) + W(., nu) without being a pivot
    assert w_oracle(mu, nu, l1) + w_oracle(nu, nu, l1) == pytest.approx(2.0, abs=1e-9)
    assert res.pivot.as_dict() != nu.as_dict()
    assert brute_force_wc(mu, nu, l1)[1] == pytest.approx(2.0, abs=1e-12)
