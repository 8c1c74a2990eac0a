import numpy as np
import pytest

from cardinal_ot.cardinal import flow_cost, pivot_of, validate_flow
from cardinal_ot.costs import SeparableCost
from cardinal_ot.errors import Infeasible
from cardinal_ot.instances import random_pair
from cardinal_ot.measures import make_measure_2d, marginal
from cardinal_ot.mcf import FlowNetwork, build_network, optimal_cardinal_flow, solve
from cardinal_ot.oracle import w_oracle


def test_switching_network(switching, l1):
    mu, nu = switching
    net = build_network(mu, nu, l1)
    assert (len(net.sources), len(net.transit), len(net.sinks)) == (2, 1, 2)
    assert net.transit == ((0.0, 0.0),)
    assert net.layer_arc_counts() == (2, 2)


def test_single_atom_network(l2):
    m = make_measure_2d([(3, 4)], [1.0])
    net = build_network(m, m, l2)
    assert net.n_nodes == 3
    assert net.costs == (0.0, 0.0)


def test_network_counts(rng, l2):
    for _ in range(20):
        mu, nu = random_pair(rng, 6, grid=True)
        net = build_network(mu, nu, l2)
        ny1, nx2 = len(marginal(nu, 1)), len(marginal(mu, 2))
        assert net.n_nodes == len(mu) + ny1 * nx2 + len(nu)
        assert net.layer_arc_counts() == (len(mu) * ny1, nx2 * len(nu))
        assert min(net.costs) >= 0
        s = len(mu)
        for t, h in zip(net.tails, net.heads):
            if t < s:  # horizontal move keeps x2
                assert net.node_label(t)[1] == net.node_label(h)[1]
            else:  # vertical move keeps y1
                assert net.node_label(t)[0] == net.node_label(h)[0]


def test_solve_examples(switching, theta_example, l1):
    mu, nu = switching
    assert solve(build_network(mu, nu, l1)).cost == pytest.approx(3.0, abs=1e-12)
    m = make_measure_2d([(0, 0), (1, 2), (4, 4)], [0.2, 0.3, 0.5])
    assert solve(build_network(m, m, l1)).cost == 0
    mu, nu = theta_example
    res = optimal_cardinal_flow(mu, nu, l1)
    assert res.cost == pytest.approx(2.0, abs=1e-12)
    assert res.pivot.atoms == [((1.0, 0.0), 0.5), ((8.0, 1.0), 0.5)]


def test_optimal_cardinal_flow_examples(switching, axis_example, l2):
    mu, nu = switching
    flow, pivot, cost = optimal_cardinal_flow(mu, nu, l2)
    assert cost == pytest.approx(5.0, abs=1e-12)
    assert pivot.atoms == [((0.0, 0.0), 1.0)]
    mu, nu = axis_example
    assert optimal_cardinal_flow(mu, nu, l2).cost == pytest.approx(3.0, abs=1e-12)
    assert optimal_cardinal_flow(nu, nu, l2).cost == 0


def test_unbalanced_network_rejected(switching, l1):
    mu, nu = switching
    net = build_network(mu, nu, l1)
    broken = FlowNetwork(net.sources, (0.5, 0.4), net.transit, net.sinks, net.demands,
                         net.tails, net.heads, net.costs)
    with pytest.raises(Infeasible):
        solve(broken)


def test_dot_dump(tmp_path, switching, l1):
    mu, nu = switching
    path = tmp_path / "net.dot"
    optimal_cardinal_flow(mu, nu, l1, dump_network=str(path))
    text = path.read_text()
    assert text.startswith("digraph")
    assert text.count("->") == 4


@pytest.mark.parametrize("grid", [False, True])
def test_equivalence_and_certificates(grid):
    rng = np.random.default_rng(99 + grid)
    for k in range(150):
        mu, nu = random_pair(rng, 8, grid=grid)
        c = SeparableCost.power(1 + k % 2, [1, 2, 1.5][k % 3])
        sol = solve(build_network(mu, nu, c))
        ref = w_oracle(mu, nu, c)
        assert abs(sol.cost - ref) <= 1e-9 * (1 + ref)
        assert sol.conservation_error() <= 1e-9
        lo, used = sol.certificate()
        assert lo >= -1e-9 and used <= 1e-9
        # each source and sink is exhausted at most once; other augmentations cancel flow on an arc
        assert sol.exhausting <= len(mu) + len(nu)
        res = optimal_cardinal_flow(mu, nu, c)
        assert validate_flow(res.flow, mu, nu).ok
        assert res.pivot.as_dict() == pytest.approx(pivot_of(res.flow).as_dict(), abs=1e-9)
        assert flow_cost(res.flow, c) == pytest.approx(res.cost, abs=1e-9)


def test_deterministic(rng, l2):
    mu, nu = random_pair(rng, 8, grid=True)
    assert optimal_cardinal_flow(mu, nu, l2) == optimal_cardinal_flow(mu, nu, l2)
