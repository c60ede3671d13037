import numpy as np
import pytest

from conftest import dijkstra_path, make_network, random_connected_graph
from physarum_fue import NoConvergence, ParameterOutOfRange, sp_run, sp_step
from physarum_fue.laplacian import solve_pressures
from physarum_fue.shortest_path import D_FLOOR, init_sp_state

TWO = make_network([(1, 2, 1, 1), (1, 3, 1, 1), (2, 4, 1, 1), (3, 4, 1, 1)])


def free_flow(network):
    return [l.c0 for l in network.links]


def test_ramazani_free_flow(ramazani):
    res = sp_run(ramazani, free_flow(ramazani), 1, 4)
    assert res.converged
    assert res.path.nodes == (1, 2, 4)
    assert res.length(ramazani, free_flow(ramazani)) == 11


def test_single_edge_converges_to_I0():
    net = make_network([(1, 2, 3, 1)])
    res = sp_run(net, [3.0], 1, 2, I0=2.5)
    assert res.state.D == pytest.approx([2.5], abs=1e-4)
    assert res.path.nodes == (1, 2)


def test_single_path_graph():
    net = make_network([(1, 2, 1, 1), (2, 3, 5, 1), (3, 4, 2, 1)])
    assert sp_run(net, free_flow(net), 1, 4).path.nodes == (1, 2, 3, 4)


def test_symmetric_routes_stay_symmetric():
    state = init_sp_state(TWO)
    for _ in range(200):
        state = sp_step(state, TWO, [1, 1, 1, 1], 1, 4)
    assert state.D[0] == pytest.approx(state.D[1], rel=1e-12)
    assert state.D[2] == pytest.approx(state.D[3], rel=1e-12)


def test_tie_reports_non_path():
    res = sp_run(TWO, [1, 1, 1, 1], 1, 4, dt=0.1)
    assert res.converged and res.path is None
    assert sorted(res.selected) == [(1, 2), (1, 3), (2, 4), (3, 4)]


def test_parallel_lengths_one_and_two():
    # routes 1-2-4 (length 1) and 1-3-4 (length 2): iterate D_short -> 1, D_long -> 0
    lengths = [0.5, 1.0, 0.5, 1.0]
    res = sp_run(TWO, lengths, 1, 4, dt=0.05)
    assert res.state.D[[0, 2]] == pytest.approx([1, 1], abs=1e-4)
    assert np.all(res.state.D[[1, 3]] < 1e-4)


def test_scalar_recurrence_oracle():
    # two parallel tubes between the same pair; flux splits as D_k/L_k over the sum
    D = np.array([1.0, 1.0])
    L = np.array([1.0, 2.0])
    dt = 0.05
    for _ in range(2000):
        share = (D / L) / np.sum(D / L)
        D = (D + dt * share) / (1 + dt)
    net = make_network([(1, 2, 1, 1), (2, 3, 1, 1), (1, 4, 1, 1), (4, 3, 1, 1)])
    state = init_sp_state(net)
    for _ in range(2000):
        state = sp_step(state, net, [0.5, 0.5, 1.0, 1.0], 1, 3, dt=dt)
    assert state.D[[0, 2]] == pytest.approx(D, rel=1e-9, abs=1e-12)


def test_step_matches_explicit_ode():
    rng = np.random.default_rng(5)
    net = random_connected_graph(rng, 7, 4)
    L = rng.uniform(1, 5, net.n_links)
    D = rng.uniform(0.2, 2, net.n_links)
    _, Q = solve_pressures(net, D / L, 1, 7, 1.0)
    errs = []
    for dt in (1e-2, 1e-3, 1e-4):
        state = init_sp_state(net)
        state.D = D.copy()
        got = sp_step(state, net, L, 1, 7, dt=dt)
        explicit = D + dt * (np.abs(Q) - D)
        errs.append(np.max(np.abs(got.D - explicit)))
    # second order: one decade of dt is two decades of error
    assert errs[0] / errs[1] == pytest.approx(100, rel=0.05)
    assert errs[1] / errs[2] == pytest.approx(100, rel=0.05)
    assert errs[0] <= 1e-4 * np.max(np.abs(np.abs(Q) - D)) * 1.01


@pytest.mark.parametrize("seed", range(3))
def test_bounded_dynamics(seed):
    rng = np.random.default_rng(100 + seed)
    net = random_connected_graph(rng, 12, 8)
    L = rng.uniform(0.5, 5, net.n_links)
    D0 = float(rng.uniform(0.2, 3))
    state = init_sp_state(net, D0)
    hi = max(D0, 1.0) + 1e-9
    for _ in range(3000):
        state = sp_step(state, net, L, 1, 12, dt=0.05)
        assert np.all(state.D >= D_FLOOR) and np.all(state.D <= hi)


def _unique_instance(rng):
    while True:
        n = int(rng.integers(5, 31))
        net = random_connected_graph(rng, n, int(rng.integers(1, n)))
        s, t = (int(v) for v in rng.choice(n, 2, replace=False) + 1)
        L = [l.c0 for l in net.links]
        nodes, dist, count = dijkstra_path(net, L, s, t)
        if count == 1:
            return net, L, s, t, nodes, dist


@pytest.mark.parametrize("seed", range(10))
def test_random_graphs_match_dijkstra(seed):
    net, L, s, t, nodes, dist = _unique_instance(np.random.default_rng(1000 + seed))
    res = sp_run(net, L, s, t)
    assert res.path.nodes == nodes
    assert res.length(net, L) == dist


def test_max_iters_without_path():
    with pytest.raises(NoConvergence) as info:
        sp_run(TWO, [0.5, 1.0, 0.5, 1.0], 1, 4, max_iters=3)
    assert info.value.result.state.iteration == 3


@pytest.mark.parametrize("kwargs", [dict(I0=0), dict(dt=0), dict(D0=-1)])
def test_parameter_checks(kwargs):
    with pytest.raises(ParameterOutOfRange):
        sp_run(TWO, [1, 1, 1, 1], 1, 4, **kwargs)


def test_nonpositive_length():
    with pytest.raises(ParameterOutOfRange):
        sp_step(init_sp_state(TWO), TWO, [1, 0, 1, 1], 1, 4)
