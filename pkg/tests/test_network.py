import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_paths, ghatee_signed_flows, make_network, random_connected_graph
from physarum_fue import (
    Link,
    NegativeFlow,
    NoPathExists,
    ODDemand,
    ParameterOutOfRange,
    Path,
    PathNotInNetwork,
    TriangularFuzzy,
    ValidationError,
    bpr_cost,
    check_conservation,
    enumerate_paths,
    fuzzy_link_cost,
    fuzzy_path_cost,
)
from physarum_fue.network import check_total_conservation, node_balance
from physarum_fue.reference import GHATEE_FLOWS, RAMAZANI_FLOWS

L12 = Link(1, 2, 4.0, 200.0)


@pytest.mark.parametrize("x, expected", [(0, 4.0), (200, 4.6), (306, 4 * (1 + 0.15 * 1.53 ** 4))])
def test_bpr(x, expected):
    assert bpr_cost(L12, x) == pytest.approx(expected, rel=1e-14)


def test_bpr_hand_value():
    assert bpr_cost(L12, 306) == pytest.approx(7.2879, abs=1e-4)


def test_bpr_negative():
    with pytest.raises(NegativeFlow):
        bpr_cost(L12, -1)


def test_bpr_increasing():
    xs = np.linspace(0, 1000, 200)
    c = [bpr_cost(L12, x) for x in xs]
    assert np.all(np.diff(c) > 0)
    assert bpr_cost(L12, 0) == L12.c0


def test_fuzzy_link_cost_values():
    c = fuzzy_link_cost(L12, 306, 0.2, 0.2)
    assert c.astuple() == pytest.approx((5.3467, 7.2879, 10.8178), abs=1e-4)
    assert c.a1 == bpr_cost(L12, 244.8) and c.a3 == bpr_cost(L12, 367.2)


def test_fuzzy_link_cost_degenerate():
    assert fuzzy_link_cost(L12, 0, 0.2, 0.3).astuple() == (4, 4, 4)
    v = bpr_cost(L12, 123)
    assert fuzzy_link_cost(L12, 123, 0, 0).astuple() == (v, v, v)


@pytest.mark.parametrize("al, ar", [(-0.1, 0.2), (1.0, 0.2), (0.2, -0.5)])
def test_fuzzy_link_cost_alpha_range(al, ar):
    with pytest.raises(ParameterOutOfRange):
        fuzzy_link_cost(L12, 10, al, ar)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2000), st.floats(0, 0.99), st.floats(0, 3))
def test_fuzzy_link_cost_ordered(x, al, ar):
    c = fuzzy_link_cost(L12, x, al, ar)
    assert c.a1 <= c.a2 <= c.a3


@pytest.mark.parametrize("kwargs", [dict(i=1, j=1), dict(c0=-1.0), dict(u=0.0)])
def test_link_validation(kwargs):
    args = dict(i=1, j=2, c0=1.0, u=1.0) | kwargs
    with pytest.raises(ValidationError):
        Link(**args)


def test_od_validation():
    with pytest.raises(ValidationError):
        ODDemand(1, 1, 5)
    with pytest.raises(ValidationError):
        ODDemand(1, 2, 0)


def test_path_rules():
    with pytest.raises(ValueError):
        Path((1, 2, 1))
    p = Path((1, 2)) + Path((2, 4))
    assert p.nodes == (1, 2, 4) and p.edges == [(1, 2), (2, 4)]
    assert str(p) == "1→2→4"
    with pytest.raises(ValueError):
        Path((1, 2)) + Path((3, 4))


def test_network_validation():
    with pytest.raises(ValidationError):
        make_network([(1, 2, 1, 1), (2, 1, 1, 1)])
    with pytest.raises(ValidationError):
        make_network([(1, 2, 1, 1)], nodes=[1])
    with pytest.raises(ValidationError):
        make_network([(1, 2, 1, 1), (3, 4, 1, 1)], demands=[(1, 4, 5)])


def test_fixture_shapes(ramazani, ghatee):
    assert len(ramazani.nodes) == 4 and ramazani.n_links == 6
    assert [d.key + (d.q,) for d in ramazani.demands] == [(1, 4, 700)]
    assert len(ghatee.nodes) == 13 and ghatee.n_links == 15
    assert sorted(d.q for d in ghatee.demands) == [100, 100, 150, 150, 150, 200]


def test_table6_first_path(ghatee):
    c = fuzzy_path_cost(ghatee, Path((1, 3, 2, 8, 9)), GHATEE_FLOWS, 0.2, 0.2)
    assert c.astuple() == pytest.approx((61.2985, 64.6115, 70.6359), abs=1e-3)


def test_path_cost_trivial(ramazani):
    zero = np.zeros(ramazani.n_links)
    assert fuzzy_path_cost(ramazani, Path((1,)), zero, 0.2, 0.2).astuple() == (0, 0, 0)
    assert fuzzy_path_cost(ramazani, Path((1, 4)), zero, 0.2, 0.2).astuple() == (17, 17, 17)


def test_path_not_in_network(ghatee):
    with pytest.raises(PathNotInNetwork):
        fuzzy_path_cost(ghatee, Path((1, 9)), GHATEE_FLOWS, 0.2, 0.2)


def test_path_cost_concatenation(ghatee):
    whole = fuzzy_path_cost(ghatee, Path((5, 6, 7, 8, 10)), GHATEE_FLOWS, 0.2, 0.3)
    head = fuzzy_path_cost(ghatee, Path((5, 6, 7)), GHATEE_FLOWS, 0.2, 0.3)
    tail = fuzzy_path_cost(ghatee, Path((7, 8, 10)), GHATEE_FLOWS, 0.2, 0.3)
    assert whole.astuple() == pytest.approx((head + tail).astuple(), rel=1e-14)


def test_enumerate_ramazani(ramazani):
    got = [p.nodes for p in enumerate_paths(ramazani, (1, 4), 3)]
    assert got == brute_force_paths(ramazani, 1, 4)
    assert got == [(1, 2, 3, 4), (1, 2, 4), (1, 3, 2, 4), (1, 3, 4), (1, 4)]
    assert [p.nodes for p in enumerate_paths(ramazani, (1, 4), 1)] == [(1, 4)]


def test_enumerate_errors(ramazani):
    net = make_network([(1, 2, 1, 1), (3, 4, 1, 1)])
    with pytest.raises(NoPathExists):
        enumerate_paths(net, (1, 4))
    with pytest.raises(ValidationError):
        enumerate_paths(ramazani, (1, 1))


@pytest.mark.parametrize("seed", range(20))
def test_enumerate_matches_dfs_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 11))
    net = random_connected_graph(rng, n, int(rng.integers(0, n)))
    o, d = (int(v) for v in rng.choice(n, 2, replace=False) + 1)
    assert [p.nodes for p in enumerate_paths(net, (o, d))] == brute_force_paths(net, o, d)


def test_table5_conserves(ghatee):
    signed = ghatee_signed_flows(ghatee)
    assert check_total_conservation(ghatee, signed) == pytest.approx(0, abs=1e-9)
    bal = node_balance(ghatee, signed)
    assert bal[7] == pytest.approx(0, abs=1e-9)   # in 353.67 + 300, out 553.67 + 100


def test_table2_outflow(ramazani):
    pa = RAMAZANI_FLOWS["PA"]
    assert pa[(1, 2)] + pa[(1, 3)] + pa[(1, 4)] == 700
    report = check_conservation(ramazani, {(1, 4): pa})
    assert report.per_od[(1, 4)] == 0 and report.ok


def test_conservation_zero():
    net = make_network([(1, 2, 1, 1)])
    assert check_conservation(net, {}).max_violation == 0


def test_conservation_detects_leak(ramazani):
    flows = dict(RAMAZANI_FLOWS["PA"])
    flows[(3, 4)] -= 10
    assert check_conservation(ramazani, {(1, 4): flows}).max_violation == pytest.approx(10)


def test_flow_array_orientation(ramazani):
    arr = ramazani.flow_array({(2, 1): 5.0})
    assert arr[ramazani.link_index(1, 2)] == -5.0
    with pytest.raises(ValueError):
        ramazani.flow_array([1.0, 2.0])
