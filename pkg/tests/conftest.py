"""Shared fixtures and independent oracles for the test suite."""

import heapq

import numpy as np
import pytest

from physarum_fue import Link, Network, ODDemand, load_fixture


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ramazani():
    return load_fixture("ramazani4")


@pytest.fixture(scope="session")
def ghatee():
    return load_fixture("ghatee13")


def make_network(rows, demands=(), nodes=None):
    links = tuple(Link(i, j, c0, u) for i, j, c0, u in rows)
    if nodes is None:
        nodes = sorted({n for l in links for n in (l.i, l.j)})
    return Network(tuple(nodes), links, tuple(ODDemand(*d) for d in demands))


def random_connected_graph(rng, n, extra, low=1, high=10):
    """Spanning tree plus ``extra`` random chords, integer lengths in [low, high]."""
    pairs = set()
    order = rng.permutation(n) + 1
    for k in range(1, n):
        a, b = int(order[k]), int(order[rng.integers(0, k)])
        pairs.add((min(a, b), max(a, b)))
    attempts = 0
    while len(pairs) < n - 1 + extra and attempts < 50 * n:
        a, b = (int(v) for v in rng.choice(n, 2, replace=False) + 1)
        pairs.add((min(a, b), max(a, b)))
        attempts += 1
    rows = [(a, b, float(rng.integers(low, high + 1)), 100.0) for a, b in sorted(pairs)]
    return make_network(rows, nodes=range(1, n + 1))


def dijkstra_all(network, lengths, source):
    """Textbook Dijkstra; returns (distances, number of shortest paths, one predecessor)."""
    adj = {n: [] for n in network.nodes}
    for link, L in zip(network.links, lengths):
        adj[link.i].append((link.j, L))
        adj[link.j].append((link.i, L))
    dist = {n: np.inf for n in network.nodes}
    count = {n: 0 for n in network.nodes}
    pred = {}
    dist[source], count[source] = 0.0, 1
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, L in adj[u]:
            nd = d + L
            if nd < dist[v] - 1e-12:
                dist[v], count[v], pred[v] = nd, count[u], u
                heapq.heappush(heap, (nd, v))
            elif abs(nd - dist[v]) <= 1e-12:
                count[v] += count[u]
    return dist, count, pred


def dijkstra_path(network, lengths, source, sink):
    dist, count, pred = dijkstra_all(network, lengths, source)
    nodes = [sink]
    while nodes[-1] != source:
        nodes.append(pred[nodes[-1]])
    return tuple(reversed(nodes)), dist[sink], count[sink]


def gauss_solve(A, b):
    """Dense Gaussian elimination with partial pivoting, written out by hand."""
    A = [list(map(float, row)) for row in A]
    b = list(map(float, b))
    n = len(b)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(col + 1, n):
            f = A[r][col] / A[col][col]
            for c in range(col, n):
                A[r][c] -= f * A[col][c]
            b[r] -= f * b[col]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        x[r] = (b[r] - sum(A[r][c] * x[c] for c in range(r + 1, n))) / A[r][r]
    return x


def brute_force_paths(network, o, d):
    """Every simple o-d path by exhaustive recursion over neighbour sets."""
    nbrs = {n: set() for n in network.nodes}
    for l in network.links:
        nbrs[l.i].add(l.j)
        nbrs[l.j].add(l.i)
    out = []

    def go(trail):
        if trail[-1] == d:
            out.append(tuple(trail))
            return
        for m in nbrs[trail[-1]] - set(trail):
            go(trail + [m])

    go([o])
    return sorted(out)


def ghatee_signed_flows(network):
    """Recorded 13-node equilibrium magnitudes, signed by travel direction in stored link orientation.

    Only 2-3 (used 3->2) and 11-12 (used 12->11) run against the stored order.
    """
    from physarum_fue.reference import GHATEE_FLOWS

    against = {(2, 3), (11, 12)}
    return {k: (-v if k in against else v) for k, v in GHATEE_FLOWS.items()}
