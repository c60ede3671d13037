"""Frank-Wolfe solver for the crisp Beckmann user-equilibrium program.

Used as the independent reference for the crisp limit of the Physarum
assignment. Links are undirected; traffic in either direction adds to the
same link flow.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence, NoPathExists, ParameterOutOfRange
from .network import BPR_ALPHA, BPR_BETA, Network, Path

LINE_SEARCH_STEPS = 64


@dataclass
class FWState:
    x: np.ndarray
    objective: float
    gap: float
    iteration: int
    per_od: dict = field(default_factory=dict)   # od -> signed flow, stored orientation
    objectives: list[float] = field(default_factory=list)


def link_costs(network: Network, x, alpha: float = BPR_ALPHA, beta: float = BPR_BETA) -> np.ndarray:
    c0 = np.array([l.c0 for l in network.links])
    u = np.array([l.u for l in network.links])
    return c0 * (1.0 + alpha * (np.asarray(x, dtype=float) / u) ** beta)


def beckmann_objective(network: Network, flows, alpha: float = BPR_ALPHA, beta: float = BPR_BETA) -> float:
    """Sum over links of the integrated BPR cost from 0 to the link flow."""
    x = np.asarray(network.flow_array(flows), dtype=float)
    if np.any(x < 0):
        raise ParameterOutOfRange("flows must be >= 0")
    c0 = np.array([l.c0 for l in network.links])
    u = np.array([l.u for l in network.links])
    return float(np.sum(c0 * x + c0 * alpha * x ** (beta + 1) / ((beta + 1) * u ** beta)))


def shortest_path(network: Network, costs, o: int, d: int) -> Path:
    """Dijkstra with ties broken by the lexicographically smallest node sequence."""
    costs = np.asarray(costs, dtype=float)
    if np.any(costs < 0):
        raise ParameterOutOfRange("link costs must be >= 0")
    adj = network.adjacency()
    best: dict[int, tuple[float, tuple]] = {o: (0.0, (o,))}
    heap = [(0.0, (o,))]
    done = set()
    while heap:
        dist, trail = heapq.heappop(heap)
        node = trail[-1]
        if node in done:
            continue
        done.add(node)
        if node == d:
            return Path(trail)
        for nxt in adj[node]:
            if nxt in done:
                continue
            cand = (dist + costs[network.link_index(node, nxt)], trail + (nxt,))
            if nxt not in best or cand < best[nxt]:
                best[nxt] = cand
                heapq.heappush(heap, cand)
    raise NoPathExists(f"no path from {o} to {d}")


def _path_vector(network: Network, path: Path, q: float) -> np.ndarray:
    """``(2, m)`` array of flow along (row 0) and against (row 1) stored link orientation."""
    v = np.zeros((2, network.n_links))
    for i, j in path.edges:
        k = network.link_index(i, j)
        v[0 if network.links[k].i == i else 1, k] += q
    return v


def _aon_by_od(network: Network, costs, demands=None) -> np.ndarray:
    demands = network.demands if demands is None else demands
    rows = [_path_vector(network, shortest_path(network, costs, od.o, od.d), od.q) for od in demands]
    return np.array(rows).reshape(len(rows), 2, network.n_links)


def all_or_nothing(network: Network, costs, demands=None) -> np.ndarray:
    """Load each demand entirely on its current minimum-cost path; returns link flows."""
    costs = np.asarray(costs, dtype=float)
    if np.any(costs <= 0):
        raise ParameterOutOfRange("all-or-nothing needs positive link costs")
    return _aon_by_od(network, costs, demands).sum(axis=(0, 1))


def _line_search(network: Network, x, direction, alpha, beta) -> float:
    def slope(lam):
        return float(np.dot(link_costs(network, x + lam * direction, alpha, beta), direction))

    if slope(1.0) <= 0:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(LINE_SEARCH_STEPS):
        mid = 0.5 * (lo + hi)
        if slope(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi)


def fw_solve(network: Network, tol: float = 1e-6, max_iters: int = 10_000,
             alpha: float = BPR_ALPHA, beta: float = BPR_BETA) -> FWState:
    """Frank-Wolfe with exact bisection line search.

    The relative gap is ``c(x) . (x - y) / Z(x)`` where ``y`` is the
    all-or-nothing flow at the current costs.
    """
    if not network.demands:
        raise ParameterOutOfRange("network has no OD demands")
    keys = [od.key for od in network.demands]
    per_od = _aon_by_od(network, link_costs(network, np.zeros(network.n_links), alpha, beta))
    x = per_od.sum(axis=(0, 1))
    objectives = [beckmann_objective(network, x, alpha, beta)]
    gap = np.inf
    it = 0
    while it < max_iters:
        costs = link_costs(network, x, alpha, beta)
        target = _aon_by_od(network, costs)
        y = target.sum(axis=(0, 1))
        z = objectives[-1]
        gap = float(np.dot(costs, x - y)) / z if z > 0 else 0.0
        if gap < tol:
            break
        lam = _line_search(network, x, y - x, alpha, beta)
        per_od = per_od + lam * (target - per_od)
        x = per_od.sum(axis=(0, 1))
        objectives.append(beckmann_objective(network, x, alpha, beta))
        it += 1
    signed = {key: f[0] - f[1] for key, f in zip(keys, per_od)}
    state = FWState(x=x, objective=objectives[-1], gap=max(gap, 0.0), iteration=it,
                    per_od=signed, objectives=objectives)
    if gap >= tol:
        raise NoConvergence(f"relative gap {gap:.3g} >= {tol} after {it} iterations", state)
    return state
