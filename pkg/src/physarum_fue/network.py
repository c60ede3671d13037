"""Traffic network data model, BPR link costs and fuzzy path costs.

Links are undirected: each link carries one nonnegative aggregate flow, and
signed per-OD flows are measured in the stored ``i -> j`` orientation.
Flow vectors are numpy arrays aligned with ``Network.links``; any function that
takes flows also accepts a mapping keyed by ``(i, j)``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import NegativeFlow, NoPathExists, ParameterOutOfRange, PathNotInNetwork, ValidationError
from .fuzzy import TriangularFuzzy

BPR_ALPHA = 0.15
BPR_BETA = 4.0


@dataclass(frozen=True)
class Link:
    i: int
    j: int
    c0: float
    u: float

    def __post_init__(self):
        if self.i == self.j:
            raise ValidationError(f"self-loop at node {self.i}")
        if not self.c0 >= 0:
            raise ValidationError(f"free-flow cost must be >= 0, got {self.c0}", "c0")
        if not self.u > 0:
            raise ValidationError(f"capacity must be > 0, got {self.u}", "u")

    @property
    def key(self) -> tuple[int, int]:
        return (self.i, self.j)

    @property
    def pair(self) -> frozenset:
        return frozenset((self.i, self.j))


@dataclass(frozen=True)
class ODDemand:
    o: int
    d: int
    q: float

    def __post_init__(self):
        if self.o == self.d:
            raise ValidationError(f"origin equals destination ({self.o})")
        if not self.q > 0:
            raise ValidationError(f"demand must be > 0, got {self.q}", "q")

    @property
    def key(self) -> tuple[int, int]:
        return (self.o, self.d)


@dataclass(frozen=True)
class Path:
    """Simple path given by its node sequence."""

    nodes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError(f"path repeats a node: {self.nodes}")

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.nodes, self.nodes[1:]))

    def __len__(self) -> int:
        return max(len(self.nodes) - 1, 0)

    def __add__(self, other: Path) -> Path:
        if not self.nodes:
            return other
        if not other.nodes:
            return self
        if self.nodes[-1] != other.nodes[0]:
            raise ValueError("paths do not share a junction node")
        return Path(self.nodes + other.nodes[1:])

    def __str__(self) -> str:
        return "→".join(str(n) for n in self.nodes)


@dataclass
class Network:
    nodes: tuple[int, ...]
    links: tuple[Link, ...]
    demands: tuple[ODDemand, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.nodes = tuple(self.nodes)
        self.links = tuple(self.links)
        self.demands = tuple(self.demands)
        if len(set(self.nodes)) != len(self.nodes):
            raise ValidationError("duplicate node ids", "nodes")
        known = set(self.nodes)
        self._index = {}
        for k, link in enumerate(self.links):
            for end in (link.i, link.j):
                if end not in known:
                    raise ValidationError(f"endpoint {end} is not a network node", f"links[{k}]")
            if link.pair in self._index:
                raise ValidationError(f"duplicate link between {link.i} and {link.j}", f"links[{k}]")
            self._index[link.pair] = k
        seen = set()
        for k, dem in enumerate(self.demands):
            for end in (dem.o, dem.d):
                if end not in known:
                    raise ValidationError(f"node {end} is not a network node", f"demands[{k}]")
            if dem.key in seen:
                raise ValidationError(f"duplicate demand {dem.key}", f"demands[{k}]")
            seen.add(dem.key)
        for k, dem in enumerate(self.demands):
            if not self._reachable(dem.o, dem.d):
                raise ValidationError(f"no path from {dem.o} to {dem.d}", f"demands[{k}]")

    @cached_property
    def node_index(self) -> dict[int, int]:
        return {n: k for k, n in enumerate(self.nodes)}

    @cached_property
    def incidence(self) -> tuple[np.ndarray, np.ndarray]:
        """Node positions of each link's ``i`` and ``j`` ends."""
        pos = self.node_index
        heads = np.array([pos[l.i] for l in self.links], dtype=int)
        tails = np.array([pos[l.j] for l in self.links], dtype=int)
        return heads, tails

    @cached_property
    def components(self) -> np.ndarray:
        """Connected-component label per node position."""
        labels = np.arange(len(self.nodes))

        def root(k):
            while labels[k] != k:
                labels[k] = labels[labels[k]]
                k = labels[k]
            return k

        for h, t in zip(*self.incidence):
            rh, rt = root(h), root(t)
            if rh != rt:
                labels[max(rh, rt)] = min(rh, rt)
        return np.array([root(k) for k in range(len(self.nodes))])

    @property
    def n_links(self) -> int:
        return len(self.links)

    def link_index(self, i: int, j: int) -> int:
        try:
            return self._index[frozenset((i, j))]
        except KeyError:
            raise PathNotInNetwork(f"no link between {i} and {j}") from None

    def has_link(self, i: int, j: int) -> bool:
        return frozenset((i, j)) in self._index

    def neighbors(self, node: int) -> list[int]:
        out = []
        for link in self.links:
            if link.i == node:
                out.append(link.j)
            elif link.j == node:
                out.append(link.i)
        return sorted(out)

    def _reachable(self, a: int, b: int) -> bool:
        adj = self.adjacency()
        stack, seen = [a], {a}
        while stack:
            n = stack.pop()
            if n == b:
                return True
            for m in adj[n]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return False

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {n: [] for n in self.nodes}
        for link in self.links:
            adj[link.i].append(link.j)
            adj[link.j].append(link.i)
        for n in adj:
            adj[n].sort()
        return adj

    def demand(self, o: int, d: int) -> ODDemand:
        for dem in self.demands:
            if dem.key == (o, d):
                return dem
        raise KeyError((o, d))

    def flow_array(self, flows) -> np.ndarray:
        """Coerce a flow mapping or sequence into an array aligned with ``links``."""
        if isinstance(flows, Mapping):
            arr = np.zeros(self.n_links)
            for (i, j), value in flows.items():
                k = self.link_index(i, j)
                link = self.links[k]
                arr[k] = value if (link.i, link.j) == (i, j) else -value
            return arr
        arr = np.asarray(flows, dtype=float)
        if arr.shape != (self.n_links,):
            raise ValueError(f"expected {self.n_links} link flows, got shape {arr.shape}")
        return arr

    def flow_dict(self, flows: Sequence[float]) -> dict[tuple[int, int], float]:
        return {link.key: float(v) for link, v in zip(self.links, flows)}

    def sorted_link_order(self) -> list[int]:
        return sorted(range(self.n_links), key=lambda k: self.links[k].key)


def bpr_cost(link: Link, x: float, alpha: float = BPR_ALPHA, beta: float = BPR_BETA) -> float:
    if x < 0:
        raise NegativeFlow(f"flow must be >= 0, got {x}")
    return link.c0 * (1.0 + alpha * (x / link.u) ** beta)


def fuzzy_link_cost(link: Link, x: float, alpha_l: float, alpha_r: float,
                    bpr_alpha: float = BPR_ALPHA, bpr_beta: float = BPR_BETA) -> TriangularFuzzy:
    """Fuzzy cost ``(c((1-alpha_l)x), c(x), c((1+alpha_r)x))``."""
    if not 0.0 <= alpha_l < 1.0:
        raise ParameterOutOfRange(f"alpha_l must lie in [0, 1), got {alpha_l}")
    if alpha_r < 0.0:
        raise ParameterOutOfRange(f"alpha_r must be >= 0, got {alpha_r}")
    if x < 0:
        raise NegativeFlow(f"flow must be >= 0, got {x}")
    return TriangularFuzzy(
        bpr_cost(link, (1.0 - alpha_l) * x, bpr_alpha, bpr_beta),
        bpr_cost(link, x, bpr_alpha, bpr_beta),
        bpr_cost(link, (1.0 + alpha_r) * x, bpr_alpha, bpr_beta),
    )


def fuzzy_path_cost(network: Network, path: Path, flows, alpha_l: float, alpha_r: float,
                    bpr_alpha: float = BPR_ALPHA, bpr_beta: float = BPR_BETA) -> TriangularFuzzy:
    """Fuzzy sum of link costs along ``path``; flow signs are ignored."""
    x = np.abs(network.flow_array(flows))
    total = TriangularFuzzy(0.0, 0.0, 0.0)
    for i, j in path.edges:
        if not network.has_link(i, j):
            raise PathNotInNetwork(f"path {path} uses missing link ({i}, {j})")
        k = network.link_index(i, j)
        total = total + fuzzy_link_cost(network.links[k], float(x[k]), alpha_l, alpha_r, bpr_alpha, bpr_beta)
    return total


def enumerate_paths(network: Network, od, max_hops: int | None = None) -> list[Path]:
    """All simple ``o -> d`` paths with at most ``max_hops`` links.

    ``od`` is an :class:`ODDemand` or an ``(o, d)`` pair. Paths come out in
    lexicographic order of their node sequences.
    """
    o, d = od.key if isinstance(od, ODDemand) else od
    if o == d:
        raise ValidationError(f"origin equals destination ({o})")
    if max_hops is None:
        max_hops = len(network.nodes) - 1
    if max_hops < 1:
        raise ParameterOutOfRange(f"max_hops must be >= 1, got {max_hops}")
    adj = network.adjacency()
    found: list[Path] = []

    def walk(trail: list[int], visited: set[int]):
        node = trail[-1]
        if node == d:
            found.append(Path(tuple(trail)))
            return
        if len(trail) - 1 >= max_hops:
            return
        for nxt in adj[node]:
            if nxt not in visited:
                visited.add(nxt)
                trail.append(nxt)
                walk(trail, visited)
                trail.pop()
                visited.discard(nxt)

    walk([o], {o})
    if not found:
        raise NoPathExists(f"no path from {o} to {d} within {max_hops} hops")
    return sorted(found, key=lambda p: p.nodes)


@dataclass(frozen=True)
class ConservationReport:
    max_violation: float
    per_od: dict

    @property
    def ok(self) -> bool:
        return self.max_violation == 0.0


def node_balance(network: Network, flows) -> dict[int, float]:
    """Net outflow at each node for signed flows in stored link orientation."""
    x = network.flow_array(flows)
    bal = {n: 0.0 for n in network.nodes}
    for link, v in zip(network.links, x):
        bal[link.i] += v
        bal[link.j] -= v
    return bal


def _violation(network: Network, flows, supply: dict[int, float]) -> float:
    bal = node_balance(network, flows)
    return max((abs(bal[n] - supply.get(n, 0.0)) for n in network.nodes), default=0.0)


def check_conservation(network: Network, per_od_flows: Mapping) -> ConservationReport:
    """Maximum node-balance violation of signed per-OD flows.

    ``per_od_flows`` maps ``(o, d)`` to a signed flow vector. Net outflow must
    equal ``q`` at the origin, ``-q`` at the destination and zero elsewhere.
    """
    per_od = {}
    for dem in network.demands:
        flows = per_od_flows.get(dem.key)
        if flows is None:
            flows = np.zeros(network.n_links)
        per_od[dem.key] = _violation(network, flows, {dem.o: dem.q, dem.d: -dem.q})
    return ConservationReport(max(per_od.values(), default=0.0), per_od)


def check_total_conservation(network: Network, flows) -> float:
    """Maximum node-balance violation of signed aggregate flows over all demands."""
    supply: dict[int, float] = {}
    for dem in network.demands:
        supply[dem.o] = supply.get(dem.o, 0.0) + dem.q
        supply[dem.d] = supply.get(dem.d, 0.0) - dem.q
    return _violation(network, flows, supply)


def links_from_rows(rows: Iterable[Sequence[float]]) -> list[Link]:
    return [Link(int(i), int(j), float(c0), float(u)) for i, j, c0, u in rows]
