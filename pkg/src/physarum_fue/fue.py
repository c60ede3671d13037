"""Fuzzy user-equilibrium assignment by three-component Physarum dynamics.

One iteration:

1. every link gets a fuzzy length ``(c_l, c, c_r)`` from its current flow;
2. for every OD pair three grounded Poisson systems are solved, one per
   length component, with weights ``D / c_l``, ``D / c`` and ``D / c_r``;
3. the OD pressure triplets are summed node-wise into a global field;
4. each link's flow is ``D * Dis(p_i / c, p_j / c)`` on the global field;
5. conductivities follow ``D <- (D + dt x) / (1 + dt)``.

At a fixed point every used link has ``Dis(p_i / c, p_j / c) = 1``, i.e.
pressure drops match fuzzy link costs, which is the equilibrium condition.

The flow in step 4 does not conserve vehicles exactly, so the reported
link flows are the middle-component fluxes of the Poisson solves, which do.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DivisionBySupportContainingZero,
    MismatchedNodeSets,
    NoConvergence,
    ParameterOutOfRange,
)
from .fuzzy import TriangularFuzzy, defuzzify_centroid, dis_tri_array
from .laplacian import WEIGHT_FLOOR, assemble, edge_flux, solve_grounded
from .network import (
    BPR_ALPHA,
    BPR_BETA,
    Network,
    ODDemand,
    Path,
    enumerate_paths,
    fuzzy_link_cost,
    fuzzy_path_cost,
)

log = logging.getLogger(__name__)

D_FLOOR = 1e-12
USED_PATH_SHARE = 0.005
SCALINGS = ("componentwise", "fuzzy-division")


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of a fuzzy assignment run.

    ``scaling`` selects how endpoint pressures are scaled by the fuzzy link
    cost before taking the distance: ``"componentwise"`` divides each
    pressure component by the cost component that produced it,
    ``"fuzzy-division"`` applies triangular division (left by right, right
    by left) and re-sorts.
    """

    alpha_l: float = 0.2
    alpha_r: float = 0.2
    dt: float = 1.0
    max_iters: int = 100
    eps: float = 1e-4
    D0: float = 1.0
    bpr_alpha: float = BPR_ALPHA
    bpr_beta: float = BPR_BETA
    scaling: str = "componentwise"
    max_hops: int | None = None
    strict: bool = False

    def __post_init__(self):
        if not 0.0 <= self.alpha_l < 1.0:
            raise ParameterOutOfRange(f"alpha_l must lie in [0, 1), got {self.alpha_l}")
        if self.alpha_r < 0.0:
            raise ParameterOutOfRange(f"alpha_r must be >= 0, got {self.alpha_r}")
        for name in ("dt", "eps", "D0"):
            if not getattr(self, name) > 0:
                raise ParameterOutOfRange(f"{name} must be > 0, got {getattr(self, name)}")
        if self.max_iters < 0:
            raise ParameterOutOfRange(f"max_iters must be >= 0, got {self.max_iters}")
        if self.scaling not in SCALINGS:
            raise ParameterOutOfRange(f"scaling must be one of {SCALINGS}, got {self.scaling!r}")


@dataclass
class FuzzyPressureField:
    """Pressure triplet ``(p_l, p, p_r)`` per node, as an ``(n, 3)`` array."""

    nodes: tuple[int, ...]
    values: np.ndarray

    def __getitem__(self, node: int) -> TriangularFuzzy:
        return TriangularFuzzy.normalized(*self.values[self.nodes.index(node)])

    def triplet(self, node: int) -> tuple[float, float, float]:
        return tuple(float(v) for v in self.values[self.nodes.index(node)])


@dataclass
class TraceRecord:
    iteration: int
    flows: np.ndarray
    conductivity: np.ndarray


@dataclass
class SolverState:
    D: np.ndarray
    x: np.ndarray
    iteration: int = 0
    od_flux: dict = field(default_factory=dict)
    trace: list[TraceRecord] = field(default_factory=list)


@dataclass(frozen=True)
class PathCost:
    od: tuple[int, int]
    path: Path
    triplet: TriangularFuzzy
    centroid: float
    flow: float

    def to_json(self) -> dict:
        return {
            "od": list(self.od),
            "path": list(self.path.nodes),
            "triplet": self.triplet.to_json(),
            "centroid": self.centroid,
            "flow": self.flow,
        }


@dataclass
class AssignmentResult:
    network: Network
    config: SolverConfig
    flows: np.ndarray            # |sum of signed middle-component fluxes|
    per_od_flows: dict           # od -> signed middle-component flux per link
    dynamic_flows: np.ndarray    # D * Dis(...) values that drive the conductivities
    conductivity: np.ndarray
    path_costs: list[PathCost]
    wardrop_gap: float
    iterations: int
    converged: bool
    trace: list[TraceRecord]

    def flow_dict(self) -> dict[tuple[int, int], float]:
        return self.network.flow_dict(self.flows)

    def path_flows(self, od) -> dict[Path, float]:
        return {pc.path: pc.flow for pc in self.path_costs if pc.od == tuple(od)}

    def used_paths(self, od) -> list[PathCost]:
        od = tuple(od)
        q = self.network.demand(*od).q
        return [pc for pc in self.path_costs if pc.od == od and pc.flow > USED_PATH_SHARE * q]

    def origin_outflow(self, od) -> float:
        o = od[0]
        flux = self.per_od_flows[tuple(od)]
        total = 0.0
        for link, v in zip(self.network.links, flux):
            if link.i == o:
                total += v
            elif link.j == o:
                total -= v
        return total


def _check_costs(network: Network):
    zero = [link.key for link in network.links if link.c0 <= 0]
    if zero:
        raise DivisionBySupportContainingZero(f"links with zero free-flow cost: {zero}")


def init_state(network: Network, config: SolverConfig) -> SolverState:
    _check_costs(network)
    m = network.n_links
    return SolverState(D=np.full(m, float(config.D0)), x=np.zeros(m))


def assign_lengths(state: SolverState, network: Network, config: SolverConfig) -> list[TriangularFuzzy]:
    return [
        fuzzy_link_cost(link, float(x), config.alpha_l, config.alpha_r, config.bpr_alpha, config.bpr_beta)
        for link, x in zip(network.links, state.x)
    ]


def _length_array(lengths) -> np.ndarray:
    if isinstance(lengths, np.ndarray):
        return lengths
    return np.array([c.astuple() for c in lengths], dtype=float)


def solve_od_pressures(state: SolverState, network: Network, lengths, od: ODDemand) -> FuzzyPressureField:
    """Pressure triplets for one OD pair, destination grounded in all three systems."""
    C = _length_array(lengths)
    system = assemble(network, np.ones(network.n_links), od.o, od.d, od.q)
    values = np.empty((len(network.nodes), 3))
    for k in range(3):
        system.weights = np.maximum(state.D / C[:, k], WEIGHT_FLOOR)
        values[:, k] = solve_grounded(system).values
    return FuzzyPressureField(network.nodes, values)


def middle_flux(state: SolverState, network: Network, lengths, pressure: FuzzyPressureField) -> np.ndarray:
    """Signed flux ``D / c * (p_i - p_j)`` of the middle component, in stored link orientation."""
    C = _length_array(lengths)
    heads, tails = network.incidence
    p = pressure.values[:, 1]
    w = np.maximum(state.D / C[:, 1], WEIGHT_FLOOR)
    return w * (p[heads] - p[tails])


def aggregate_pressures(fields: list[FuzzyPressureField]) -> FuzzyPressureField:
    if not fields:
        raise ValueError("no pressure fields to aggregate")
    nodes = fields[0].nodes
    total = np.zeros_like(fields[0].values)
    for f in fields:
        if f.nodes != nodes:
            raise MismatchedNodeSets("pressure fields cover different node sets")
        total = total + f.values
    return FuzzyPressureField(nodes, total)


def _scaled_pressures(P: np.ndarray, C: np.ndarray, scaling: str) -> np.ndarray:
    if scaling == "componentwise":
        return P / C
    # triangular division pairs the left pressure with the right cost and vice versa
    return np.sort(P / C[:, ::-1], axis=1)


def compute_link_flow(state: SolverState, network: Network, global_pressure: FuzzyPressureField,
                      lengths, scaling: str = "componentwise") -> np.ndarray:
    """``D * Dis(p_i / c, p_j / c)`` per link; nonnegative."""
    C = _length_array(lengths)
    if np.any(C[:, 0] <= 0):
        raise DivisionBySupportContainingZero("fuzzy link cost support touches zero")
    heads, tails = network.incidence
    P = global_pressure.values
    a = _scaled_pressures(P[heads], C, scaling)
    b = _scaled_pressures(P[tails], C, scaling)
    return state.D * dis_tri_array(a, b)


def update_conductivity(state: SolverState, flows, dt: float, floor: float = D_FLOOR) -> SolverState:
    x = np.asarray(flows, dtype=float)
    if np.any(x < 0):
        raise ParameterOutOfRange("link flows must be >= 0")
    D = np.maximum((state.D + dt * np.abs(x)) / (1.0 + dt), floor)
    return SolverState(D=D, x=x, iteration=state.iteration + 1, od_flux=state.od_flux, trace=state.trace)


def fue_step(state: SolverState, network: Network, config: SolverConfig) -> SolverState:
    lengths = _length_array(assign_lengths(state, network, config))
    fields, od_flux = [], {}
    for od in network.demands:
        f = solve_od_pressures(state, network, lengths, od)
        fields.append(f)
        od_flux[od.key] = middle_flux(state, network, lengths, f)
    x = compute_link_flow(state, network, aggregate_pressures(fields), lengths, config.scaling)
    new = update_conductivity(state, x, config.dt)
    new.od_flux = od_flux
    new.trace.append(TraceRecord(new.iteration, _net_flow(od_flux, network), new.D.copy()))
    return new


def _net_flow(od_flux: dict, network: Network) -> np.ndarray:
    total = np.zeros(network.n_links)
    for flux in od_flux.values():
        total = total + flux
    return np.abs(total)


def decompose_paths(network: Network, od: ODDemand, flux: np.ndarray, paths: list[Path],
                    net: np.ndarray | None = None) -> dict[Path, float]:
    """Split an OD's flux over ``paths`` by outgoing shares at each node.

    With ``net`` (the signed aggregate flow) given, link flux running against
    the aggregate direction is dropped first: it only cancels other OD pairs'
    traffic and carries no vehicles. Path flows are rescaled to sum to ``q``.
    """
    flux = np.asarray(flux, dtype=float)
    if net is not None:
        flux = np.where(np.sign(flux) == np.sign(net), flux, 0.0)
    out = {n: 0.0 for n in network.nodes}
    for link, v in zip(network.links, flux):
        if v > 0:
            out[link.i] += v
        elif v < 0:
            out[link.j] -= v
    shares = {}
    for path in paths:
        share = 1.0
        for i, j in path.edges:
            k = network.link_index(i, j)
            v = flux[k] if network.links[k].i == i else -flux[k]
            if v <= 0 or out[i] <= 0:
                share = 0.0
                break
            share *= v / out[i]
        shares[path] = share
    total = sum(shares.values())
    if total <= 0:
        return {path: 0.0 for path in paths}
    return {path: od.q * share / total for path, share in shares.items()}


def _path_costs(network: Network, config: SolverConfig, cost_flows: np.ndarray, od_flux: dict) -> list[PathCost]:
    costs = []
    net = sum(od_flux.values(), np.zeros(network.n_links))
    for od in network.demands:
        flux = od_flux.get(od.key, np.zeros(network.n_links))
        paths = enumerate_paths(network, od, config.max_hops)
        shares = decompose_paths(network, od, flux, paths, net)
        for path in paths:
            tri = fuzzy_path_cost(network, path, cost_flows, config.alpha_l, config.alpha_r,
                                  config.bpr_alpha, config.bpr_beta)
            costs.append(PathCost(od.key, path, tri, defuzzify_centroid(tri), float(shares[path])))
    return costs


def _gap_from_costs(network: Network, path_costs: list[PathCost]) -> float:
    gap = 0.0
    for od in network.demands:
        used = [pc.centroid for pc in path_costs
                if pc.od == od.key and pc.flow > USED_PATH_SHARE * od.q]
        if len(used) > 1:
            low = min(used)
            gap = max(gap, (max(used) - low) / low)
    return gap


def wardrop_gap(result: AssignmentResult, network: Network | None = None,
                config: SolverConfig | None = None) -> float:
    """Largest relative excess of a used path's centroid cost over the cheapest used path.

    A path counts as used when it carries more than 0.5% of its OD demand.
    Passing ``network`` or ``config`` re-evaluates the path costs under them.
    """
    if network is None and config is None:
        return _gap_from_costs(result.network, result.path_costs)
    network = network or result.network
    config = config or result.config
    costs = _path_costs(network, config, result.dynamic_flows, result.per_od_flows)
    return _gap_from_costs(network, costs)


def fue_run(network: Network, config: SolverConfig | None = None) -> AssignmentResult:
    """Run the fuzzy Physarum assignment until the flow change drops below ``eps``.

    Runs at most ``config.max_iters`` iterations. Hitting the limit is not an
    error unless ``config.strict`` is set, in which case :class:`NoConvergence`
    is raised with the partial result attached.
    """
    config = config or SolverConfig()
    if not network.demands:
        raise ParameterOutOfRange("network has no OD demands")
    state = init_state(network, config)
    converged = False
    while state.iteration < config.max_iters:
        new = fue_step(state, network, config)
        change = float(np.max(np.abs(new.x - state.x)))
        state = new
        if change < config.eps:
            converged = True
            break
    log.debug("fue_run stopped after %d iterations (converged=%s)", state.iteration, converged)
    od_flux = {od.key: state.od_flux.get(od.key, np.zeros(network.n_links)) for od in network.demands}
    path_costs = _path_costs(network, config, state.x, od_flux)
    result = AssignmentResult(
        network=network,
        config=config,
        flows=_net_flow(od_flux, network),
        per_od_flows=od_flux,
        dynamic_flows=state.x.copy(),
        conductivity=state.D.copy(),
        path_costs=path_costs,
        wardrop_gap=_gap_from_costs(network, path_costs),
        iterations=state.iteration,
        converged=converged,
        trace=state.trace,
    )
    if config.strict and not converged:
        raise NoConvergence(f"flow change still >= {config.eps} after {state.iteration} iterations", result)
    return result


def with_config(config: SolverConfig, **changes) -> SolverConfig:
    return replace(config, **changes)
