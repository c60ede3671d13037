"""Crisp Physarum shortest-path dynamics.

Tubes are network links with length ``L`` and conductivity ``D``. Each step
solves the pressure system for a unit-like injection ``I0`` and updates
``D <- (D + dt |Q|) / (1 + dt)``. Tubes on the shortest source-sink path
converge to ``D = I0``; all others decay to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence, ParameterOutOfRange
from .laplacian import WEIGHT_FLOOR, assemble, edge_flux, solve_grounded, solve_pressures
from .network import Network, Path

D_FLOOR = 1e-12


@dataclass
class SPState:
    D: np.ndarray
    iteration: int = 0
    flux: np.ndarray | None = field(default=None, repr=False)


@dataclass
class SPResult:
    path: Path | None
    state: SPState
    converged: bool
    selected: list[tuple[int, int]]  # links above threshold, stored orientation

    @property
    def is_path(self) -> bool:
        return self.path is not None

    def length(self, network: Network, lengths) -> float:
        if self.path is None:
            return float("nan")
        L = np.asarray(lengths, dtype=float)
        return float(sum(L[network.link_index(i, j)] for i, j in self.path.edges))


def init_sp_state(network: Network, D0: float = 1.0) -> SPState:
    if not D0 > 0:
        raise ParameterOutOfRange(f"D0 must be > 0, got {D0}")
    return SPState(np.full(network.n_links, float(D0)))


def _check(lengths, I0, dt, n_links):
    L = np.asarray(lengths, dtype=float)
    if L.shape != (n_links,):
        raise ValueError(f"expected {n_links} lengths, got shape {L.shape}")
    if np.any(L <= 0):
        raise ParameterOutOfRange("tube lengths must be > 0")
    if not I0 > 0:
        raise ParameterOutOfRange(f"I0 must be > 0, got {I0}")
    if not dt > 0:
        raise ParameterOutOfRange(f"dt must be > 0, got {dt}")
    return L


def sp_step(state: SPState, network: Network, lengths, source: int, sink: int,
            I0: float = 1.0, dt: float = 0.01) -> SPState:
    L = _check(lengths, I0, dt, network.n_links)
    _, Q = solve_pressures(network, state.D / L, source, sink, I0)
    D = np.maximum((state.D + dt * np.abs(Q)) / (1.0 + dt), D_FLOOR)
    return SPState(D, state.iteration + 1, Q)


def _threshold_path(network: Network, D: np.ndarray, source: int, sink: int,
                    threshold: float) -> tuple[Path | None, list[tuple[int, int]]]:
    chosen = [k for k in range(network.n_links) if D[k] > threshold]
    selected = [network.links[k].key for k in chosen]
    adj: dict[int, list[int]] = {}
    for k in chosen:
        link = network.links[k]
        adj.setdefault(link.i, []).append(link.j)
        adj.setdefault(link.j, []).append(link.i)
    # a simple path: endpoints of degree 1, interior of degree 2, one connected walk
    if not chosen or len(adj.get(source, ())) != 1 or len(adj.get(sink, ())) != 1:
        return None, selected
    if any(len(nbrs) != 2 for n, nbrs in adj.items() if n not in (source, sink)):
        return None, selected
    trail, prev = [source], None
    while trail[-1] != sink:
        nxt = [m for m in adj[trail[-1]] if m != prev]
        prev = trail[-1]
        trail.append(nxt[0])
        if len(trail) > len(adj):
            return None, selected
    if len(trail) - 1 != len(chosen):
        return None, selected
    return Path(tuple(trail)), selected


def sp_run(network: Network, lengths, source: int, sink: int, I0: float = 1.0,
           dt: float = 0.01, max_iters: int = 100_000, eps: float = 1e-6,
           D0: float = 1.0) -> SPResult:
    """Iterate :func:`sp_step` until the largest conductivity change is below ``eps``.

    The path is read off as the links with ``D > I0 / 2``. If the run
    converges onto something that is not a simple path (tied shortest paths)
    the result carries ``path=None``; if it stops at ``max_iters`` without a
    path, :class:`NoConvergence` is raised.
    """
    L = _check(lengths, I0, dt, network.n_links)
    state = init_sp_state(network, D0)
    # same update as sp_step, with the system assembled once and reweighted in place
    system = assemble(network, state.D / L, source, sink, I0)
    D = state.D
    converged = False
    n = 0
    Q = None
    while n < int(max_iters):
        system.weights = np.maximum(D / L, WEIGHT_FLOOR)
        Q = edge_flux(system, solve_grounded(system))
        new = np.maximum((D + dt * np.abs(Q)) / (1.0 + dt), D_FLOOR)
        change = float(np.max(np.abs(new - D)))
        D = new
        n += 1
        if change < eps:
            converged = True
            break
    state = SPState(D, n, Q)
    path, selected = _threshold_path(network, state.D, source, sink, 0.5 * I0)
    result = SPResult(path, state, converged, selected)
    if path is None and not converged:
        raise NoConvergence(
            f"no source-sink path above threshold after {state.iteration} iterations", result
        )
    return result
