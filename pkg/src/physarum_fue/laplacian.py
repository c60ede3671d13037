"""Grounded network Poisson systems.

For edge weights ``w_ij = D_ij / L_ij`` the pressures solve
``sum_i w_ij (p_i - p_j) = -q`` at the source, ``+q`` at the sink and ``0``
elsewhere; the sink row is replaced by ``p_sink = 0``. Nodes outside the
source/sink component have no defined pressure and are reported as 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .errors import DisconnectedSourceSink, ParameterOutOfRange, SingularSystem
from .network import Network

WEIGHT_FLOOR = 1e-12
RESIDUAL_RTOL = 1e-10
DENSE_LIMIT = 400  # node count above which the sparse solver is used


@dataclass
class PoissonSystem:
    nodes: tuple[int, ...]
    heads: np.ndarray      # node position of each edge's i end
    tails: np.ndarray      # node position of each edge's j end
    weights: np.ndarray
    rhs: np.ndarray        # net outflow per node; sums to zero
    source: int
    ground: int
    active: np.ndarray     # positions of nodes in the source/sink component

    def laplacian(self) -> sp.csr_matrix:
        n = len(self.nodes)
        h, t, w = self.heads, self.tails, self.weights
        rows = np.concatenate([h, t, h, t])
        cols = np.concatenate([h, t, t, h])
        vals = np.concatenate([w, w, -w, -w])
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def grounded(self):
        """Reduced matrix and right-hand side on the active component, ground row replaced.

        Dense for small systems, CSC otherwise.
        """
        n = len(self.nodes)
        act = self.active
        if n <= DENSE_LIMIT:
            h, t, w = self.heads, self.tails, self.weights
            flat = np.concatenate([h * (n + 1), t * (n + 1), h * n + t, t * n + h])
            mat = np.bincount(flat, np.concatenate([w, w, -w, -w]), minlength=n * n).reshape(n, n)
            if len(act) < n:
                mat = mat[np.ix_(act, act)]
        else:
            mat = self.laplacian()[act][:, act].tolil()
        b = self.rhs[act].copy()
        g = int(np.searchsorted(act, self.ground))
        mat[g, :] = 0.0
        mat[g, g] = 1.0
        b[g] = 0.0
        if sp.issparse(mat):
            mat = mat.tocsc()
        return mat, b


@dataclass
class PressureField:
    nodes: tuple[int, ...]
    values: np.ndarray

    def __getitem__(self, node: int) -> float:
        return float(self.values[self.nodes.index(node)])

    def as_dict(self) -> dict[int, float]:
        return {n: float(v) for n, v in zip(self.nodes, self.values)}


def assemble(network: Network, weights, source: int, sink: int, q: float,
             floor: float = WEIGHT_FLOOR) -> PoissonSystem:
    """Build the grounded Poisson system for one source/sink pair.

    Weights are clamped below at ``floor`` so that decayed edges keep the
    Laplacian connected.
    """
    if source == sink:
        raise ParameterOutOfRange("source and sink must differ")
    if not q > 0:
        raise ParameterOutOfRange(f"injection must be > 0, got {q}")
    w = np.asarray(weights, dtype=float)
    if w.shape != (network.n_links,):
        raise ValueError(f"expected {network.n_links} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ParameterOutOfRange("weights must be finite and nonnegative")
    pos = network.node_index
    s, g = pos[source], pos[sink]
    labels = network.components
    if labels[s] != labels[g]:
        raise DisconnectedSourceSink(f"no path between {source} and {sink}")
    heads, tails = network.incidence
    rhs = np.zeros(len(network.nodes))
    rhs[s] = q
    rhs[g] = -q
    return PoissonSystem(
        nodes=network.nodes, heads=heads, tails=tails, weights=np.maximum(w, floor),
        rhs=rhs, source=s, ground=g, active=np.flatnonzero(labels == labels[g]),
    )


def _solve(mat, b):
    if sp.issparse(mat):
        return spsolve(mat, b)
    return np.linalg.solve(mat, b)


def solve_grounded(system: PoissonSystem) -> PressureField:
    mat, b = system.grounded()
    try:
        sol = _solve(mat, b)
    except (np.linalg.LinAlgError, RuntimeError) as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(sol)):
        raise SingularSystem("pressure solve produced non-finite values")
    bound = RESIDUAL_RTOL * max(1.0, float(np.max(np.abs(b))))
    for _ in range(3):
        resid = b - mat @ sol
        if np.max(np.abs(resid)) <= bound:
            break
        sol = sol + _solve(mat, resid)
    p = np.zeros(len(system.nodes))
    p[system.active] = sol
    return PressureField(system.nodes, p)


def residual(system: PoissonSystem, field: PressureField) -> float:
    mat, b = system.grounded()
    return float(np.max(np.abs(mat @ field.values[system.active] - b)))


def edge_flux(system: PoissonSystem, field: PressureField) -> np.ndarray:
    """Signed flux ``w_ij (p_i - p_j)`` per edge, positive in the stored i->j direction."""
    p = field.values
    return system.weights * (p[system.heads] - p[system.tails])


def divergence(system: PoissonSystem, flux: np.ndarray) -> np.ndarray:
    """Net outflow at every node."""
    out = np.zeros(len(system.nodes))
    np.add.at(out, system.heads, flux)
    np.subtract.at(out, system.tails, flux)
    return out


def solve_pressures(network: Network, weights, source: int, sink: int, q: float,
                    floor: float = WEIGHT_FLOOR) -> tuple[PressureField, np.ndarray]:
    """Assemble, solve, and return ``(pressures, signed fluxes)``."""
    system = assemble(network, weights, source, sink, q, floor)
    field = solve_grounded(system)
    return field, edge_flux(system, field)
