"""Fuzzy user-equilibrium traffic assignment with Physarum-type network dynamics."""

from .baseline import FWState, all_or_nothing, beckmann_objective, fw_solve
from .errors import (
    AlphaOutOfRange,
    DisconnectedSourceSink,
    DivisionBySupportContainingZero,
    MismatchedNodeSets,
    NegativeFlow,
    NoConvergence,
    NoPathExists,
    ParameterOutOfRange,
    ParseError,
    PathNotInNetwork,
    PhysarumError,
    SingularSystem,
    UnknownFixture,
    ValidationError,
)
from .fue import AssignmentResult, SolverConfig, fue_run, wardrop_gap
from .fuzzy import (
    Interval,
    TrapezoidalFuzzy,
    TriangularFuzzy,
    alpha_cut,
    defuzzify_centroid,
    dis_numeric,
    dis_tri,
    trap_arith,
    tri_arith,
)
from .io import load_fixture, load_network, write_network
from .network import (
    Link,
    Network,
    ODDemand,
    Path,
    bpr_cost,
    check_conservation,
    enumerate_paths,
    fuzzy_link_cost,
    fuzzy_path_cost,
)
from .shortest_path import sp_run, sp_step

__version__ = "0.1.0"
