"""Finite-volume solvers for a 4x4 hyperbolic two-layer thin-film system.

Exact Riemann solver, a second-order scheme built on closed-form interface
time derivatives, and first-order Godunov plus MUSCL-RK2 baselines, with
reproduction drivers for convergence tables and validation suites.
"""

from .core import (
    ConservedState,
    EigenDecomposition,
    InvariantState,
    StateSpaceClass,
    classify,
    eigen,
    flux,
    from_primitive_invariants,
    jacobian,
    to_invariants,
    v_from_eta,
)
from .errors import (
    ConfigMismatch,
    DegenerateState,
    DomainError,
    NoRoot,
    ParseError,
    SingularSystem,
    SolverError,
    StateSpaceViolation,
    ValidationError,
)
from .grp import acoustic_solve, assemble_and_solve, batch_interface, grp_interface
from .riemann import WaveConfig, WaveFan, WaveKind, sample, sample_many, solve_star_states
from .scheme import (
    BoundaryCondition,
    GridState,
    LimiterMode,
    SchemeConfig,
    SchemeKind,
    SimulationLog,
    run_simulation,
)

__version__ = "0.1.0"

__all__ = [
    "ConservedState",
    "EigenDecomposition",
    "InvariantState",
    "StateSpaceClass",
    "classify",
    "eigen",
    "flux",
    "from_primitive_invariants",
    "jacobian",
    "to_invariants",
    "v_from_eta",
    "ConfigMismatch",
    "DegenerateState",
    "DomainError",
    "NoRoot",
    "ParseError",
    "SingularSystem",
    "SolverError",
    "StateSpaceViolation",
    "ValidationError",
    "acoustic_solve",
    "assemble_and_solve",
    "batch_interface",
    "grp_interface",
    "WaveConfig",
    "WaveFan",
    "WaveKind",
    "sample",
    "sample_many",
    "solve_star_states",
    "BoundaryCondition",
    "GridState",
    "LimiterMode",
    "SchemeConfig",
    "SchemeKind",
    "SimulationLog",
    "run_simulation",
]
