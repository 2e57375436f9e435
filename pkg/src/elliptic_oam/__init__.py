"""Ince-Gauss beams, their Laguerre-Gauss decomposition, and photon OAM."""

__version__ = "0.1.0"

from .beams import (
    BeamGeometry,
    ComplexField,
    EllipticPoint,
    cartesian_to_elliptic,
    eval_gaussian,
    eval_hg,
    eval_hig,
    eval_ig,
    eval_lg,
    sample_grid,
)
from .errors import (
    EllipticOamError,
    GridError,
    InvalidModeError,
    NonSymmetrizableError,
    SolverError,
    UnnormalizedStateError,
)
from .ince import (
    IncePolynomial,
    ModeIndex,
    Parity,
    build_recurrence_matrix,
    eval_angular,
    eval_radial,
    ince_ode_residual,
    solve_ince,
)
from .linalg import EigenSolution, TridiagonalMatrix, eigen_tridiagonal, integrate_plane
from .quantum import (
    Decomposition,
    LGIndex,
    OamCurve,
    QuantumModeState,
    decompose,
    find_crossings,
    find_turning_points,
    helical_state,
    oam_curve,
    oam_distribution,
    oam_expectation,
    sam_expectation,
)
from .vortex import Vortex, find_vortices, merge_vortex_regions, vortex_census

__all__ = [
    "BeamGeometry",
    "ComplexField",
    "Decomposition",
    "EigenSolution",
    "EllipticOamError",
    "EllipticPoint",
    "GridError",
    "IncePolynomial",
    "InvalidModeError",
    "LGIndex",
    "ModeIndex",
    "NonSymmetrizableError",
    "OamCurve",
    "Parity",
    "QuantumModeState",
    "SolverError",
    "TridiagonalMatrix",
    "UnnormalizedStateError",
    "Vortex",
    "build_recurrence_matrix",
    "cartesian_to_elliptic",
    "decompose",
    "eigen_tridiagonal",
    "eval_angular",
    "eval_gaussian",
    "eval_hg",
    "eval_hig",
    "eval_ig",
    "eval_lg",
    "eval_radial",
    "find_crossings",
    "find_turning_points",
    "find_vortices",
    "helical_state",
    "ince_ode_residual",
    "integrate_plane",
    "merge_vortex_regions",
    "oam_curve",
    "oam_distribution",
    "oam_expectation",
    "sam_expectation",
    "sample_grid",
    "solve_ince",
    "vortex_census",
]
