"""Mass- and energy-conserving time stepping for 1D nonlinear Schroedinger equations."""

from .grid import BoundaryCondition, ComplexState, Grid1D, apply_laplacian, inner_product
from .nonlinearity import Nonlinearity
from .schemes import SCHEME_NAMES, SchemeCoefficients, get_scheme
from .stepper import RunStatus, SolverConfig, StartupMode, fixed_point_update, run

__all__ = [
    "BoundaryCondition",
    "ComplexState",
    "Grid1D",
    "Nonlinearity",
    "RunStatus",
    "SCHEME_NAMES",
    "SchemeCoefficients",
    "SolverConfig",
    "StartupMode",
    "apply_laplacian",
    "fixed_point_update",
    "get_scheme",
    "inner_product",
    "run",
]
