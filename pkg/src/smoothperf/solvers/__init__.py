from .agm import agm_minimize
from .bundle import (BundleCut, bundle_minimize, dual_qp_simplex, project_simplex,
                     solve_simplex_qp)
from .lbfgs import lbfgs_minimize
from .trace import SolverConfig, SolverResult, TracePoint

__all__ = [
    "BundleCut",
    "SolverConfig",
    "SolverResult",
    "TracePoint",
    "agm_minimize",
    "bundle_minimize",
    "dual_qp_simplex",
    "lbfgs_minimize",
    "project_simplex",
    "solve_simplex_qp",
]
