"""Direct optimization of PRBEP and ROCArea for linear classifiers.

Smoothed risks (value and gradient in O(n log n + nnz)) are minimized with
L-BFGS or an accelerated gradient method; the exact non-smooth risks are
minimized with a cutting-plane bundle method for comparison.
"""

from .data import Dataset, SparseVector, dot, dump_svmlight, load_svmlight, parse_svmlight, radius, scores
from .metrics import prbep_metric, rocarea_metric
from .prbep import exact_prbep_risk, smoothed_prbep_eval, solve_coupled_clip
from .rocarea import exact_rocarea_risk, gamma_sums, pair_potentials, smoothed_rocarea_eval
from .smoothing import (
    Loss,
    RiskEval,
    SmoothingParams,
    iteration_estimate,
    lipschitz_bound,
    mu_hat,
    regularized_objective,
    smoothing_constants,
)

__version__ = "0.1.0"
