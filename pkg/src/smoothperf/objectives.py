"""Risk callables for a (loss, dataset) pair, exact and smoothed."""

from __future__ import annotations

from functools import partial

from .data import Dataset
from .prbep import exact_prbep_risk, smoothed_prbep_eval
from .rocarea import exact_rocarea_risk, smoothed_rocarea_eval
from .smoothing import Loss, regularized_objective

_EXACT = {Loss.PRBEP: exact_prbep_risk, Loss.ROCAREA: exact_rocarea_risk}
_SMOOTH = {Loss.PRBEP: smoothed_prbep_eval, Loss.ROCAREA: smoothed_rocarea_eval}


def exact_risk(loss, d: Dataset):
    """``w -> RiskEval`` of the non-smooth empirical risk."""
    return partial(_EXACT[Loss(loss)], d=d)


def smoothed_risk(loss, d: Dataset, mu):
    return partial(_SMOOTH[Loss(loss)], d=d, mu=mu)


def as_pair(risk):
    """Adapt a RiskEval-valued callable to ``w -> (value, gradient)``."""
    def f(w):
        r = risk(w)
        return r.value, r.gradient
    return f


def regularized(risk, lam):
    """``w -> (J, grad J)`` for (lam/2)||w||^2 + risk(w)."""
    def f(w):
        return regularized_objective(lam, w, risk(w))
    return f


def primal_objective(loss, d: Dataset, lam):
    risk = exact_risk(loss, d)

    def J(w):
        return regularized_objective(lam, w, risk(w))[0]
    return J
