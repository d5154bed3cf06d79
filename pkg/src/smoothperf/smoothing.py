"""Smoothing constants and the regularized objective shared by both losses."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import Dataset, radius


class Loss(str, Enum):
    PRBEP = "prbep"
    ROCAREA = "rocarea"


@dataclass(frozen=True)
class RiskEval:
    """A risk value together with a (sub)gradient in weight space."""

    value: float
    gradient: np.ndarray

    def __post_init__(self):
        if not math.isfinite(self.value) or not np.all(np.isfinite(self.gradient)):
            raise FloatingPointError("non-finite risk evaluation")


@dataclass(frozen=True)
class SmoothingParams:
    epsilon: float
    mu_multiplier: float
    mu: float
    D: float
    A_norm_bound: float

    @classmethod
    def for_dataset(cls, loss, d: Dataset, epsilon=1e-3, mu_multiplier=1.0):
        D, bound = smoothing_constants(loss, d)
        return cls(epsilon, mu_multiplier, mu_multiplier * mu_hat(epsilon, D), D, bound)

    @property
    def lipschitz(self):
        return lipschitz_bound(self.A_norm_bound, self.mu)


def smoothing_constants(loss, d: Dataset):
    """Return ``(D, bound)`` where D is the prox diameter and bound >= ||A||.

    PRBEP: D = n/2 and ||A|| <= 2R/sqrt(n).  ROCArea: D = m/2 and the
    Frobenius norm of the pair matrix, which is at most 2R/sqrt(m).
    """
    loss = Loss(loss)
    d.check_both_classes()
    R = radius(d)
    if loss is Loss.PRBEP:
        return d.n / 2.0, 2.0 * R / math.sqrt(d.n)
    m = d.m
    # sum_{i in P, j in N} ||x_i - x_j||^2 expanded into per-class sums
    sq = np.asarray(d.X.multiply(d.X).sum(axis=1)).ravel()
    XP = np.asarray(d.X[d.pos_idx].sum(axis=0)).ravel()
    XN = np.asarray(d.X[d.neg_idx].sum(axis=0)).ravel()
    frob_sq = (d.n_minus * sq[d.pos_idx].sum() + d.n_plus * sq[d.neg_idx].sum()
               - 2.0 * float(XP @ XN))
    frob = math.sqrt(max(frob_sq, 0.0)) / m
    return m / 2.0, min(frob, 2.0 * R / math.sqrt(m))


def mu_hat(epsilon, D):
    if not epsilon > 0 or not D > 0:
        raise ValueError("epsilon and D must be positive")
    return epsilon / D


def lipschitz_bound(A_norm_bound, mu):
    """Upper bound on the gradient Lipschitz constant of the smoothed risk."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    return A_norm_bound ** 2 / mu


def regularized_objective(lam, w, risk: RiskEval):
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    w = np.asarray(w, dtype=np.float64)
    J = 0.5 * lam * float(w @ w) + risk.value
    return J, lam * w + risk.gradient


def iteration_estimate(L_mu, lam, Delta0, epsilon):
    """Step count for the accelerated method on the smoothed objective.

    Returns the smaller of the sublinear and the linear-rate estimates;
    only the sublinear one when ``lam >= L_mu``.  Used for reporting.
    """
    if min(L_mu, lam, Delta0, epsilon) <= 0:
        raise ValueError("all inputs must be positive")
    sublinear = math.sqrt(4.0 * L_mu * Delta0 / epsilon)
    if lam >= L_mu:
        return sublinear
    # a negative log means the start is already accurate enough
    linear = max(0.0, math.log(L_mu * Delta0 / epsilon)) / -math.log1p(-math.sqrt(lam / L_mu))
    return min(sublinear, linear)
