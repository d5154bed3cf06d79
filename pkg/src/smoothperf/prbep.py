"""PRBEP risk: exact (separation search) and smoothed (coupled clipped dual).

The smoothed risk is

    max_{beta in [0,1]^n, sum_P beta = sum_N beta}  <c, beta> - (mu/2) ||beta||^2

with ``c_i = -(2/n) y_i <w, x_i> + [i in P] / n_plus``.  Introducing a
multiplier ``nu`` for the coupling constraint, every coordinate becomes a
clipped linear function of ``nu`` and the constraint residual is a
piecewise linear, nonincreasing function of ``nu`` whose root is located by
sorting its breakpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, scores
from .smoothing import RiskEval


@dataclass(frozen=True)
class ContingencyCounts:
    b: int  # positives labelled -1
    c: int  # negatives labelled +1


@dataclass(frozen=True)
class PrbepDual:
    beta: np.ndarray
    nu: float
    coeffs: np.ndarray


def _signs(n, pos_idx):
    s = -np.ones(n)
    s[pos_idx] = 1.0
    return s


def prbep_linear_coeffs(w, d: Dataset):
    d.check_both_classes()
    c = (-2.0 / d.n) * d.y * scores(w, d)
    c[d.pos_idx] += 1.0 / d.n_plus
    return c


def clip_beta(c, nu, mu, s):
    return np.clip((c - s * nu) / mu, 0.0, 1.0)


def solve_coupled_clip(c, mu, pos_idx) -> PrbepDual:
    """Maximize ``<c, beta> - mu/2 ||beta||^2`` over the coupled box in O(n log n).

    ``pos_idx`` lists the coordinates in P; all others are in N.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    c = np.asarray(c, dtype=np.float64)
    n = c.size
    s = _signs(n, pos_idx)
    is_pos = s > 0
    n_plus = int(is_pos.sum())

    # Free interval of beta_i(nu) is [lo_i, hi_i]: beta_i = 1 on one side, 0 on the other.
    # On P, beta_i falls from 1 to 0 over [c_i - mu, c_i]; on N, beta_j rises from 0 to 1
    # over [-c_j, mu - c_j], which enters h with a minus sign.  Both lower the slope of h
    # by 1/mu at lo and restore it at hi.
    lo = np.where(is_pos, c - mu, -c)
    hi = lo + mu
    bp = np.concatenate([lo, hi])
    dslope = np.concatenate([np.full(n, -1.0 / mu), np.full(n, 1.0 / mu)])
    order = np.argsort(bp, kind="stable")
    bp = bp[order]
    slope = np.cumsum(dslope[order])
    # h at each breakpoint; h = n_plus left of the first breakpoint
    h = n_plus + np.concatenate([[0.0], np.cumsum(slope[:-1] * np.diff(bp))])

    k = int(np.argmax(h <= 0.0)) if np.any(h <= 0.0) else 2 * n
    if k == 0 or n == 0:
        nu = bp[0] if n else 0.0
    elif k == 2 * n:
        # h never reaches 0 numerically; it is flat at its right-end value
        nu = bp[-1]
    else:
        left, right = bp[k - 1], bp[k]
        if right - left <= 0.0:
            nu = right
        else:
            mid = 0.5 * (left + right)
            free = (lo < mid) & (mid < hi)
            at_one = np.where(is_pos, mid <= lo, mid >= hi)
            n_free = int(free.sum())
            if n_free == 0:
                nu = mid
            else:
                # sum_P (c_i - nu)/mu + #P_at_one = sum_N (c_j + nu)/mu + #N_at_one
                num = (c[free & is_pos].sum() - c[free & ~is_pos].sum()
                       + mu * (int((at_one & is_pos).sum()) - int((at_one & ~is_pos).sum())))
                nu = min(max(num / n_free, left), right)
    beta = clip_beta(c, nu, mu, s)
    return PrbepDual(beta=beta, nu=float(nu), coeffs=c)


def dual_value(c, beta, mu):
    return float(c @ beta - 0.5 * mu * (beta @ beta))


def smoothed_prbep_eval(w, d: Dataset, mu) -> RiskEval:
    c = prbep_linear_coeffs(w, d)
    dual = solve_coupled_clip(c, mu, d.pos_idx)
    coef = (-2.0 / d.n) * d.y * dual.beta
    return RiskEval(dual_value(c, dual.beta, mu), d.X.T @ coef)


def prbep_dual(w, d: Dataset, mu) -> PrbepDual:
    return solve_coupled_clip(prbep_linear_coeffs(w, d), mu, d.pos_idx)


def exact_prbep_separation(w, d: Dataset):
    """Return ``(value, z)`` for the most violating labeling with b = c.

    Flipping k positives and k negatives is best done on the lowest scoring
    positives and the highest scoring negatives; k is scanned with prefix
    sums and the smallest maximizing k wins.
    """
    d.check_both_classes()
    s = scores(w, d)
    pos = d.pos_idx[np.argsort(s[d.pos_idx], kind="stable")]
    neg = d.neg_idx[np.argsort(-s[d.neg_idx], kind="stable")]
    kmax = min(d.n_plus, d.n_minus)
    k = np.arange(kmax + 1)
    cum_p = np.concatenate([[0.0], np.cumsum(s[pos[:kmax]])])
    cum_n = np.concatenate([[0.0], np.cumsum(s[neg[:kmax]])])
    obj = k / d.n_plus + (2.0 / d.n) * (cum_n - cum_p)
    best = int(np.argmax(obj))
    z = d.y.astype(np.float64)
    z[pos[:best]] = -1.0
    z[neg[:best]] = 1.0
    return float(obj[best]), z


def exact_prbep_risk(w, d: Dataset) -> RiskEval:
    value, z = exact_prbep_separation(w, d)
    return RiskEval(value, d.X.T @ ((z - d.y) / d.n))


def contingency_counts(z, d: Dataset) -> ContingencyCounts:
    z = np.asarray(z)
    return ContingencyCounts(b=int(np.sum(z[d.pos_idx] == -1)),
                             c=int(np.sum(z[d.neg_idx] == 1)))
