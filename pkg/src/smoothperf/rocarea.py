"""ROCArea risk: exact pairwise risk and its smoothed counterpart.

Both run in O(n log n + nnz) without enumerating the n_plus * n_minus pairs.
For the smoothed risk each pair dual is ``median(1, a_i - a_j, -1)`` and
only its row sums (over N) and column sums (over P) are needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset, scores
from .smoothing import RiskEval


@dataclass(frozen=True)
class PairPotentials:
    aP: np.ndarray
    aN: np.ndarray


@dataclass(frozen=True)
class GammaSums:
    gammaP: np.ndarray
    gammaN: np.ndarray
    sum_beta: float
    sum_beta_sq: float


def pair_potentials(w, d: Dataset, mu) -> PairPotentials:
    if not mu > 0:
        raise ValueError("mu must be positive")
    d.check_both_classes()
    s = scores(w, d)
    scale = 1.0 / (mu * d.m)
    return PairPotentials(aP=(s[d.pos_idx] - 0.25) * scale,
                          aN=(s[d.neg_idx] + 0.25) * scale)


def _row_sums(a, b):
    """For sorted a and b: sums over j of median(1, a_i - b_j, -1) and of its square.

    Both inputs are sorted, so the window searches walk the two lists in
    step like a merge.
    """
    # extended-precision prefix sums: window sums are differences of large totals
    bl = b.astype(np.longdouble)
    cs = np.concatenate([[0.0], np.cumsum(bl)])
    cs2 = np.concatenate([[0.0], np.cumsum(bl * bl)])
    # window of j with a_i - b_j in [-1, 1]
    lo = np.searchsorted(b, a - 1.0, side="left")
    hi = np.searchsorted(b, a + 1.0, side="right")
    n_plus_one = lo                 # b_j < a_i - 1  -> +1
    n_minus_one = b.size - hi       # b_j > a_i + 1  -> -1
    width = hi - lo
    al = a.astype(np.longdouble)
    win_sum = cs[hi] - cs[lo]
    win_sq = cs2[hi] - cs2[lo]
    gamma = n_plus_one - n_minus_one + (width * al - win_sum)
    sq = n_plus_one + n_minus_one + (width * al * al - 2.0 * al * win_sum + win_sq)
    return gamma, sq


def gamma_sums(pp: PairPotentials) -> GammaSums:
    oP = np.argsort(pp.aP, kind="stable")
    oN = np.argsort(pp.aN, kind="stable")
    aP = np.asarray(pp.aP, dtype=np.float64)[oP]
    aN = np.asarray(pp.aN, dtype=np.float64)[oN]
    gP_sorted, sqP = _row_sums(aP, aN)
    # column sums: median(1, a_i - a_j, -1) = -median(1, a_j - a_i, -1)
    gN_sorted, _ = _row_sums(aN, aP)
    gP = np.empty(gP_sorted.size)
    gP[oP] = gP_sorted
    gN = np.empty(gN_sorted.size)
    gN[oN] = -gN_sorted
    # totals are summed before rounding back to float64
    return GammaSums(gammaP=gP, gammaN=gN, sum_beta=float(gP_sorted.sum()),
                     sum_beta_sq=float(sqP.sum()))


def smoothed_rocarea_eval(w, d: Dataset, mu) -> RiskEval:
    pp = pair_potentials(w, d, mu)
    g = gamma_sums(pp)
    value = 0.5 + mu * (pp.aP @ g.gammaP - pp.aN @ g.gammaN) - 0.5 * mu * g.sum_beta_sq
    coef = np.empty(d.n)
    coef[d.pos_idx] = g.gammaP
    coef[d.neg_idx] = -g.gammaN
    return RiskEval(float(value), d.X.T @ (coef / d.m))


def exact_rocarea_separation(w, d: Dataset):
    """Return ``(value, kappa)`` where kappa holds the row/column sums of z*.

    Pair (i, j) takes z = +1 when s_i - s_j >= 1/2 and z = -1 otherwise.
    The comparison is made as ``s_j <= s_i - 1/2`` on both sides so the
    row and column counts agree.
    """
    d.check_both_classes()
    s = scores(w, d)
    sP = s[d.pos_idx]
    sN = s[d.neg_idx]
    tP = sP - 0.5
    sN_sorted = np.sort(sN)
    tP_sorted = np.sort(tP)
    csN = np.concatenate([[0.0], np.cumsum(sN_sorted)])
    nP, nN = sP.size, sN.size

    k = np.searchsorted(sN_sorted, tP, side="right")   # #j with z_ij = +1
    above = csN[k]
    rows = (k * sP - above) + (nN - k) * (1.0 - sP) + (csN[-1] - above)
    value = rows.sum() / d.m

    kappa = np.empty(d.n)
    kappa[d.pos_idx] = 2 * k - nN
    kP = nP - np.searchsorted(tP_sorted, sN, side="left")  # #i with z_ij = +1
    kappa[d.neg_idx] = 2 * kP - nP
    return float(value), kappa


def exact_rocarea_risk(w, d: Dataset) -> RiskEval:
    value, kappa = exact_rocarea_separation(w, d)
    coef = kappa.copy()
    coef[d.neg_idx] *= -1.0
    return RiskEval(value, d.X.T @ (coef / d.m))
