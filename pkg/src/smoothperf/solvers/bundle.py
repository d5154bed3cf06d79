"""Cutting-plane (BMRM) minimization of (lam/2)||w||^2 + R(w) for non-smooth R.

Each iteration linearizes R at the current point and minimizes the
regularizer plus the piecewise-linear lower model through its dual, a
concave quadratic over the probability simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .trace import CpuClock, SolverConfig, SolverResult, record

QP_TOL = 1e-10
QP_MAX_ITER = 20000


@dataclass(frozen=True)
class BundleCut:
    slope: np.ndarray
    offset: float

    @classmethod
    def at(cls, w, value, subgradient):
        a = np.asarray(subgradient, dtype=np.float64)
        b = float(value) - float(a @ w)
        if not math.isfinite(b) or not np.all(np.isfinite(a)):
            raise FloatingPointError("non-finite cut")
        return cls(a, b)

    def __call__(self, w):
        return float(self.slope @ w) + self.offset


def project_simplex(v):
    """Euclidean projection onto {x >= 0, sum x = 1} by sorting."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = np.count_nonzero(u - css / ind > 0)
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


@dataclass
class QPResult:
    alpha: np.ndarray
    w: np.ndarray
    model_value: float
    residual: float
    n_iter: int


def _dual(alpha, G, b, lam):
    Ga = G @ alpha
    return float(b @ alpha - 0.5 / lam * (alpha @ Ga)), b - Ga / lam


def _fw_gap(alpha, grad):
    # max over the simplex of the linearization minus its value at alpha;
    # bounds the suboptimality of alpha and vanishes exactly at a KKT point
    return float(grad.max() - grad @ alpha)


def _active_set(Q, b, alpha, tol, max_iter):
    """Primal active-set ascent for b.alpha - alpha'Q alpha / 2 on the simplex.

    On the support S the equality-constrained maximizer solves
    Q_SS x + nu 1 = b_S, 1'x = 1 (least squares, since Q is only PSD).
    Steps toward it are cut short where a coordinate would go negative;
    the coordinate with the largest gradient above nu joins S otherwise.
    """
    alpha = alpha.copy()
    S = alpha > 0.0
    for it in range(max_iter):
        idx = np.flatnonzero(S)
        k = idx.size
        K = np.zeros((k + 1, k + 1))
        K[:k, :k] = Q[np.ix_(idx, idx)]
        K[:k, k] = 1.0
        K[k, :k] = 1.0
        rhs = np.append(b[idx], 1.0)
        sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
        if np.linalg.norm(K @ sol - rhs) > 1e-9 * (1.0 + np.linalg.norm(rhs)):
            # unbounded on the affine hull of S: ascend along the null-space
            # direction until a coordinate leaves the support
            M = np.vstack([K[:k, :k], np.ones(k)])
            d = b[idx] - M.T @ np.linalg.lstsq(M.T, b[idx], rcond=None)[0]
            x = None
        else:
            x, nu = sol[:k], sol[k]
            d = x - alpha[idx]
        neg = d < 0.0
        if x is not None and not np.any(x < 0.0):
            alpha[idx] = x
            grad = b - Q @ alpha
            out = np.flatnonzero(~S)
            if out.size == 0:
                return alpha, it
            j = out[np.argmax(grad[out])]
            if grad[j] - nu <= tol:
                return alpha, it
            S[j] = True
            continue
        if not np.any(neg):
            return alpha, it
        tau = np.min(alpha[idx][neg] / -d[neg])
        if x is not None:
            tau = min(tau, 1.0)
        alpha[idx] = np.maximum(alpha[idx] + tau * d, 0.0)
        alpha[idx[alpha[idx] <= 1e-15]] = 0.0
        alpha /= alpha.sum()
        S = alpha > 0.0
    return alpha, max_iter


def _accelerated_pg(G, b, lam, alpha, tol, max_iter):
    """Accelerated projected gradient with backtracking and restarts."""
    val, grad = _dual(alpha, G, b, lam)
    best, best_val = alpha, val
    L = max(np.max(np.diag(G)) / lam, 1e-12)
    z, tk = alpha, 1.0
    residual = _fw_gap(alpha, grad)
    it = 0
    while residual > tol and it < max_iter:
        it += 1
        _, zgrad = _dual(z, G, b, lam)
        while True:
            new = project_simplex(z + zgrad / L)
            step = new - z
            ss = step @ step
            if ss == 0.0 or (step @ (G @ step)) / lam <= L * ss * (1.0 + 1e-12):
                break
            L *= 2.0
        new_val, new_grad = _dual(new, G, b, lam)
        if new_val < val:
            if z is alpha:
                # plain projected step made no progress: rounding floor
                break
            # restart momentum when the objective drops
            z, tk = alpha, 1.0
            continue
        tk_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * tk * tk))
        z = new + ((tk - 1.0) / tk_new) * (new - alpha)
        alpha, val, grad, tk = new, new_val, new_grad, tk_new
        if val > best_val:
            best, best_val = alpha, val
        residual = _fw_gap(alpha, grad)
    return best, it


def solve_simplex_qp(G, b, lam, alpha0=None, tol=QP_TOL, max_iter=QP_MAX_ITER):
    """Maximize b.alpha - (1/2 lam) alpha' G alpha over the simplex.

    Closed form for one or two cuts.  Otherwise an active-set method,
    warm-started from ``alpha0``, with accelerated projected gradient as
    the fallback when it does not reach ``tol``.  Returns
    ``(alpha, value, residual, iters)`` where residual is the Frank-Wolfe gap.
    """
    t = b.size
    if t == 1:
        alpha = np.ones(1)
        val, grad = _dual(alpha, G, b, lam)
        return alpha, val, 0.0, 0
    if t == 2:
        dd = G[0, 0] + G[1, 1] - 2.0 * G[0, 1]
        if dd <= 0.0:
            theta = 1.0 if b[0] > b[1] else (0.0 if b[0] < b[1] else 0.5)
        else:
            # stationarity in theta for alpha = (theta, 1 - theta)
            theta = (lam * (b[0] - b[1]) - (G[0, 1] - G[1, 1])) / dd
            theta = min(max(theta, 0.0), 1.0)
        alpha = np.array([theta, 1.0 - theta])
        val, grad = _dual(alpha, G, b, lam)
        return alpha, val, max(_fw_gap(alpha, grad), 0.0), 0

    if alpha0 is None:
        alpha = np.zeros(t)
        alpha[np.argmax(b - np.diag(G) / (2.0 * lam))] = 1.0
    else:
        alpha = project_simplex(np.asarray(alpha0, dtype=np.float64))
    start_val, _ = _dual(alpha, G, b, lam)
    cand, it = _active_set(G / lam, b, alpha, tol, max(10 * t, 100))
    val, grad = _dual(cand, G, b, lam)
    if val >= start_val:
        alpha = cand
    else:
        val, grad = start_val, _dual(alpha, G, b, lam)[1]
    if _fw_gap(alpha, grad) > tol:
        alpha, it2 = _accelerated_pg(G, b, lam, alpha, tol, max_iter)
        it += it2
        val, grad = _dual(alpha, G, b, lam)
    return alpha, val, max(_fw_gap(alpha, grad), 0.0), it


def dual_qp_simplex(cuts, lam, alpha0=None) -> QPResult:
    """Minimize (lam/2)||w||^2 + max_t (<a_t, w> + b_t) through its simplex dual."""
    if not cuts:
        raise ValueError("need at least one cut")
    A = np.vstack([c.slope for c in cuts])
    b = np.array([c.offset for c in cuts])
    G = A @ A.T
    alpha, val, res, it = solve_simplex_qp(G, b, lam, alpha0)
    return QPResult(alpha, -(A.T @ alpha) / lam, val, res, it)


def bundle_minimize(exact_risk, cfg: SolverConfig, w0, monitor=None) -> SolverResult:
    """BMRM on the exact objective; stops once the duality gap is <= cfg.epsilon.

    ``exact_risk(w)`` returns an object with ``value`` and ``gradient``
    (a subgradient).  The best iterate observed is returned.
    """
    lam = cfg.lam
    clock = CpuClock()
    w = np.array(w0, dtype=np.float64, copy=True)
    slopes = []
    offsets = []
    G = np.zeros((0, 0))
    alpha = None
    best_w, best_J = w, math.inf
    lower = -math.inf
    trace = []
    gaps = []
    lowers = []
    status = "max_iters"
    k = 0
    while k < cfg.max_iters:
        r = exact_risk(w)
        J = 0.5 * lam * float(w @ w) + float(r.value)
        if not math.isfinite(J):
            raise FloatingPointError("non-finite objective")
        if J < best_J:
            best_w, best_J = w, J
        cut = BundleCut.at(w, r.value, r.gradient)

        # grow the Gram matrix by one row/column
        row = np.array([s @ cut.slope for s in slopes] + [cut.slope @ cut.slope])
        t = len(slopes)
        G_new = np.empty((t + 1, t + 1))
        G_new[:t, :t] = G
        G_new[t, :] = row
        G_new[:, t] = row
        G = G_new
        slopes.append(cut.slope)
        offsets.append(cut.offset)
        a0 = None if alpha is None else np.append(alpha, 0.0)
        alpha, model, _, _ = solve_simplex_qp(G, np.array(offsets), lam, a0)
        lower = max(lower, model)
        gap = best_J - lower
        gaps.append(gap)
        lowers.append(lower)
        # rows track the best iterate so far, which is what gets returned
        record(trace, clock, k, best_w, best_J, monitor, smooth=False)
        k += 1
        if gap <= cfg.epsilon:
            status = "gap"
            break
        w = -(np.vstack(slopes).T @ alpha) / lam

    return SolverResult(w=best_w, trace=trace, status=status, n_iter=k,
                        info={"gaps": gaps, "lower_bounds": lowers, "value": best_J,
                              "n_cuts": len(slopes)})
