"""Accelerated gradient for the strongly convex smoothed objective."""

from __future__ import annotations

import math

import numpy as np

from .trace import CpuClock, SolverConfig, SolverResult, record


def agm_minimize(risk, L, lam, w0, cfg: SolverConfig, monitor=None) -> SolverResult:
    """Minimize (lam/2)||w||^2 + risk(w), where risk has an L-Lipschitz gradient.

    Constant-momentum scheme for a (L + lam)-smooth, lam-strongly convex
    function: gradient step 1/(L + lam) from the extrapolated point, then
    momentum (1 - sqrt(q)) / (1 + sqrt(q)) with q = lam / (L + lam).
    Stops when the gradient norm at the current iterate is <= cfg.tol.
    """
    if not L > 0:
        raise ValueError("Lipschitz constant must be positive")
    if not lam > 0:
        raise ValueError("lambda must be positive")

    def J(w):
        r, g = risk(w)
        val = 0.5 * lam * float(w @ w) + float(r)
        grad = lam * w + np.asarray(g)
        if not math.isfinite(val) or not np.all(np.isfinite(grad)):
            raise FloatingPointError("objective returned a non-finite value")
        return val, grad

    clock = CpuClock()
    L_tot = L + lam
    sq = math.sqrt(lam / L_tot)
    momentum = (1.0 - sq) / (1.0 + sq)

    x = np.array(w0, dtype=np.float64, copy=True)
    fx, gx = J(x)
    y = x.copy()
    gy = gx
    trace = []
    record(trace, clock, 0, x, fx, monitor)
    status = "max_iters"
    k = 0
    while k < cfg.max_iters:
        if np.linalg.norm(gx) <= cfg.tol:
            status = "gradient"
            break
        x_new = y - gy / L_tot
        y = x_new + momentum * (x_new - x)
        x = x_new
        fx, gx = J(x)
        _, gy = J(y)
        k += 1
        record(trace, clock, k, x, fx, monitor)
    return SolverResult(w=x, trace=trace, status=status, n_iter=k, info={"value": fx})
