"""Limited-memory BFGS with a strong Wolfe line search."""

from __future__ import annotations

import logging
import warnings
from collections import deque

import numpy as np
from scipy.optimize import line_search
from scipy.optimize._linesearch import LineSearchWarning

from .trace import CpuClock, SolverConfig, SolverResult, record

log = logging.getLogger(__name__)

C1 = 1e-4
C2 = 0.9
PAST = 5


class _Cached:
    """Evaluate ``objective`` once per point for the separate f / f' callbacks."""

    def __init__(self, objective):
        self.objective = objective
        self.x = None
        self.fg = None
        self.nfev = 0

    def __call__(self, x):
        if self.x is None or not np.array_equal(x, self.x):
            f, g = self.objective(x)
            f = float(f)
            g = np.asarray(g, dtype=np.float64)
            if not np.isfinite(f) or not np.all(np.isfinite(g)):
                raise FloatingPointError("objective returned a non-finite value")
            self.x = np.array(x, copy=True)
            self.fg = (f, g)
            self.nfev += 1
        return self.fg

    def f(self, x):
        return self(x)[0]

    def g(self, x):
        return self(x)[1]


def two_loop(g, history):
    """Return -H g for the inverse-Hessian approximation held in ``history``."""
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(history):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    if history:
        s, y, _ = history[-1]
        q *= (s @ y) / (y @ y)
    for (s, y, rho), a in zip(history, reversed(alphas)):
        b = rho * (y @ q)
        q += (a - b) * s
    return -q


def lbfgs_minimize(objective, w0, cfg: SolverConfig, monitor=None) -> SolverResult:
    """Minimize ``objective(w) -> (value, gradient)`` from ``w0``.

    Stops when ||g|| <= tol * max(1, ||w||), when the relative decrease
    over the last five iterations falls below ``tol``, or after
    ``cfg.max_iters`` iterations.  A line-search failure ends the run with
    the best iterate found so far.
    """
    fun = _Cached(objective)
    clock = CpuClock()
    w = np.array(w0, dtype=np.float64, copy=True)
    f, g = fun(w)
    history = deque(maxlen=cfg.lbfgs_buffer)
    past = deque([f], maxlen=PAST + 1)
    trace = []
    record(trace, clock, 0, w, f, monitor)

    status = "max_iters"
    k = 0
    while k < cfg.max_iters:
        if np.linalg.norm(g) <= cfg.tol * max(1.0, np.linalg.norm(w)):
            status = "gradient"
            break
        d = two_loop(g, history) if history else -g / max(1.0, np.linalg.norm(g))
        if g @ d >= 0:
            history.clear()
            d = -g / max(1.0, np.linalg.norm(g))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LineSearchWarning)
            alpha, *_ = line_search(fun.f, fun.g, w, d, gfk=g, old_fval=f, c1=C1, c2=C2)
        if alpha is None and history:
            # retry once along steepest descent with fresh memory
            history.clear()
            d = -g / max(1.0, np.linalg.norm(g))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", LineSearchWarning)
                alpha, *_ = line_search(fun.f, fun.g, w, d, gfk=g, old_fval=f, c1=C1, c2=C2)
        if alpha is None:
            status = "line_search_failed"
            log.warning("line search failed at iteration %d", k)
            break

        w_new = w + alpha * d
        f_new, g_new = fun(w_new)
        if not f_new < f:
            status = "no_decrease"
            break
        s, y = w_new - w, g_new - g
        sy = s @ y
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            history.append((s, y, 1.0 / sy))
        w, f, g = w_new, f_new, g_new
        k += 1
        record(trace, clock, k, w, f, monitor)

        past.append(f)
        if len(past) > PAST and (past[0] - f) / max(abs(f), 1e-300) < cfg.tol:
            status = "objective"
            break

    return SolverResult(w=w, trace=trace, status=status, n_iter=k,
                        info={"nfev": fun.nfev, "value": f})
