"""Brute-force references used to verify the fast risk routines.

These are deliberately naive: exhaustive labeling enumeration, per-pair
loops, an iterative projection solver and central finite differences.
They ship with the package because the test suite depends on them.
"""

import math

import numpy as np

from .data import Dataset, scores

MAX_ENUM_N = 16
MAX_PAIRS = 10_000


def all_labelings(n):
    """Every z in {-1, +1}^n, one per row."""
    bits = (np.arange(2 ** n)[:, None] >> np.arange(n)) & 1
    return 2.0 * bits - 1.0


def enumerate_prbep_risk(w, d: Dataset):
    """Max over all 2^n labelings with b == c of b/n_plus + (1/n) sum s_i (z_i - y_i)."""
    if d.n > MAX_ENUM_N:
        raise ValueError(f"enumeration limited to n <= {MAX_ENUM_N}")
    s = scores(w, d)
    y = d.y.astype(np.float64)
    Z = all_labelings(d.n)
    pos = y > 0
    b = np.sum((Z < 0) & pos, axis=1)
    c = np.sum((Z > 0) & ~pos, axis=1)
    vals = b / d.n_plus + (Z - y) @ s / d.n
    return float(vals[b == c].max())


def enumerate_rocarea_risk(w, d: Dataset):
    if d.m > MAX_PAIRS:
        raise ValueError(f"enumeration limited to {MAX_PAIRS} pairs")
    s = scores(w, d)
    total = 0.0
    for i in d.pos_idx:
        for j in d.neg_idx:
            diff = s[i] - s[j]
            total += max(0.5 * (1 - z) + z * diff for z in (-1.0, 1.0))
    return total / d.m


def brute_gamma(aP, aN):
    """Row sums, column sums, total and squared total of median(1, a_i - a_j, -1).

    Every sum is exactly rounded (math.fsum) over the explicit pair matrix.
    """
    B = np.clip(np.subtract.outer(np.asarray(aP, dtype=np.float64),
                                  np.asarray(aN, dtype=np.float64)), -1.0, 1.0)
    rows = np.array([math.fsum(r) for r in B])
    cols = np.array([math.fsum(c) for c in B.T])
    return rows, cols, math.fsum(B.ravel()), math.fsum((B * B).ravel())


def _project_box(v):
    return np.clip(v, 0.0, 1.0)


def _project_coupling(v, s):
    # hyperplane <s, v> = 0
    return v - (s @ v) / (s @ s) * s


def _dykstra(v, s, iters=1_000_000, tol=1e-14):
    """Euclidean projection onto [0,1]^n intersected with {<s, v> = 0}."""
    x = v.copy()
    p = np.zeros_like(v)
    q = np.zeros_like(v)
    for _ in range(iters):
        y = _project_box(x + p)
        p = x + p - y
        x = _project_coupling(y + q, s)
        q = y + q - x
        # iterates can stall for many sweeps while p drifts; only agreement
        # of the two sets' iterates means convergence
        if np.max(np.abs(x - y)) <= tol:
            break
    return _project_box(x)


def reference_smoothed_prbep(c, mu, pos_idx, max_iter=20000):
    """Projected-gradient ascent on <c, beta> - mu/2 ||beta||^2 over the coupled box.

    Independent of the breakpoint search.  Returns ``(beta, value)``.
    """
    c = np.asarray(c, dtype=np.float64)
    n = c.size
    if n > 50:
        raise ValueError("reference solver limited to n <= 50")
    s = -np.ones(n)
    s[np.asarray(pos_idx, dtype=int)] = 1.0

    def f(b):
        return float(c @ b - 0.5 * mu * (b @ b))

    # gradient step 1/mu lands on c/mu; projecting it is the fixed point map
    beta = np.zeros(n)
    val = f(beta)
    for _ in range(max_iter):
        step = beta + (c - mu * beta) / mu
        new = _dykstra(step, s)
        new_val = f(new)
        done = abs(new_val - val) < 1e-12 and np.max(np.abs(new - beta)) < 1e-12
        beta, val = new, new_val
        if done:
            break
    return beta, val


def finite_diff_gradient(f, w, rel_step=1e-6):
    """Central differences with per-coordinate step rel_step * (1 + |w_i|)."""
    w = np.asarray(w, dtype=np.float64)
    g = np.empty_like(w)
    for i in range(w.size):
        h = rel_step * (1.0 + abs(w[i]))
        e = np.zeros_like(w)
        e[i] = h
        fp, fm = f(w + e), f(w - e)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise FloatingPointError(f"non-finite function value near coordinate {i}")
        g[i] = (fp - fm) / (2.0 * h)
    return g
