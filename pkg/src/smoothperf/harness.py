"""Training runs, solver comparisons and their CSV / model-file outputs."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import objectives
from .data import Dataset, scores
from .metrics import prbep_metric, rocarea_metric
from .smoothing import Loss, SmoothingParams
from .solvers import SolverConfig, agm_minimize, bundle_minimize, lbfgs_minimize

log = logging.getLogger(__name__)

SOLVERS = ("lbfgs", "agm", "bundle")
TRACE_HEADER = ("iter", "cpu_ms", "primal_J", "smooth_J", "test_metric")
DEFAULT_EPSILON = 1e-3
DEFAULT_MU_MULTS = (1.0, 100.0, 1000.0)


@dataclass
class RunResult:
    loss: str
    solver: str
    mu_mult: Optional[float]
    w: np.ndarray
    trace: list
    status: str
    params: Optional[SmoothingParams] = None
    info: dict = field(default_factory=dict)

    @property
    def name(self):
        if self.mu_mult is None:
            return self.solver
        return f"{self.solver}@mu*{self.mu_mult:g}"


def evaluate_metric(loss, w, d: Dataset):
    s = scores(w, d)
    if Loss(loss) is Loss.PRBEP:
        return prbep_metric(s, d.y)
    return rocarea_metric(s, d.y)


def make_monitor(loss, train: Dataset, lam, test: Optional[Dataset] = None):
    """Per-iteration hook: exact primal objective on train, metric on test."""
    J = objectives.primal_objective(loss, train, lam)

    def monitor(w):
        out = {"primal_J": J(w)}
        if test is not None:
            out["test_metric"] = evaluate_metric(loss, w, test)
        return out
    return monitor


def run(train: Dataset, loss, solver, lam, epsilon=DEFAULT_EPSILON, mu_mult=1.0,
        max_iter=1000, tol=1e-6, lbfgs_buffer=6, test: Optional[Dataset] = None) -> RunResult:
    """Train one configuration from w = 0 and record a per-iteration trace."""
    loss = Loss(loss).value
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}")
    cfg = SolverConfig(max_iters=max_iter, tol=tol, lam=lam,
                       lbfgs_buffer=lbfgs_buffer, epsilon=epsilon)
    monitor = make_monitor(loss, train, lam, test)
    w0 = np.zeros(train.p)

    if solver == "bundle":
        if mu_mult != 1.0:
            log.warning("bundle works on the exact risk; ignoring mu multiplier %g", mu_mult)
        res = bundle_minimize(objectives.exact_risk(loss, train), cfg, w0, monitor=monitor)
        return RunResult(loss, solver, None, res.w, res.trace, res.status, info=res.info)

    params = SmoothingParams.for_dataset(loss, train, epsilon, mu_mult)
    risk = objectives.smoothed_risk(loss, train, params.mu)
    if solver == "lbfgs":
        res = lbfgs_minimize(objectives.regularized(risk, lam), w0, cfg, monitor=monitor)
    else:
        res = agm_minimize(objectives.as_pair(risk), params.lipschitz, lam, w0, cfg,
                           monitor=monitor)
    return RunResult(loss, solver, mu_mult, res.w, res.trace, res.status, params, res.info)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def format_trace(trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for tp in trace:
        w.writerow([tp.iter, _fmt(tp.cpu_ms), _fmt(tp.primal_J), _fmt(tp.smooth_J),
                    _fmt(tp.test_metric)])
    return buf.getvalue()


def write_trace(path, trace):
    with open(path, "w", newline="") as f:
        f.write(format_trace(trace))


def read_trace(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def save_model(path, w):
    """First line p, then one weight per line with 17 significant digits."""
    w = np.asarray(w, dtype=np.float64)
    with open(path, "w") as f:
        f.write(f"{w.size}\n")
        for v in w:
            f.write(f"{v:.17g}\n")


def load_model(path) -> np.ndarray:
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty model file")
    try:
        p = int(lines[0])
        w = np.array([float(v) for v in lines[1:]])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed model file ({exc})") from None
    if w.size != p:
        raise ValueError(f"{path}: header says {p} weights, found {w.size}")
    if not np.all(np.isfinite(w)):
        raise ValueError(f"{path}: non-finite weight")
    return w


def time_to_target(trace, target):
    """CPU ms of the first trace row with primal_J <= target, or None."""
    for tp in trace:
        if tp.primal_J <= target:
            return tp.cpu_ms
    return None


def compare(train: Dataset, loss, solvers, mu_mults, lam, epsilon=DEFAULT_EPSILON,
            max_iter=1000, tol=1e-6, lbfgs_buffer=6, test=None):
    """Run every (solver, mu multiplier) pair; bundle runs once.

    Returns ``(runs, summary)`` where each summary row reports the CPU time
    to reach J* + epsilon, J* being the best primal objective of any run.
    """
    solvers = list(solvers)
    if not solvers:
        raise ValueError("no solvers given")
    mu_mults = list(mu_mults) or [1.0]
    runs = []
    for solver in solvers:
        for mm in ([1.0] if solver == "bundle" else mu_mults):
            runs.append(run(train, loss, solver, lam, epsilon, mm, max_iter, tol,
                            lbfgs_buffer, test))
    J_star = min(tp.primal_J for r in runs for tp in r.trace)
    summary = []
    for r in runs:
        last = r.trace[-1]
        summary.append({
            "configuration": r.name,
            "cpu_ms_to_target": time_to_target(r.trace, J_star + epsilon),
            "final_primal_J": last.primal_J,
            "final_test_metric": last.test_metric,
        })
    return runs, summary


SUMMARY_HEADER = ("configuration", "cpu_ms_to_target", "final_primal_J", "final_test_metric")


def format_summary(summary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for row in summary:
        w.writerow([row["configuration"]] + [_fmt(row[k]) for k in SUMMARY_HEADER[1:]])
    return buf.getvalue()

