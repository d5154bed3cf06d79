from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


@dataclass
class TracePoint:
    iter: int
    cpu_ms: float
    primal_J: float
    smooth_J: Optional[float] = None
    test_metric: Optional[float] = None


@dataclass
class SolverConfig:
    max_iters: int = 1000
    tol: float = 1e-6
    lam: float = 1.0
    lbfgs_buffer: int = 6
    epsilon: float = 1e-3

    def __post_init__(self):
        if self.lbfgs_buffer < 1:
            raise ValueError("lbfgs_buffer must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be non-negative")


@dataclass
class SolverResult:
    w: np.ndarray
    trace: list = field(default_factory=list)
    status: str = ""
    n_iter: int = 0
    info: dict = field(default_factory=dict)

    def __iter__(self):
        # allows ``w, trace = solver(...)``
        return iter((self.w, self.trace))


Monitor = Callable[[np.ndarray], dict]


class CpuClock:
    """Process CPU time in ms, excluding time spent inside ``paused`` blocks."""

    def __init__(self):
        self._start = time.process_time()
        self._excluded = 0.0

    def ms(self):
        return (time.process_time() - self._start - self._excluded) * 1e3

    def run_excluded(self, fn, *args):
        t0 = time.process_time()
        try:
            return fn(*args)
        finally:
            self._excluded += time.process_time() - t0


def record(trace, clock, k, w, objective_value, monitor: Optional[Monitor], smooth=True):
    """Append a trace row; monitor time is not charged to the solver."""
    cpu = clock.ms()
    extra = clock.run_excluded(monitor, w) if monitor is not None else {}
    trace.append(TracePoint(
        iter=k,
        cpu_ms=cpu,
        primal_J=extra.get("primal_J", objective_value),
        smooth_J=objective_value if smooth else None,
        test_metric=extra.get("test_metric"),
    ))
