# sweep.py
# -----------------------------------------------------------------------------
# Cost sweep of the partial-information optimizer and active-set reporting.
# An active set of impulse j is reported as the contiguous runs of w-nodes
# where u_j = U; each run becomes one closed interval [w_lo, w_hi].
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from ..core.config import PICARD_MAX_ITERS, WORKERS
from ..core.errors import InputError
from ..core.utils import csv_text
from ..numerics.grid import Grid2D
from ..pde.policy import ControlPolicy, InfoMode
from .picard import OptimizationReport, optimize_partial
from .scenario import Scenario

logger = logging.getLogger(__name__)

INTERVAL_HEADER = ("c", "j", "tau", "w_lo", "w_hi")
OBJECTIVE_LOG_HEADER = ("c", "phi", "iterations", "converged")


@dataclass(frozen=True)
class ActiveInterval:
    c: float
    j: int          # 1-based impulse index
    tau: float
    w_lo: float
    w_hi: float

    @property
    def length(self) -> float:
        return self.w_hi - self.w_lo

    def as_row(self) -> Tuple[float, int, float, float, float]:
        return (self.c, self.j, self.tau, self.w_lo, self.w_hi)


def active_mask(policy: ControlPolicy, j: int) -> np.ndarray:
    """w-nodes where impulse j (0-based) transports; full controls count a node if any z is active."""
    u = policy.controls[j] == policy.cap
    return u.any(axis=1) if policy.mode is InfoMode.FULL else u


def _runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    edges = np.diff(np.concatenate(([0], mask.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1) - 1
    return list(zip(starts.tolist(), stops.tolist()))


def active_intervals(policy: ControlPolicy, grid: Grid2D, taus: Sequence[float], c: float) -> List[ActiveInterval]:
    """Closed w-intervals of u_j = U for every impulse, in (j, w) order."""
    if len(taus) != policy.n_impulses:
        raise InputError(f"{len(taus)} impulse times for {policy.n_impulses} controls")
    out = []
    for j, tau in enumerate(taus):
        for lo, hi in _runs(active_mask(policy, j)):
            out.append(ActiveInterval(float(c), j + 1, float(tau), float(grid.w[lo]), float(grid.w[hi])))
    return out


@dataclass
class SweepResult:
    c_values: Tuple[float, ...]
    reports: List[OptimizationReport]
    intervals: List[ActiveInterval] = field(default_factory=list)

    def report(self, c: float) -> OptimizationReport:
        return self.reports[self._index(c)]

    def _index(self, c: float) -> int:
        for i, value in enumerate(self.c_values):
            if math.isclose(value, c, rel_tol=0.0, abs_tol=1e-12):
                return i
        raise InputError(f"cost {c} was not part of the sweep")

    def active_measure(self, c: float, j: int) -> float:
        """Total length of the active intervals of impulse j (1-based) at cost c."""
        self._index(c)
        return math.fsum(iv.length for iv in self.intervals if iv.j == j and math.isclose(iv.c, c, abs_tol=1e-12))

    def active_nodes(self, c: float, j: int) -> np.ndarray:
        """Boolean w-mask of the active set of impulse j (1-based) at cost c."""
        return active_mask(self.report(c).policy, j - 1)

    @property
    def all_converged(self) -> bool:
        return all(r.converged for r in self.reports)

    def objective_rows(self) -> List[Tuple[float, float, int, bool]]:
        return [(c, r.objective_value, r.iterations, r.converged) for c, r in zip(self.c_values, self.reports)]


def cost_sweep(scenario: Scenario, c_values: Sequence[float], max_iters: int = PICARD_MAX_ITERS,
               workers: int = WORKERS) -> SweepResult:
    """
    Run the partial-information optimizer at every cost in c_values. Entries
    are independent and run on a thread pool; results keep the input order.

    Raises:
        InputError: empty or negative c_values.
    """
    c_values = tuple(float(c) for c in c_values)
    if not c_values:
        raise InputError("cost sweep needs at least one value of c")
    if any(not (np.isfinite(c) and c >= 0) for c in c_values):
        raise InputError(f"costs must be finite and >= 0 (got {c_values})")

    def run_one(c: float) -> OptimizationReport:
        report = optimize_partial(scenario.with_cost(c), max_iters=max_iters)
        logger.info(f"sweep c={c:g}: phi={report.objective_value:.6g}, iterations={report.iterations}, "
                    f"converged={report.converged}")
        return report

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        reports = list(pool.map(run_one, c_values))

    taus = tuple(scenario.schedule.times)
    intervals = [iv for c, r in zip(c_values, reports) for iv in active_intervals(r.policy, scenario.grid, taus, c)]
    return SweepResult(c_values, reports, intervals)


def intervals_csv(intervals: Sequence[ActiveInterval]) -> str:
    return csv_text(INTERVAL_HEADER, (iv.as_row() for iv in intervals))


def objective_log_csv(result: SweepResult) -> str:
    return csv_text(OBJECTIVE_LOG_HEADER, result.objective_rows())
