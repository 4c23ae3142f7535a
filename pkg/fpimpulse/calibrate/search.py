# search.py
# -----------------------------------------------------------------------------
# Parameter identification drivers.
# - identify_from_histogram: grid search over (r, D, sigma, z0) minimizing P
#   at the observation day, then one refinement pass that walks each axis on
#   a five-times finer grid around the incumbent. Every candidate is
#   simulated with the same seed (common random numbers).
# - identify_growth_rate: scan r over a grid minimizing Err against
#   historical means.
# Candidates are evaluated on a thread pool; results are collected in
# enumeration order, so they equal a sequential run.
# -----------------------------------------------------------------------------

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import (MC_CHUNK, MC_DT, MC_REPORT_PATHS, MC_SEARCH_PATHS, OBS_DAY, SEED,
                           WORKERS)
from ..core.errors import InputError, StatisticsError
from ..growth.params import GrowthParams, ModelKind
from ..growth.sde import mean_curve, simulate_paths
from ..growth.stats import SampleStats, stats_at
from .data import HistogramData, HistoricalData
from .measures import err_measure, perf_measure_p

logger = logging.getLogger(__name__)

SEARCH_AXES = ("r", "d_relax", "sigma", "z0")
REFINE_FACTOR = 5


@dataclass(frozen=True)
class MonteCarloConfig:
    """Monte-Carlo protocol shared by all candidates."""

    n_paths: int = MC_SEARCH_PATHS
    report_paths: int = MC_REPORT_PATHS
    dt: float = MC_DT
    seed: int = SEED
    chunk_size: int = MC_CHUNK
    workers: int = WORKERS


@dataclass(frozen=True)
class AxisRange:
    """Closed range [lo, hi] sampled at n equispaced points (n = 1 means lo)."""

    lo: float
    hi: float
    n: int = 1

    @classmethod
    def point(cls, value: float) -> "AxisRange":
        return cls(value, value, 1)

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n - 1) if self.n > 1 else 0.0

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n) if self.n > 1 else np.array([self.lo])

    def refined_around(self, center: float) -> np.ndarray:
        """Points center + k*h/5 (|k| <= 5) that stay inside [lo, hi]."""
        if self.n <= 1:
            return np.array([center])
        step = self.spacing / REFINE_FACTOR
        pts = center + step * np.arange(-REFINE_FACTOR, REFINE_FACTOR + 1)
        return pts[(pts >= self.lo - 1e-12 * abs(step)) & (pts <= self.hi + 1e-12 * abs(step))]


@dataclass(frozen=True)
class SearchBox:
    """Ranges for the four identified parameters."""

    r: AxisRange
    d_relax: AxisRange
    sigma: AxisRange
    z0: AxisRange

    @classmethod
    def around(cls, params: GrowthParams) -> "SearchBox":
        """Degenerate box holding exactly `params`."""
        return cls(*(AxisRange.point(getattr(params, a)) for a in SEARCH_AXES))

    def axis(self, name: str) -> AxisRange:
        return getattr(self, name)

    def grid(self) -> Iterable[Tuple[float, ...]]:
        return itertools.product(*(self.axis(a).values() for a in SEARCH_AXES))


@dataclass
class CalibrationResult:
    """
    Outcome of a histogram fit. p_value is the search-size P of the
    incumbent (no evaluated candidate scored lower); report_p and
    report_stats re-evaluate it with the report-size ensemble.
    """

    params: GrowthParams
    p_value: float
    observed_stats: SampleStats
    candidates: List[Tuple[GrowthParams, float]] = field(default_factory=list)
    report_p: Optional[float] = None
    report_stats: Optional[SampleStats] = None


@dataclass
class GrowthRateResult:
    """Minimizer of Err over the r grid and the full (r, Err) table."""

    r_star: float
    table: List[Tuple[float, float]]

    def rows(self) -> List[Tuple[float, float, bool]]:
        return [(r, err, r == self.r_star) for r, err in self.table]


def evaluate_candidate(params: GrowthParams, obs: SampleStats, mc: MonteCarloConfig, obs_day: float,
                       n_paths: int, kind: ModelKind = ModelKind.PROPOSED,
                       workers: int = 1) -> Tuple[float, SampleStats]:
    """P of one parameter set and its model statistics at obs_day."""
    ensemble = simulate_paths(params, kind, [obs_day], mc.dt, n_paths, mc.seed,
                              chunk_size=mc.chunk_size, workers=workers)
    model = stats_at(ensemble, 0)
    return perf_measure_p(obs, model), model


def _evaluate_all(candidates: Sequence[GrowthParams], obs: SampleStats, mc: MonteCarloConfig,
                  obs_day: float, kind: ModelKind) -> List[float]:
    def score(p: GrowthParams) -> float:
        try:
            return evaluate_candidate(p, obs, mc, obs_day, mc.n_paths, kind)[0]
        except StatisticsError as e:
            logger.debug(f"skipping r={p.r:g}, d_relax={p.d_relax:g}, sigma={p.sigma:g}, z0={p.z0:g}: {e}")
            return np.inf

    if mc.workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            return list(pool.map(score, candidates))
    return [score(p) for p in candidates]


def identify_from_histogram(
    obs: HistogramData,
    search_box: SearchBox,
    mc_config: MonteCarloConfig = MonteCarloConfig(),
    obs_day: float = OBS_DAY,
    *,
    base: GrowthParams = GrowthParams(),
    refine: bool = True,
    kind: ModelKind = ModelKind.PROPOSED,
    report: bool = True,
) -> CalibrationResult:
    """
    Minimize P over the search box.

    Args:
        obs: Observed histogram (its statistics are the target).
        search_box: Ranges for r, d_relax, sigma and z0.
        mc_config: Path counts, time step, seed.
        obs_day: Day at which the histogram was taken.
        base: Supplies x0 (the initial weight is not searched).
        refine: Run the coordinate refinement pass after the coarse grid.
        kind: Coefficient model to fit.
        report: Re-evaluate the winner with mc_config.report_paths.

    Raises:
        InputError: no candidate in the box satisfies the parameter invariants.
    """
    if not obs_day > 0:
        raise InputError(f"obs_day must be positive (got {obs_day})")
    target = obs.observed_stats
    evaluated: Dict[Tuple[float, ...], float] = {}
    order: List[Tuple[GrowthParams, float]] = []

    def to_params(values: Sequence[float]) -> GrowthParams:
        return replace(base, **dict(zip(SEARCH_AXES, (float(v) for v in values))))

    def run(batch: List[Tuple[float, ...]]) -> None:
        fresh = [key for key in dict.fromkeys(batch) if key not in evaluated]
        feasible = [key for key in fresh if not to_params(key).problems()]
        scores = _evaluate_all([to_params(k) for k in feasible], target, mc_config, obs_day, kind)
        for key, score in zip(feasible, scores):
            evaluated[key] = score
            order.append((to_params(key), score))

    def incumbent() -> Tuple[float, ...]:
        return min(evaluated, key=lambda k: evaluated[k])  # first minimum in insertion order

    run([tuple(v) for v in search_box.grid()])
    if not evaluated:
        raise InputError("search box contains no admissible parameter set (check 2*d_relax >= sigma^2)")
    best = incumbent()
    logger.info(f"coarse grid: {len(evaluated)} candidates, best P={evaluated[best]:.5f} at {best}")

    if refine:
        for i, name in enumerate(SEARCH_AXES):
            axis = search_box.axis(name)
            if axis.n <= 1:
                continue
            line = [best[:i] + (float(v),) + best[i + 1:] for v in axis.refined_around(best[i])]
            run(line)
            best = incumbent()
            logger.info(f"refined {name}: best P={evaluated[best]:.5f} at {best}")

    result = CalibrationResult(
        params=to_params(best),
        p_value=evaluated[best],
        observed_stats=target,
        candidates=order,
    )
    if report:
        result.report_p, result.report_stats = evaluate_candidate(
            result.params, target, mc_config, obs_day, mc_config.report_paths, kind,
            workers=mc_config.workers,
        )
        logger.info(f"report ensemble ({mc_config.report_paths} paths): P={result.report_p:.5f}")
    return result


def identify_growth_rate(
    data: HistoricalData,
    base: GrowthParams,
    r_grid: Sequence[float],
    mc_config: MonteCarloConfig = MonteCarloConfig(),
    kind: ModelKind = ModelKind.PROPOSED,
) -> GrowthRateResult:
    """
    Scan r over r_grid, other parameters from base, minimizing Err.
    Ties go to the first grid entry.
    """
    grid = [float(r) for r in r_grid]
    if not grid:
        raise InputError("r_grid is empty")
    if len(data) == 0:
        raise InputError("historical data is empty")
    candidates = [replace(base, r=r).validate(prefix=f"calibration.r_grid[{k}]") for k, r in enumerate(grid)]
    days = data.unique_days

    def score(params: GrowthParams) -> float:
        ensemble = simulate_paths(params, kind, days, mc_config.dt, mc_config.n_paths, mc_config.seed,
                                  chunk_size=mc_config.chunk_size, workers=1)
        return err_measure(data, mean_curve(ensemble))

    if mc_config.workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=mc_config.workers) as pool:
            errs = list(pool.map(score, candidates))
    else:
        errs = [score(p) for p in candidates]

    k_best = int(np.argmin(errs))
    logger.info(f"growth-rate scan over {len(grid)} values: r*={grid[k_best]} (Err={errs[k_best]:.4g})")
    return GrowthRateResult(grid[k_best], list(zip(grid, errs)))
