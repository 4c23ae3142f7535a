# runner.py
# -----------------------------------------------------------------------------
# Command dispatch for a validated RunConfig.
# - Each command computes all of its artifacts in memory as {name: text}.
# - Artifacts and manifest.json are published afterwards as one set (staged
#   directory, single rename), so a failing run leaves no partial output.
# - Library errors map to exit codes by category (see core.errors); a run
#   whose optimization did not converge still writes its artifacts and then
#   exits with the non-convergence code.
# -----------------------------------------------------------------------------

from __future__ import annotations

import json
import logging
import time
from pathlib import Path
from typing import Callable, Dict, List, Tuple

import numpy as np

from ..calibrate.data import read_histogram_csv, read_historical_csv, read_raw_weights_csv
from ..calibrate.measures import perf_measure_p
from ..calibrate.search import SEARCH_AXES, identify_from_histogram, identify_growth_rate
from ..core.errors import FpImpulseError, NonConvergenceError
from ..core.utils import csv_text, sha256_bytes, sha256_file, utcnow_str, write_tree_atomic
from ..core.version import dependency_versions, get_local_commit
from ..growth.params import ModelKind
from ..growth.sde import simulate_paths
from ..growth.stats import histogram_counts, stats_at, stats_series
from ..optimize.objective import null_objective
from ..optimize.picard import OptimizationReport, optimize_full, optimize_partial
from ..optimize.sweep import active_intervals, cost_sweep, intervals_csv, objective_log_csv
from ..pde.export import conditional_csv, fields_csv
from ..pde.policy import InfoMode
from .plots import render_plots
from .run_config import RunConfig, dump_config

logger = logging.getLogger(__name__)

Artifacts = Dict[str, str]
Outcome = Tuple[Artifacts, List[str]]     # artifacts, non-convergence notes

STATS_HEADER = ("t", "average", "std_dev", "skewness")
HISTOGRAM_HEADER = ("bin_lo", "bin_hi", "observed", "model")
OBJECTIVE_HEADER = ("mode", "c", "phi", "iterations", "converged")
STATS_FILES = {ModelKind.PROPOSED: "stats.csv", ModelKind.LEGACY: "stats_legacy.csv"}


def _stats_csv(times, series) -> str:
    return csv_text(STATS_HEADER, ((t, *s.as_row()) for t, s in zip(times, series)))


def cmd_simulate(config: RunConfig) -> Outcome:
    """Statistics curves per model and, with a histogram input, model-vs-observed bars."""
    params, mc = config.growth.validate(), config.monte_carlo
    obs = None
    if config.histogram_path is not None:
        raw = read_raw_weights_csv(config.raw_weights_path) if config.raw_weights_path else None
        obs = read_histogram_csv(config.histogram_path, raw)

    artifacts: Artifacts = {}
    first = None
    for kind in config.models:
        ensemble = simulate_paths(params, kind, config.sample_times, mc.dt, mc.report_paths, config.seed,
                                  chunk_size=mc.chunk_size, workers=mc.workers)
        artifacts[STATS_FILES[kind]] = _stats_csv(ensemble.times, stats_series(ensemble))
        if first is None:
            first = ensemble

    if obs is not None:
        ensemble = first
        idx = config.sample_times.index(config.obs_day)
        model = histogram_counts(ensemble, idx, obs.bin_edges, total=obs.total)
        rows = ((lo, None if np.isinf(hi) else hi, n_obs, n_model)
                for lo, hi, n_obs, n_model in zip(obs.bin_edges[:-1], obs.bin_edges[1:], obs.counts, model))
        artifacts["histogram.csv"] = csv_text(HISTOGRAM_HEADER, rows)
        p = perf_measure_p(obs.observed_stats, stats_at(ensemble, idx))
        logger.info(f"day {config.obs_day:g}: observed {obs.observed_stats.as_row()}, P={p:.5f}")
    return artifacts, []


def cmd_calibrate(config: RunConfig) -> Outcome:
    """Histogram fit (P) and/or growth-rate scan (Err) against historical means."""
    kind = config.models[0]
    mc = config.monte_carlo
    artifacts: Artifacts = {}
    base = config.growth.validate()
    summary: List[Tuple[str, object]] = []

    if config.histogram_path is not None:
        raw = read_raw_weights_csv(config.raw_weights_path) if config.raw_weights_path else None
        obs = read_histogram_csv(config.histogram_path, raw)
        result = identify_from_histogram(obs, config.search_box, mc, config.obs_day, base=base,
                                         refine=config.refine, kind=kind)
        base = result.params
        summary += [(name, getattr(result.params, name)) for name in SEARCH_AXES]
        summary += [("x0", result.params.x0), ("p", result.p_value)]
        if result.report_p is not None:
            summary.append(("p_report", result.report_p))
        for label, stats in (("observed", result.observed_stats), ("model", result.report_stats)):
            if stats is not None:
                summary += [(f"{label}_{key}", value)
                            for key, value in zip(("average", "std_dev", "skewness"), stats.as_row())]
        artifacts["candidates.csv"] = csv_text(
            (*SEARCH_AXES, "p"),
            ((*(getattr(params, a) for a in SEARCH_AXES), p) for params, p in result.candidates),
        )

    if config.historical_path is not None:
        data = read_historical_csv(config.historical_path)
        rate = identify_growth_rate(data, base, config.r_grid, mc, kind)
        summary.append(("r_star", rate.r_star))
        artifacts["err_table.csv"] = csv_text(("r", "err", "selected"), rate.rows())

    artifacts["calibration.csv"] = csv_text(("parameter", "value"), summary)
    return artifacts, []


def _scenario(config: RunConfig, swap: bool):
    scenario = config.scenario.validate()
    return scenario.swapped() if swap else scenario


def _policy_csv(report: OptimizationReport, taus) -> str:
    policy, grid = report.policy, report.forward.y1_T.grid
    if policy.mode is InfoMode.PARTIAL:
        rows = ((j + 1, tau, w, u) for j, tau in enumerate(taus) for w, u in zip(grid.w, policy.controls[j]))
        return csv_text(("j", "tau", "w", "value"), rows)
    rows = ((j + 1, tau, w, z, policy.controls[j][i, k])
            for j, tau in enumerate(taus) for i, w in enumerate(grid.w) for k, z in enumerate(grid.z))
    return csv_text(("j", "tau", "w", "z", "value"), rows)


def cmd_optimize(config: RunConfig) -> Outcome:
    """Optimal policies for the requested information modes, plus the solution fields of the last one."""
    scenario = _scenario(config, config.document["optimize"]["swap_habitats"])
    c = scenario.cost_c
    reports: Dict[InfoMode, OptimizationReport] = {}
    for mode in config.modes:
        reports[mode] = optimize_full(scenario) if mode is InfoMode.FULL \
            else optimize_partial(scenario, max_iters=config.max_iters)

    rows = [("null", c, null_objective(scenario), 0, True)]
    rows += [(mode.value, c, r.objective_value, r.iterations, r.converged) for mode, r in reports.items()]
    artifacts: Artifacts = {"objective.csv": csv_text(OBJECTIVE_HEADER, rows)}

    taus = scenario.schedule.times
    for mode, report in reports.items():
        artifacts[f"policy_{mode.value}.csv"] = _policy_csv(report, taus)

    primary = reports[config.modes[-1]]
    fwd = primary.forward
    grid = scenario.grid
    artifacts["conditional_y1.csv"] = conditional_csv(grid, fwd.history_times, fwd.history_y1)
    artifacts["conditional_y2.csv"] = conditional_csv(grid, fwd.history_times, fwd.history_y2)
    t_end = scenario.schedule.horizon
    artifacts["fields_y1.csv"] = fields_csv([*zip(fwd.taus, fwd.y1_pre), (t_end, fwd.y1_T)])
    artifacts["fields_y2.csv"] = fields_csv([*zip(fwd.taus, fwd.y2_pre), (t_end, fwd.y2_T)])
    artifacts["intervals.csv"] = intervals_csv(active_intervals(primary.policy, grid, taus, c))

    notes = [f"{mode.value}: no fixed point after {r.iterations} iterations"
             for mode, r in reports.items() if not r.converged]
    return artifacts, notes


def cmd_sweep(config: RunConfig) -> Outcome:
    """Partial-information optimum at every cost c; active intervals and objective log."""
    scenario = _scenario(config, config.document["sweep"]["swap_habitats"])
    result = cost_sweep(scenario, config.c_values, max_iters=config.max_iters)
    artifacts = {
        "intervals.csv": intervals_csv(result.intervals),
        "objective_log.csv": objective_log_csv(result),
    }
    notes = [f"c={c:g}: no fixed point after {r.iterations} iterations"
             for c, r in zip(result.c_values, result.reports) if not r.converged]
    return artifacts, notes


def cmd_plot(config: RunConfig) -> Outcome:
    return render_plots(config.plot_inputs, config.plot_kind, config.plot_impulse_times), []


COMMANDS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "simulate": cmd_simulate,
    "calibrate": cmd_calibrate,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "plot": cmd_plot,
}


def build_manifest(config: RunConfig, artifacts: Artifacts, started: str, wall_time: float,
                   notes: List[str]) -> str:
    """Machine-readable run record: what ran, on which inputs, with which code."""
    inputs = [p for p in (config.histogram_path, config.historical_path, config.raw_weights_path) if p]
    inputs += list(config.plot_inputs)
    manifest = {
        "command": config.command,
        "seed": config.seed,
        "config_sha256": sha256_bytes(dump_config(config).encode("utf-8")),
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "versions": dependency_versions(),
        "commit": get_local_commit(),
        "started_utc": started,
        "wall_time_s": round(wall_time, 3),
        "converged": not notes,
        "notes": notes,
        "artifacts": {name: sha256_bytes(text.encode("utf-8")) for name, text in sorted(artifacts.items())},
    }
    return json.dumps(manifest, indent=2, sort_keys=True) + "\n"


def write_artifacts(out_dir: Path, artifacts: Artifacts) -> None:
    """All artifacts of a run appear together or not at all."""
    write_tree_atomic(out_dir, artifacts)


def run(config: RunConfig, out_dir: Path) -> int:
    """
    Execute the configured command and write its artifacts into out_dir.

    Returns:
        0 on success, otherwise the exit code of the error category.
    """
    started, t0 = utcnow_str(), time.monotonic()
    logger.info(f"{config.command}: seed={config.seed}, output -> {out_dir}")
    try:
        artifacts, notes = COMMANDS[config.command](config)
        manifest = build_manifest(config, artifacts, started, time.monotonic() - t0, notes)
        write_artifacts(out_dir, {**artifacts, "manifest.json": manifest})
        logger.info(f"{config.command}: wrote {len(artifacts) + 1} artifacts to {out_dir}")
        if notes:
            raise NonConvergenceError("; ".join(notes))
    except FpImpulseError as e:
        logger.error(f"{config.command} failed ({type(e).__name__}): {e}")
        return e.exit_code
    except Exception:
        logger.exception(f"{config.command} failed with an unexpected error")
        return 1
    return 0
