# run_config.py
# -----------------------------------------------------------------------------
# JSON run configuration.
# - The user document is merged over DEFAULTS block by block; unknown keys
#   and values of the wrong JSON type are reported with their dotted path.
# - Every block is then turned into the domain objects and validated; all
#   problems are collected and raised together as one ConfigError.
# - Input paths are resolved against the directory of the config file.
# -----------------------------------------------------------------------------

from __future__ import annotations

import copy
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..calibrate.search import SEARCH_AXES, AxisRange, MonteCarloConfig, SearchBox
from ..core.config import (CAP_U, COST_C, D_RELAX, DT, GROWTH_R, GRID_N, HABITAT_R, HORIZON, HUMP_A,
                           HUMP_TOTAL, HUMP_W, HUMP_Z, IMPULSE_TIMES, MC_CHUNK, MC_DT, MC_REPORT_PATHS,
                           MC_SEARCH_PATHS, MORTALITY, OBS_DAY, PICARD_MAX_ITERS, RECORD_EVERY, SEED,
                           SIGMA, SWEEP_COSTS, W_MAX, WINDOW_FRACTIONS, WORKERS, X0_G, Z0)
from ..core.errors import ArtifactIOError, ConfigError, ParameterError
from ..growth.params import GrowthParams, ModelKind
from ..numerics.grid import Grid2D
from ..optimize.scenario import InitialHump, Scenario
from ..pde.habitat import HabitatParams, ImpulseSchedule
from ..pde.policy import InfoMode

logger = logging.getLogger(__name__)

COMMANDS = ("simulate", "calibrate", "optimize", "sweep", "plot")
MODELS = ("proposed", "legacy", "both")
MODES = ("full", "partial", "both")
PLOT_KINDS = ("heatmap", "curves", "histogram", "intervals")


def _habitat_block(r: float) -> Dict[str, float]:
    return {"r": r, "d_relax": D_RELAX, "sigma": SIGMA, "mortality": MORTALITY}


DEFAULTS: Dict[str, Any] = {
    "seed": SEED,
    "inputs": {"histogram": None, "historical": None, "raw_weights": None},
    "growth": {"r": GROWTH_R, "d_relax": D_RELAX, "sigma": SIGMA, "x0": X0_G, "z0": Z0, "model": "proposed"},
    "monte_carlo": {
        "n_paths": MC_REPORT_PATHS,
        "search_paths": MC_SEARCH_PATHS,
        "dt": MC_DT,
        "obs_day": OBS_DAY,
        "sample_times": None,
    },
    "calibration": {
        "search_box": {
            "r": [0.041, 0.061, 5],
            "d_relax": [0.01, 0.03, 5],
            "sigma": [0.03, 0.07, 5],
            "z0": [0.01, 0.05, 5],
        },
        "refine": True,
        "r_grid": [round(0.041 + 0.001 * k, 3) for k in range(11)],
    },
    "scenario": {
        "habitat1": _habitat_block(HABITAT_R[0]),
        "habitat2": _habitat_block(HABITAT_R[1]),
        "horizon": HORIZON,
        "impulse_times": list(IMPULSE_TIMES),
        "cost_c": COST_C,
        "cap_u": CAP_U,
        "target_window": [WINDOW_FRACTIONS[0] * W_MAX, WINDOW_FRACTIONS[1] * W_MAX],
        "init": {"a": HUMP_A, "w_center": HUMP_W, "z_center": HUMP_Z, "total": HUMP_TOTAL},
        "grid": {"w_max": W_MAX, "n_w": GRID_N, "n_z": GRID_N},
        "dt": DT,
        "record_every": RECORD_EVERY,
    },
    "optimize": {"mode": "partial", "max_iters": PICARD_MAX_ITERS, "swap_habitats": False},
    "sweep": {"c_values": list(SWEEP_COSTS), "swap_habitats": False},
    "plot": {"kind": "curves", "inputs": [], "impulse_times": []},
}

# Keys whose default is null but which take a value of a known type.
NULLABLE = {
    "inputs.histogram": str,
    "inputs.historical": str,
    "inputs.raw_weights": str,
    "monte_carlo.sample_times": list,
    "scenario.target_window": list,
}


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _type_problem(path: str, default: Any, value: Any) -> Optional[str]:
    if value is None and path in NULLABLE:
        return None
    expected = NULLABLE.get(path, type(default))
    if isinstance(default, bool):
        ok, name = isinstance(value, bool), "true or false"
    elif isinstance(default, int) and expected is int:
        ok, name = _is_number(value) and float(value).is_integer(), "an integer"
    elif isinstance(default, float):
        ok, name = _is_number(value), "a number"
    elif expected is str:
        ok, name = isinstance(value, str), "a string"
    elif expected is list:
        ok, name = isinstance(value, list), "a list"
    else:
        ok, name = True, ""
    return None if ok else f"{path}: expected {name} (got {json.dumps(value)})"


def _normalize(default: Any, value: Any) -> Any:
    if type(default) is int:
        return int(value)
    if type(default) is float:
        return float(value)
    return value


def merge_document(defaults: Dict[str, Any], user: Any, path: str, problems: List[str]) -> Dict[str, Any]:
    """`{**defaults, **user}` applied recursively; bad entries fall back to defaults."""
    if not isinstance(user, dict):
        problems.append(f"{path or 'config'}: expected an object")
        return copy.deepcopy(defaults)
    for key in user:
        if key not in defaults:
            problems.append(f"{_join(path, key)}: unknown key")
    merged = {}
    for key, default in defaults.items():
        where = _join(path, key)
        if key not in user:
            merged[key] = copy.deepcopy(default)
        elif isinstance(default, dict):
            merged[key] = merge_document(default, user[key], where, problems)
        else:
            problem = _type_problem(where, default, user[key])
            if problem:
                problems.append(problem)
                merged[key] = copy.deepcopy(default)
            else:
                merged[key] = _normalize(default, user[key])
    return merged


def _numbers(values: Any, path: str, problems: List[str]) -> Tuple[float, ...]:
    if not all(_is_number(v) for v in values):
        problems.append(f"{path}: expected a list of numbers (got {json.dumps(values)})")
        return ()
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class RunConfig:
    """
    Validated run configuration. `document` is the merged JSON (paths
    resolved), the remaining fields are the domain objects built from it.
    """

    command: str
    seed: int
    document: Dict[str, Any] = field(repr=False)
    growth: GrowthParams = field(default_factory=GrowthParams)
    models: Tuple[ModelKind, ...] = (ModelKind.PROPOSED,)
    monte_carlo: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    obs_day: float = OBS_DAY
    sample_times: Tuple[float, ...] = ()
    histogram_path: Optional[Path] = None
    historical_path: Optional[Path] = None
    raw_weights_path: Optional[Path] = None
    search_box: Optional[SearchBox] = None
    refine: bool = True
    r_grid: Tuple[float, ...] = ()
    scenario: Scenario = field(default_factory=Scenario)
    modes: Tuple[InfoMode, ...] = (InfoMode.PARTIAL,)
    max_iters: int = PICARD_MAX_ITERS
    c_values: Tuple[float, ...] = SWEEP_COSTS
    plot_kind: str = "curves"
    plot_inputs: Tuple[Path, ...] = ()
    plot_impulse_times: Tuple[float, ...] = ()
    config_path: Optional[Path] = field(default=None, compare=False)

    def with_seed(self, seed: int) -> "RunConfig":
        """Same run under another seed (the --seed override)."""
        document = copy.deepcopy(self.document)
        document["seed"] = int(seed)
        return replace(self, seed=int(seed), document=document,
                       monte_carlo=replace(self.monte_carlo, seed=int(seed)))


class _Builder:
    """Turns a merged document into RunConfig fields, collecting problems."""

    def __init__(self, doc: Dict[str, Any], base_dir: Path, problems: List[str]):
        self.doc = doc
        self.base_dir = base_dir
        self.problems = problems

    def path(self, text: Optional[str], where: str) -> Optional[Path]:
        if text is None:
            return None
        path = Path(text)
        if not path.is_absolute():
            path = (self.base_dir / path).resolve()
        if not path.is_file():
            self.problems.append(f"{where}: file not found: {path}")
        return path

    def choice(self, value: str, choices: Tuple[str, ...], where: str) -> str:
        if value not in choices:
            self.problems.append(f"{where}: must be one of {', '.join(choices)} (got {value!r})")
            return choices[0]
        return value

    def growth(self) -> Tuple[GrowthParams, Tuple[ModelKind, ...]]:
        g = self.doc["growth"]
        params = GrowthParams(r=g["r"], d_relax=g["d_relax"], sigma=g["sigma"], x0=g["x0"], z0=g["z0"])
        self.problems.extend(params.problems("growth"))
        model = self.choice(g["model"], MODELS, "growth.model")
        kinds = (ModelKind.PROPOSED, ModelKind.LEGACY) if model == "both" else (ModelKind(model),)
        return params, kinds

    def monte_carlo(self, seed: int) -> Tuple[MonteCarloConfig, float, Tuple[float, ...]]:
        m = self.doc["monte_carlo"]
        for key in ("n_paths", "search_paths"):
            if m[key] < 1:
                self.problems.append(f"monte_carlo.{key}: must be >= 1 (got {m[key]})")
        if not m["dt"] > 0:
            self.problems.append(f"monte_carlo.dt: must be > 0 (got {m['dt']})")
        if not m["obs_day"] > 0:
            self.problems.append(f"monte_carlo.obs_day: must be > 0 (got {m['obs_day']})")
        times: Tuple[float, ...] = ()
        if m["sample_times"] is not None:
            times = _numbers(m["sample_times"], "monte_carlo.sample_times", self.problems)
            if not times or any(t <= 0 for t in times) or any(b <= a for a, b in zip(times, times[1:])):
                self.problems.append("monte_carlo.sample_times: need a non-empty increasing list of positive days")
        else:
            times = tuple(float(d) for d in range(10, int(m["obs_day"]) + 1, 10))
        if m["obs_day"] > 0 and float(m["obs_day"]) not in times:
            times = tuple(sorted(set(times) | {float(m["obs_day"])}))
        mc = MonteCarloConfig(
            n_paths=max(1, m["search_paths"]), report_paths=max(1, m["n_paths"]), dt=m["dt"], seed=seed,
            chunk_size=MC_CHUNK, workers=WORKERS,
        )
        return mc, float(m["obs_day"]), times

    def search_box(self) -> SearchBox:
        ranges = {}
        for axis in SEARCH_AXES:
            where = f"calibration.search_box.{axis}"
            spec = self.doc["calibration"]["search_box"][axis]
            values = _numbers(spec, where, self.problems)
            if len(values) != 3 or not values[2].is_integer() or values[2] < 1 or values[0] > values[1]:
                self.problems.append(f"{where}: expected [lo, hi, n] with lo <= hi and integer n >= 1")
                ranges[axis] = AxisRange(1.0, 1.0, 1)
            else:
                ranges[axis] = AxisRange(values[0], values[1], int(values[2]))
        return SearchBox(**ranges)

    def r_grid(self) -> Tuple[float, ...]:
        grid = _numbers(self.doc["calibration"]["r_grid"], "calibration.r_grid", self.problems)
        if not grid or any(r <= 0 for r in grid):
            self.problems.append("calibration.r_grid: need a non-empty list of positive rates")
        return grid

    def habitat(self, name: str) -> HabitatParams:
        h = self.doc["scenario"][name]
        return HabitatParams(GrowthParams(r=h["r"], d_relax=h["d_relax"], sigma=h["sigma"]), h["mortality"])

    def scenario(self) -> Scenario:
        s = self.doc["scenario"]
        try:
            schedule = ImpulseSchedule(_numbers(s["impulse_times"], "scenario.impulse_times", self.problems),
                                       s["horizon"])
        except ParameterError as e:
            self.problems.extend(e.problems)
            schedule = ImpulseSchedule()
        g = s["grid"]
        try:
            grid = Grid2D(g["w_max"], g["n_w"], g["n_z"])
        except ParameterError as e:
            self.problems.extend(f"scenario.{p}" for p in e.problems)
            grid = Grid2D()
        window = None
        if s["target_window"] is not None:
            bounds = _numbers(s["target_window"], "scenario.target_window", self.problems)
            if len(bounds) == 2:
                window = bounds
            else:
                self.problems.append("scenario.target_window: expected [w_lo, w_hi] or null")
        i = s["init"]
        scenario = Scenario(
            habitat1=self.habitat("habitat1"),
            habitat2=self.habitat("habitat2"),
            schedule=schedule,
            cost_c=s["cost_c"],
            cap_u=s["cap_u"],
            target_window=window,
            init=InitialHump(i["a"], i["w_center"], i["z_center"], i["total"]),
            grid=grid,
            dt=s["dt"],
            record_every=s["record_every"],
        )
        self.problems.extend(scenario.problems())
        return scenario

    def c_values(self) -> Tuple[float, ...]:
        values = _numbers(self.doc["sweep"]["c_values"], "sweep.c_values", self.problems)
        if not values or any(c < 0 for c in values):
            self.problems.append("sweep.c_values: need a non-empty list of costs >= 0")
        return values


def build_config(document: Dict[str, Any], base_dir: Path, config_path: Optional[Path] = None) -> RunConfig:
    """
    Merge, resolve and validate a parsed JSON document.

    Raises:
        ConfigError: with every problem found, each prefixed by its field path.
    """
    problems: List[str] = []
    if not isinstance(document, dict):
        raise ConfigError("configuration must be a JSON object")
    command = document.get("command")
    if command not in COMMANDS:
        problems.append(f"command: must be one of {', '.join(COMMANDS)} (got {json.dumps(command)})")
    user = {k: v for k, v in document.items() if k != "command"}
    doc = merge_document(DEFAULTS, user, "", problems)

    b = _Builder(doc, base_dir, problems)
    inputs = doc["inputs"]
    paths = {key: b.path(inputs[key], f"inputs.{key}") for key in ("histogram", "historical", "raw_weights")}
    for key, path in paths.items():
        inputs[key] = None if path is None else str(path)
    if doc["seed"] < 0:
        problems.append(f"seed: must be >= 0 (got {doc['seed']})")

    growth, models = b.growth()
    mc, obs_day, sample_times = b.monte_carlo(doc["seed"])
    search_box, r_grid = b.search_box(), b.r_grid()
    scenario = b.scenario()

    mode = b.choice(doc["optimize"]["mode"], MODES, "optimize.mode")
    modes = (InfoMode.FULL, InfoMode.PARTIAL) if mode == "both" else (InfoMode(mode),)
    if doc["optimize"]["max_iters"] < 1:
        problems.append(f"optimize.max_iters: must be >= 1 (got {doc['optimize']['max_iters']})")
    c_values = b.c_values()

    plot = doc["plot"]
    kind = b.choice(plot["kind"], PLOT_KINDS, "plot.kind")
    plot_inputs = []
    for k, text in enumerate(plot["inputs"]):
        if isinstance(text, str):
            plot_inputs.append(b.path(text, f"plot.inputs[{k}]"))
        else:
            problems.append(f"plot.inputs[{k}]: expected a path string")
    plot["inputs"] = [str(p) for p in plot_inputs]
    plot_times = _numbers(plot["impulse_times"], "plot.impulse_times", problems)

    if command == "calibrate" and paths["histogram"] is None and paths["historical"] is None:
        problems.append("inputs: calibrate needs inputs.histogram or inputs.historical")
    if command == "plot" and not plot_inputs:
        problems.append("plot.inputs: at least one CSV file is required")

    if problems:
        raise ConfigError(f"invalid configuration{f' {config_path}' if config_path else ''}", problems)

    doc = {"command": command, **doc}
    return RunConfig(
        command=command,
        seed=doc["seed"],
        document=doc,
        growth=growth,
        models=models,
        monte_carlo=mc,
        obs_day=obs_day,
        sample_times=sample_times,
        histogram_path=paths["histogram"],
        historical_path=paths["historical"],
        raw_weights_path=paths["raw_weights"],
        search_box=search_box,
        refine=doc["calibration"]["refine"],
        r_grid=r_grid,
        scenario=scenario,
        modes=modes,
        max_iters=doc["optimize"]["max_iters"],
        c_values=c_values,
        plot_kind=kind,
        plot_inputs=tuple(plot_inputs),
        plot_impulse_times=plot_times,
        config_path=config_path,
    )


def load_config(path: Path) -> RunConfig:
    """
    Read and validate a JSON run configuration.

    Raises:
        ArtifactIOError: the file cannot be read.
        ConfigError: invalid JSON (with line and column) or invalid content.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot read config {path}: {e}") from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from e
    config = build_config(document, path.resolve().parent, path)
    logger.info(f"loaded {config.command} configuration from {path}")
    return config


def dump_config(config: RunConfig) -> str:
    """Canonical JSON of the merged document (sorted keys, 2-space indent)."""
    return json.dumps(config.document, indent=2, sort_keys=True) + "\n"
