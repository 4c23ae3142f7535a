#!/usr/bin/env python3
"""
Unit tests for JSON run configuration loading and validation
"""

import json
import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).parent.parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from fpimpulse.cli.run_config import DEFAULTS, build_config, dump_config, load_config  # noqa: E402
from fpimpulse.core.errors import ArtifactIOError, ConfigError  # noqa: E402
from fpimpulse.growth import ModelKind  # noqa: E402
from fpimpulse.optimize.scenario import Scenario  # noqa: E402
from fpimpulse.pde import InfoMode  # noqa: E402


def write(tmp_path, document, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document, indent=2))
    return path


@pytest.mark.unit
class TestDefaults:
    """Omitted fields fall back to the baseline values"""

    def test_minimal_optimize_config(self, tmp_path):
        """{"command": "optimize"} builds the baseline scenario"""
        config = load_config(write(tmp_path, {"command": "optimize"}))
        assert config.command == "optimize"
        assert config.scenario == Scenario.baseline()
        assert config.modes == (InfoMode.PARTIAL,)
        assert config.max_iters == 50

    def test_default_sample_times_include_observation_day(self, tmp_path):
        """Ten-day spacing up to and including obs_day"""
        config = load_config(write(tmp_path, {"command": "simulate", "monte_carlo": {"obs_day": 35}}))
        assert config.sample_times == (10.0, 20.0, 30.0, 35.0)
        assert config.obs_day == 35.0

    def test_partial_blocks_merge_over_defaults(self, tmp_path):
        """A nested block may override a single key"""
        doc = {"command": "optimize", "scenario": {"habitat2": {"r": 0.05}, "cost_c": 1}}
        config = load_config(write(tmp_path, doc))
        assert config.scenario.habitat2.growth.r == 0.05
        assert config.scenario.habitat2.mortality == DEFAULTS["scenario"]["habitat2"]["mortality"]
        assert config.scenario.cost_c == 1.0 and isinstance(config.scenario.cost_c, float)

    def test_mode_and_model_both(self, tmp_path):
        """"both" expands to the two modes and the two models"""
        doc = {"command": "optimize", "optimize": {"mode": "both"}, "growth": {"model": "both"}}
        config = load_config(write(tmp_path, doc))
        assert config.modes == (InfoMode.FULL, InfoMode.PARTIAL)
        assert config.models == (ModelKind.PROPOSED, ModelKind.LEGACY)

    def test_null_window(self, tmp_path):
        """target_window = null means no terminal reward"""
        config = load_config(write(tmp_path, {"command": "optimize", "scenario": {"target_window": None}}))
        assert config.scenario.target_window is None


@pytest.mark.unit
class TestValidation:
    """Problems are reported with their field paths"""

    def test_cap_above_one(self, tmp_path):
        """U = 1.5 names scenario.cap_u"""
        with pytest.raises(ConfigError) as exc:
            load_config(write(tmp_path, {"command": "optimize", "scenario": {"cap_u": 1.5}}))
        assert any(p.startswith("scenario.cap_u") for p in exc.value.problems)
        assert "0 < U < 1" in str(exc.value)

    def test_unknown_key(self, tmp_path):
        """Misspelled keys are not silently ignored"""
        with pytest.raises(ConfigError) as exc:
            load_config(write(tmp_path, {"command": "optimize", "scenario": {"costc": 0.3}}))
        assert "scenario.costc: unknown key" in exc.value.problems

    def test_wrong_type(self, tmp_path):
        """A string where a number belongs"""
        with pytest.raises(ConfigError) as exc:
            load_config(write(tmp_path, {"command": "optimize", "scenario": {"dt": "small"}}))
        assert exc.value.problems == ['scenario.dt: expected a number (got "small")']

    def test_all_problems_reported_together(self, tmp_path):
        """Several mistakes surface in one error"""
        doc = {"command": "optimize", "seed": -1, "scenario": {"cap_u": 0.0, "grid": {"n_w": 4}},
               "growth": {"z0": 2.0}}
        with pytest.raises(ConfigError) as exc:
            load_config(write(tmp_path, doc))
        fields = {p.split(":")[0] for p in exc.value.problems}
        assert {"seed", "scenario.cap_u", "scenario.grid.n_w", "growth.z0"} <= fields

    def test_unknown_command(self, tmp_path):
        """The command must be one of the five"""
        with pytest.raises(ConfigError, match="command"):
            load_config(write(tmp_path, {"command": "train"}))

    def test_invalid_json_reports_position(self, tmp_path):
        """Syntax errors carry line and column"""
        path = tmp_path / "broken.json"
        path.write_text('{\n  "command": "optimize",\n  "seed": ,\n}\n')
        with pytest.raises(ConfigError, match=r"broken\.json:3:\d+: invalid JSON"):
            load_config(path)

    def test_missing_config_file(self, tmp_path):
        """An unreadable config is an I/O error"""
        with pytest.raises(ArtifactIOError):
            load_config(tmp_path / "absent.json")

    def test_missing_input_file(self, tmp_path):
        """Input paths must exist"""
        doc = {"command": "calibrate", "inputs": {"histogram": "nowhere.csv"}}
        with pytest.raises(ConfigError, match="inputs.histogram: file not found"):
            load_config(write(tmp_path, doc))

    def test_calibrate_needs_data(self, tmp_path):
        """Calibration without any observation input is rejected"""
        with pytest.raises(ConfigError, match="calibrate needs"):
            load_config(write(tmp_path, {"command": "calibrate"}))

    def test_dt_must_divide_horizon(self, tmp_path):
        """Scenario time step is checked against the schedule"""
        with pytest.raises(ConfigError, match="scenario.dt"):
            load_config(write(tmp_path, {"command": "optimize", "scenario": {"dt": 0.3}}))

    def test_document_must_be_an_object(self):
        """A JSON array is not a configuration"""
        with pytest.raises(ConfigError):
            build_config([], Path("."))


@pytest.mark.unit
class TestPathsAndRoundTrip:
    """Relative paths, canonical dumps and seed overrides"""

    def test_relative_inputs_resolve_against_config_directory(self, tmp_path):
        """inputs.histogram is read next to the config file"""
        (tmp_path / "data").mkdir()
        (tmp_path / "data" / "h.csv").write_text("bin_lo,bin_hi,count\n0,10,1\n")
        config = load_config(write(tmp_path, {"command": "calibrate", "inputs": {"histogram": "data/h.csv"}}))
        assert config.histogram_path == (tmp_path / "data" / "h.csv").resolve()

    def test_dump_and_reload_gives_equal_config(self, tmp_path):
        """The canonical dump is a complete, loadable configuration"""
        doc = {"command": "sweep", "seed": 7, "sweep": {"c_values": [0.1, 0.5]}}
        config = load_config(write(tmp_path, doc))
        again = load_config(write(tmp_path, json.loads(dump_config(config)), name="again.json"))
        assert again == config
        assert dump_config(again) == dump_config(config)

    def test_with_seed(self, tmp_path):
        """--seed replaces the seed everywhere it is used"""
        config = load_config(write(tmp_path, {"command": "simulate"})).with_seed(99)
        assert config.seed == 99 and config.monte_carlo.seed == 99
        assert json.loads(dump_config(config))["seed"] == 99
