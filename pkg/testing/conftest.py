"""
Shared fixtures: small grids and scenarios that keep PDE tests fast.
"""

import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from fpimpulse.numerics.grid import Grid2D  # noqa: E402
from fpimpulse.optimize.scenario import InitialHump, Scenario  # noqa: E402
from fpimpulse.pde.habitat import ImpulseSchedule  # noqa: E402


def small_scenario(**overrides) -> Scenario:
    """
    41 x 31 grid, dt = 0.25 over T = 20 with impulses at t = 5, 10, 15.
    The hump is widened so it is resolved on the coarse grid.
    """
    settings = dict(
        grid=Grid2D(w_max=5.3, n_w=41, n_z=31),
        dt=0.25,
        schedule=ImpulseSchedule((5.0, 10.0, 15.0), 20.0),
        init=InitialHump(a=20.0, w_center=1.2, z_center=0.3, total=1000.0),
        target_window=(1.5, 3.0),
        record_every=5.0,
    )
    settings.update(overrides)
    return Scenario.baseline(**settings)


@pytest.fixture
def tiny_grid():
    return Grid2D(w_max=5.3, n_w=41, n_z=31)


@pytest.fixture
def scenario():
    return small_scenario()
