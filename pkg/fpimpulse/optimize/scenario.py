# scenario.py
# -----------------------------------------------------------------------------
# Complete transport problem: two habitats, schedule, cost, cap, target
# window, initial hump, grid and time step. Defaults reproduce the baseline
# setting (201x201 grid, dt = 0.01, T = 70, tau_j = 10j, U = c = 0.2).
# -----------------------------------------------------------------------------

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from ..core.config import (CAP_U, COST_C, D_RELAX, DT, HABITAT_R, HUMP_A, HUMP_TOTAL, HUMP_W,
                           HUMP_Z, MORTALITY, RECORD_EVERY, SIGMA, W_MAX, WINDOW_FRACTIONS)
from ..core.errors import InputError, ParameterError
from ..growth.params import GrowthParams
from ..numerics.grid import Field2D, Grid2D, integrate
from ..pde.habitat import HabitatParams, ImpulseSchedule

DEFAULT_WINDOW = (WINDOW_FRACTIONS[0] * W_MAX, WINDOW_FRACTIONS[1] * W_MAX)


@dataclass(frozen=True)
class InitialHump:
    """
    Initial habitat-1 density proportional to
    exp(-a [((w - w_center)/w_center)^2 + (z - z_center)^2]),
    scaled so its discrete integral equals `total`.
    """

    a: float = HUMP_A
    w_center: float = HUMP_W
    z_center: float = HUMP_Z
    total: float = HUMP_TOTAL

    def problems(self, prefix: str = "scenario.init") -> List[str]:
        out = []
        if not (np.isfinite(self.a) and self.a > 0):
            out.append(f"{prefix}.a: must be > 0 (got {self.a})")
        if not (np.isfinite(self.w_center) and self.w_center != 0):
            out.append(f"{prefix}.w_center: must be finite and nonzero (got {self.w_center})")
        if not np.isfinite(self.z_center):
            out.append(f"{prefix}.z_center: must be finite (got {self.z_center})")
        if not (np.isfinite(self.total) and self.total > 0):
            out.append(f"{prefix}.total: must be > 0 (got {self.total})")
        return out

    def field(self, grid: Grid2D) -> Field2D:
        if self.total == 0:
            return Field2D.zeros(grid)
        shape = Field2D.from_function(
            grid,
            lambda w, z: np.exp(-self.a * (((w - self.w_center) / self.w_center) ** 2 + (z - self.z_center) ** 2)),
        )
        mass = integrate(shape)
        if not mass > 0:
            raise InputError("initial hump underflows on this grid; widen it or refine the grid")
        return (self.total / mass) * shape


def default_habitat(r: float) -> HabitatParams:
    return HabitatParams(GrowthParams(r=r, d_relax=D_RELAX, sigma=SIGMA), MORTALITY)


@dataclass(frozen=True)
class Scenario:
    """
    Transport problem definition. target_window=None means an empty window
    (no terminal reward).
    """

    habitat1: HabitatParams = field(default_factory=lambda: default_habitat(HABITAT_R[0]))
    habitat2: HabitatParams = field(default_factory=lambda: default_habitat(HABITAT_R[1]))
    schedule: ImpulseSchedule = field(default_factory=ImpulseSchedule)
    cost_c: float = COST_C
    cap_u: float = CAP_U
    target_window: Optional[Tuple[float, float]] = DEFAULT_WINDOW
    init: InitialHump = field(default_factory=InitialHump)
    grid: Grid2D = field(default_factory=Grid2D)
    dt: float = DT
    record_every: float = RECORD_EVERY

    @classmethod
    def baseline(cls, r1: float = HABITAT_R[0], r2: float = HABITAT_R[1], **overrides) -> "Scenario":
        return cls(habitat1=default_habitat(r1), habitat2=default_habitat(r2), **overrides)

    def problems(self, prefix: str = "scenario") -> List[str]:
        """All invariant violations, each prefixed with its field path."""
        out = self.habitat1.problems(f"{prefix}.habitat1") + self.habitat2.problems(f"{prefix}.habitat2")
        out += self.schedule.problems(prefix)
        if not (np.isfinite(self.cost_c) and self.cost_c >= 0):
            out.append(f"{prefix}.cost_c: must be >= 0 (got {self.cost_c})")
        if not (0.0 < self.cap_u < 1.0):
            out.append(f"{prefix}.cap_u: must satisfy 0 < U < 1 (got {self.cap_u})")
        if self.target_window is not None:
            lo, hi = self.target_window
            if not (0.0 <= lo < hi <= self.grid.w_max):
                out.append(
                    f"{prefix}.target_window: need 0 <= w_lo < w_hi <= {self.grid.w_max:g} (got ({lo}, {hi}))"
                )
        out += self.init.problems(f"{prefix}.init")
        if not (np.isfinite(self.dt) and self.dt > 0):
            out.append(f"{prefix}.dt: must be > 0 (got {self.dt})")
        else:
            try:
                self.schedule.step_indices(self.dt)
            except InputError as e:
                out.append(f"{prefix}.dt: {e}")
        if not self.record_every > 0:
            out.append(f"{prefix}.record_every: must be > 0 (got {self.record_every})")
        return out

    def validate(self) -> "Scenario":
        problems = self.problems()
        if problems:
            raise ParameterError("invalid scenario", problems)
        return self

    def initial_populations(self) -> Tuple[Field2D, Field2D]:
        """(y1(0), y2(0)): the hump in habitat 1, nothing in habitat 2."""
        return self.init.field(self.grid), Field2D.zeros(self.grid)

    def with_cost(self, c: float) -> "Scenario":
        return replace(self, cost_c=float(c))

    def swapped(self) -> "Scenario":
        """Same problem with the two habitats' parameters exchanged."""
        return replace(self, habitat1=self.habitat2, habitat2=self.habitat1)

    def scaled(self, factor: float) -> "Scenario":
        """Initial total multiplied by factor."""
        return replace(self, init=replace(self.init, total=self.init.total * factor))
