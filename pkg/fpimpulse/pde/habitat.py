# habitat.py
# -----------------------------------------------------------------------------
# Per-habitat PDE coefficients and the impulse schedule.
# Coefficients depend on z only:
#   w-speed      a(z) = r(1 - z)
#   z-drift      A(z) = D(1 - z)
#   diffusivity  K(z) = C(z)^2 / 2 = sigma^2 z(1 - z) / 2
# -----------------------------------------------------------------------------

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..core.config import HORIZON, IMPULSE_TIMES, MORTALITY
from ..core.errors import InputError, ParameterError
from ..growth.params import GrowthParams


@dataclass(frozen=True)
class HabitatParams:
    """Growth law plus mortality rate R (1/day) of one habitat."""

    growth: GrowthParams
    mortality: float = MORTALITY

    def problems(self, prefix: str = "habitat") -> List[str]:
        out = self.growth.problems(prefix)
        if not (np.isfinite(self.mortality) and self.mortality > 0):
            out.append(f"{prefix}.mortality: must be > 0 (got {self.mortality})")
        return out

    def validate(self, prefix: str = "habitat") -> "HabitatParams":
        problems = self.problems(prefix)
        if problems:
            raise ParameterError("invalid habitat parameters", problems)
        return self

    def w_speed(self, z: np.ndarray) -> np.ndarray:
        return self.growth.r * (1.0 - z)

    def z_drift(self, z: np.ndarray) -> np.ndarray:
        return self.growth.d_relax * (1.0 - z)

    def diffusivity(self, z: np.ndarray) -> np.ndarray:
        return 0.5 * self.growth.sigma ** 2 * z * (1.0 - z)


@dataclass(frozen=True)
class ImpulseSchedule:
    """Intervention times tau_1 < ... < tau_J inside (0, T)."""

    times: Tuple[float, ...] = IMPULSE_TIMES
    horizon: float = HORIZON

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        problems = self.problems()
        if problems:
            raise ParameterError("invalid impulse schedule", problems)

    def problems(self, prefix: str = "scenario") -> List[str]:
        out = []
        t = self.times
        if not (np.isfinite(self.horizon) and self.horizon > 0):
            out.append(f"{prefix}.horizon: must be > 0 (got {self.horizon})")
        if not t:
            out.append(f"{prefix}.impulse_times: at least one impulse time is required")
        elif any(b <= a for a, b in zip(t, t[1:])):
            out.append(f"{prefix}.impulse_times: must be strictly increasing")
        elif not (0.0 < t[0] and t[-1] < self.horizon):
            out.append(f"{prefix}.impulse_times: must lie strictly inside (0, {self.horizon:g})")
        return out

    def __len__(self) -> int:
        return len(self.times)

    def step_indices(self, dt: float) -> Tuple[List[int], int]:
        """
        Snap impulse times to the nearest step and return (steps, horizon steps).

        Raises:
            InputError: horizon not a multiple of dt, or two impulses (or an
                impulse and an end point) collapse onto one step.
        """
        n_total = int(round(self.horizon / dt))
        if not math.isclose(n_total * dt, self.horizon, rel_tol=1e-9, abs_tol=1e-12):
            raise InputError(f"horizon {self.horizon} is not a multiple of dt={dt}")
        steps = [int(round(t / dt)) for t in self.times]
        if steps[0] < 1 or steps[-1] >= n_total or any(b <= a for a, b in zip(steps, steps[1:])):
            raise InputError(f"impulse times {self.times} are not separated by whole steps of dt={dt}")
        return steps, n_total
