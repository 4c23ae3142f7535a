# params.py
# -----------------------------------------------------------------------------
# Growth-law parameters and the two coefficient models for the ratio Z = X/K.
#   proposed: dZ = D(1-Z) dt + sigma*sqrt(Z(1-Z)) dB   (Wright-Fisher, linear drift)
#   legacy:   dZ = Z(1-Z)(r + D + sigma^2 (1-Z)) dt + sigma*Z(1-Z) dB
# Log-weight always follows dW = r(1-Z) dt.
# -----------------------------------------------------------------------------

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import List

import numpy as np

from ..core.config import D_RELAX, GROWTH_R, SIGMA, X0_G, Z0
from ..core.errors import ParameterError


class ModelKind(Enum):
    """Coefficient pair (A, C) of the ratio dynamics."""

    PROPOSED = "proposed"
    LEGACY = "legacy"

    def drift(self, z: np.ndarray, params: "GrowthParams") -> np.ndarray:
        if self is ModelKind.PROPOSED:
            return params.d_relax * (1.0 - z)
        return z * (1.0 - z) * (params.r + params.d_relax + params.sigma ** 2 * (1.0 - z))

    def diffusion(self, z: np.ndarray, params: "GrowthParams") -> np.ndarray:
        if self is ModelKind.PROPOSED:
            return params.sigma * np.sqrt(np.clip(z * (1.0 - z), 0.0, None))
        return params.sigma * z * (1.0 - z)

    def advance_drift(self, z: np.ndarray, dt: float, params: "GrowthParams") -> np.ndarray:
        """
        Drift-only update over dt. Exact for the linear proposed drift; a
        forward-Euler step clipped into [z, 1] for the legacy drift, which is
        non-negative and vanishes at both ends.
        """
        if self is ModelKind.PROPOSED:
            return 1.0 - (1.0 - z) * math.exp(-params.d_relax * dt)
        return np.clip(z + self.drift(z, params) * dt, z, 1.0)


@dataclass(frozen=True)
class GrowthParams:
    """
    One habitat's growth law.

    Attributes:
        r: Specific growth rate (1/day).
        d_relax: Relaxation rate D of the ratio (1/day).
        sigma: Noise intensity (1/day^0.5).
        x0: Initial body weight (g).
        z0: Initial weight-to-maximum ratio.
    """

    r: float = GROWTH_R
    d_relax: float = D_RELAX
    sigma: float = SIGMA
    x0: float = X0_G
    z0: float = Z0

    @property
    def w0(self) -> float:
        return math.log(self.x0)

    def problems(self, prefix: str = "growth") -> List[str]:
        """Invariant violations as "field.path: message" strings."""
        out = []
        for name in ("r", "d_relax", "sigma", "x0"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                out.append(f"{prefix}.{name}: must be > 0 (got {value})")
        if not (0.0 < self.z0 < 1.0):
            out.append(f"{prefix}.z0: must lie in (0, 1) (got {self.z0})")
        if 2.0 * self.d_relax < self.sigma ** 2:
            out.append(
                f"{prefix}.sigma: noise too strong, need 2*d_relax >= sigma^2 "
                f"(2*{self.d_relax} < {self.sigma}^2)"
            )
        return out

    def validate(self, prefix: str = "growth") -> "GrowthParams":
        problems = self.problems(prefix)
        if problems:
            raise ParameterError("invalid growth parameters", problems)
        return self
