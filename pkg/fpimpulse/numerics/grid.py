# grid.py
# -----------------------------------------------------------------------------
# Node-based tensor grid over (w, z) in [0, W_max] x [0, 1] and the gridded
# field type used for populations and adjoints.
# - Nodes include both boundaries; quadrature is the trapezoid rule, whose
#   weights double as control-volume widths in the flux-difference kernels.
# - Window integrals use exact weights of the piecewise-linear interpolant.
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple, Union

import numpy as np

from ..core.config import GRID_N, W_MAX
from ..core.errors import InputError, ParameterError, StabilityError

logger = logging.getLogger(__name__)

MIN_NODES = 11

def trapezoid_weights(n: int, h: float) -> np.ndarray:
    """Trapezoid weights [h/2, h, ..., h, h/2] for n nodes spaced h apart."""
    weights = np.full(n, h)
    weights[0] = weights[-1] = 0.5 * h
    return weights


@dataclass(frozen=True)
class Grid2D:
    """Uniform node grid; axis 0 is log-weight w, axis 1 is the ratio z."""

    w_max: float = W_MAX
    n_w: int = GRID_N
    n_z: int = GRID_N

    def __post_init__(self):
        problems = []
        if not (np.isfinite(self.w_max) and self.w_max > 0):
            problems.append(f"grid.w_max: must be > 0 (got {self.w_max})")
        for name in ("n_w", "n_z"):
            n = getattr(self, name)
            if int(n) != n or n < MIN_NODES:
                problems.append(f"grid.{name}: must be an integer >= {MIN_NODES} (got {n})")
        if problems:
            raise ParameterError("invalid grid", problems)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_w, self.n_z)

    @property
    def dw(self) -> float:
        return self.w_max / (self.n_w - 1)

    @property
    def dz(self) -> float:
        return 1.0 / (self.n_z - 1)

    @cached_property
    def w(self) -> np.ndarray:
        return np.linspace(0.0, self.w_max, self.n_w)

    @cached_property
    def z(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_z)

    @cached_property
    def w_weights(self) -> np.ndarray:
        return trapezoid_weights(self.n_w, self.dw)

    @cached_property
    def z_weights(self) -> np.ndarray:
        return trapezoid_weights(self.n_z, self.dz)

    def window_weights(self, w_lo: float, w_hi: float) -> np.ndarray:
        """
        Quadrature weights over w for the integral of the piecewise-linear
        interpolant on [w_lo, w_hi]. Fractional end cells are split linearly.

        Raises:
            InputError: unless 0 <= w_lo < w_hi <= w_max.
        """
        slack = 1e-12 * self.w_max
        if not (0.0 <= w_lo < w_hi <= self.w_max + slack):
            raise InputError(
                f"invalid window ({w_lo}, {w_hi}); need 0 <= w_lo < w_hi <= {self.w_max}"
            )
        h = self.dw
        left, right = self.w[:-1], self.w[1:]
        a = np.clip(w_lo, left, right)
        b = np.clip(w_hi, left, right)
        to_left = ((right - a) ** 2 - (right - b) ** 2) / (2.0 * h)
        to_right = ((b - left) ** 2 - (a - left) ** 2) / (2.0 * h)
        weights = np.zeros(self.n_w)
        weights[:-1] += to_left
        weights[1:] += to_right
        return weights


Operand = Union["Field2D", np.ndarray, float]


@dataclass(frozen=True, eq=False)
class Field2D:
    """
    Gridded scalar over (w, z). Arithmetic returns new fields so the type
    can be fed to generic integrators (see stepping.heun_step).
    """

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise InputError(f"field shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise StabilityError("field contains non-finite values")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid2D) -> "Field2D":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid2D, value: float) -> "Field2D":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: Grid2D, func) -> "Field2D":
        """Sample func(w, z) on the nodes (func receives 2-D meshes)."""
        ww, zz = np.meshgrid(grid.w, grid.z, indexing="ij")
        return cls(grid, np.broadcast_to(func(ww, zz), grid.shape).astype(float))

    def with_values(self, values: np.ndarray) -> "Field2D":
        return Field2D(self.grid, values)

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def _raw(self, other: Operand):
        if isinstance(other, Field2D):
            if other.grid != self.grid:
                raise InputError("fields live on different grids")
            return other.values
        return other

    def __add__(self, other: Operand) -> "Field2D":
        return Field2D(self.grid, self.values + self._raw(other))

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "Field2D":
        return Field2D(self.grid, self.values - self._raw(other))

    def __rsub__(self, other: Operand) -> "Field2D":
        return Field2D(self.grid, self._raw(other) - self.values)

    def __mul__(self, other: Operand) -> "Field2D":
        return Field2D(self.grid, self.values * self._raw(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Field2D":
        return Field2D(self.grid, -self.values)


def integrate(field: Field2D) -> float:
    """Trapezoidal double integral over the whole domain."""
    g = field.grid
    return float(g.w_weights @ field.values @ g.z_weights)

def conditional_density(field: Field2D) -> np.ndarray:
    """z-marginal ybar(w) = int_0^1 y(w, z) dz, trapezoid per w-row."""
    return field.values @ field.grid.z_weights

def window_integral(field: Field2D, w_lo: float, w_hi: float) -> float:
    """Integral over [w_lo, w_hi] x [0, 1]."""
    weights = field.grid.window_weights(w_lo, w_hi)
    return float(weights @ conditional_density(field))

def window_indicator(grid: Grid2D, window: Optional[Tuple[float, float]]) -> np.ndarray:
    """
    Nodal indicator of the window along w, consistent with window_integral:
    weighting it by the trapezoid rule reproduces the window weights, so
    interior nodes get 1 and nodes on an aligned window edge get 0.5.
    A missing window gives zeros.
    """
    if window is None:
        return np.zeros(grid.n_w)
    return grid.window_weights(*window) / grid.w_weights
