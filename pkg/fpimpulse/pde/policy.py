# policy.py
# -----------------------------------------------------------------------------
# Transport controls u_j, one per impulse time.
#   FULL:    u_j(w, z), arrays of shape (n_w, n_z)
#   PARTIAL: u_j(w),    arrays of shape (n_w,), constant along z
# -----------------------------------------------------------------------------

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from ..core.errors import InputError, PolicyError
from ..numerics.grid import Grid2D

BOUND_SLACK = 1e-12


class InfoMode(Enum):
    """What the decision-maker observes: (w, z) or w only."""

    FULL = "full"
    PARTIAL = "partial"

    @property
    def ndim(self) -> int:
        return 2 if self is InfoMode.FULL else 1


def check_control(u: np.ndarray, cap: float) -> np.ndarray:
    """Return u as a float array, raising PolicyError outside [0, cap]."""
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise PolicyError("control contains non-finite values")
    if u.size and (u.min() < -BOUND_SLACK or u.max() > cap + BOUND_SLACK):
        raise PolicyError(f"control values in [{u.min():g}, {u.max():g}] leave [0, {cap:g}]")
    return u


def broadcast_control(u: np.ndarray, grid: Grid2D) -> np.ndarray:
    """Lift a w-only control to the full (w, z) grid; full controls pass through."""
    u = np.asarray(u, dtype=float)
    if u.shape == (grid.n_w,):
        return np.broadcast_to(u[:, None], grid.shape)
    if u.shape == grid.shape:
        return u
    raise InputError(f"control shape {u.shape} matches neither ({grid.n_w},) nor {grid.shape}")


@dataclass(frozen=True, eq=False)
class ControlPolicy:
    """Per-impulse transport fractions with cap U."""

    mode: InfoMode
    controls: Tuple[np.ndarray, ...]
    cap: float

    def __post_init__(self):
        if not 0.0 < self.cap < 1.0:
            raise PolicyError(f"cap_u must satisfy 0 < U < 1 (got {self.cap})")
        controls = tuple(check_control(u, self.cap) for u in self.controls)
        for j, u in enumerate(controls):
            if u.ndim != self.mode.ndim:
                raise InputError(f"control {j + 1} has {u.ndim} dimensions; {self.mode.value} mode needs {self.mode.ndim}")
        object.__setattr__(self, "controls", controls)

    @classmethod
    def constant(cls, mode: InfoMode, n_impulses: int, grid: Grid2D, cap: float,
                 value: float = 0.0) -> "ControlPolicy":
        shape = grid.shape if mode is InfoMode.FULL else (grid.n_w,)
        return cls(mode, tuple(np.full(shape, float(value)) for _ in range(n_impulses)), cap)

    @classmethod
    def zeros(cls, mode: InfoMode, n_impulses: int, grid: Grid2D, cap: float) -> "ControlPolicy":
        return cls.constant(mode, n_impulses, grid, cap, 0.0)

    @property
    def n_impulses(self) -> int:
        return len(self.controls)

    def field(self, j: int, grid: Grid2D) -> np.ndarray:
        """Control j (0-based) on the full grid."""
        return broadcast_control(self.controls[j], grid)

    def check_against(self, grid: Grid2D, n_impulses: int) -> None:
        if self.n_impulses != n_impulses:
            raise InputError(f"policy has {self.n_impulses} controls, schedule has {n_impulses} impulses")
        expected = grid.shape if self.mode is InfoMode.FULL else (grid.n_w,)
        for j, u in enumerate(self.controls):
            if u.shape != expected:
                raise InputError(f"control {j + 1} has shape {u.shape}, expected {expected}")

    def sup_distance(self, other: "ControlPolicy") -> float:
        """l-infinity distance over all impulses."""
        if other.n_impulses != self.n_impulses:
            raise InputError("policies have different numbers of impulses")
        return max((float(np.max(np.abs(a - b), initial=0.0)) for a, b in zip(self.controls, other.controls)),
                   default=0.0)

    def is_null(self) -> bool:
        return all(not np.any(u) for u in self.controls)

    def is_bang_bang(self) -> bool:
        return all(np.all((u == 0.0) | (u == self.cap)) for u in self.controls)

    def with_controls(self, controls: Sequence[np.ndarray]) -> "ControlPolicy":
        return ControlPolicy(self.mode, tuple(controls), self.cap)
