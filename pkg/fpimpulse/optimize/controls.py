# controls.py
# -----------------------------------------------------------------------------
# Bang-bang control extraction from the post-impulse adjoints.
#   full information:    u = U where c - q1+ + q2+ < 0, else 0
#   partial information: u(w) = U where L(w) = int y1 (c - q1+ + q2+) dz < 0
# Ties (switch exactly 0) resolve to 0.
# -----------------------------------------------------------------------------

from __future__ import annotations

import numpy as np
from scipy.integrate import trapezoid

from ..core.errors import InputError
from ..numerics.grid import Field2D


def _switch(q1_plus: Field2D, q2_plus: Field2D, c: float) -> np.ndarray:
    if q1_plus.grid != q2_plus.grid:
        raise InputError("adjoint fields live on different grids")
    return c - q1_plus.values + q2_plus.values


def extract_control_full(q1_plus: Field2D, q2_plus: Field2D, c: float, cap: float) -> np.ndarray:
    """Two-valued control over (w, z)."""
    return np.where(_switch(q1_plus, q2_plus, c) < 0.0, cap, 0.0)


def switching_function_partial(y1_at_tau: Field2D, q1_plus: Field2D, q2_plus: Field2D, c: float) -> np.ndarray:
    """L(w): trapezoid over z of y1(tau) * (c - q1+ + q2+)."""
    if y1_at_tau.grid != q1_plus.grid:
        raise InputError("population and adjoint fields live on different grids")
    return trapezoid(y1_at_tau.values * _switch(q1_plus, q2_plus, c), dx=y1_at_tau.grid.dz, axis=1)


def extract_control_partial(switching: np.ndarray, cap: float) -> np.ndarray:
    """Two-valued control over w."""
    return np.where(np.asarray(switching, dtype=float) < 0.0, cap, 0.0)
