# limiter.py
# -----------------------------------------------------------------------------
# Bound-preserving flux limiter.
# Fluxes live on faces (N+1 per line, face f between cells f-1 and f). Each
# cell gets a ratio Lambda in [0, 1] of how much outgoing anti-diffusive flux
# (high - low) it can afford; a face takes the Lambda of the cell it drains.
# The limited forward-Euler update then stays >= 0 whenever the low-order
# update does.
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
from typing import Tuple, Union

import numpy as np

from ..core.errors import StabilityError

logger = logging.getLogger(__name__)

POSITIVITY_RTOL = 1e-12

ArrayLike = Union[np.ndarray, float]


def _check_low_order(gamma: np.ndarray, cell_values: np.ndarray) -> np.ndarray:
    scale = max(float(np.max(np.abs(cell_values), initial=0.0)), np.finfo(float).tiny)
    worst = float(np.min(gamma, initial=0.0))
    if worst < -POSITIVITY_RTOL * scale:
        raise StabilityError(
            f"low-order update is negative ({worst:.3e} vs scale {scale:.3e}); "
            "time step exceeds the stability limit"
        )
    return np.maximum(gamma, 0.0)


def _cell_ratio(budget: np.ndarray, demand: np.ndarray) -> np.ndarray:
    ratio = np.ones_like(demand)
    np.divide(budget, demand, out=ratio, where=demand > 0)
    return np.minimum(ratio, 1.0)


def _face_theta(delta: np.ndarray, ratio: np.ndarray) -> np.ndarray:
    ones = np.ones(ratio.shape[:-1] + (1,))
    padded = np.concatenate([ones, ratio, ones], axis=-1)
    drains_left = padded[..., :-1]   # cell f-1
    drains_right = padded[..., 1:]   # cell f
    return np.where(delta > 0, drains_left, np.where(delta < 0, drains_right, 1.0))


def _outgoing(delta: np.ndarray) -> np.ndarray:
    return np.maximum(delta[..., 1:], 0.0) + np.maximum(-delta[..., :-1], 0.0)


def apply_bp_limiter(
    high_flux: np.ndarray,
    low_flux: np.ndarray,
    cell_values: np.ndarray,
    dt_over_dx: ArrayLike,
) -> np.ndarray:
    """
    Blend high- and low-order face fluxes so one forward-Euler step keeps
    every cell non-negative.

    Args:
        high_flux: High-order fluxes, N+1 faces along the last axis.
        low_flux: Monotone first-order fluxes on the same faces.
        cell_values: Current cell values, N along the last axis.
        dt_over_dx: Time step over cell width (scalar or per cell).

    Returns:
        theta * high + (1 - theta) * low per face.

    Raises:
        StabilityError: if the low-order update itself goes negative.
    """
    u = np.asarray(cell_values, dtype=float)
    low = np.asarray(low_flux, dtype=float)
    delta = np.asarray(high_flux, dtype=float) - low
    gamma = _check_low_order(u - dt_over_dx * (low[..., 1:] - low[..., :-1]), u)
    ratio = _cell_ratio(gamma, dt_over_dx * _outgoing(delta))
    return low + _face_theta(delta, ratio) * delta


def limit_fluxes_2d(
    values: np.ndarray,
    high_w: np.ndarray,
    low_w: np.ndarray,
    high_z: np.ndarray,
    low_z: np.ndarray,
    dt: float,
    widths_w: np.ndarray,
    widths_z: np.ndarray,
    sink_rate: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two-dimensional variant: the low-order step includes both directions and
    the linear sink, and each cell's budget is shared by its four faces.

    Face arrays are (n_w + 1, n_z) for w and (n_w, n_z + 1) for z.
    """
    y = np.asarray(values, dtype=float)
    rate_w = dt / widths_w[:, None]
    rate_z = dt / widths_z[None, :]
    low_update = (
        y * (1.0 - sink_rate * dt)
        - rate_w * (low_w[1:, :] - low_w[:-1, :])
        - rate_z * (low_z[:, 1:] - low_z[:, :-1])
    )
    gamma = _check_low_order(low_update, y)

    delta_w = high_w - low_w
    delta_z = high_z - low_z
    demand = rate_w * _outgoing(delta_w.T).T + rate_z * _outgoing(delta_z)
    ratio = _cell_ratio(gamma, demand)
    theta_w = _face_theta(delta_w.T, ratio.T).T
    theta_z = _face_theta(delta_z, ratio)
    if logger.isEnabledFor(logging.DEBUG):
        active = int(np.count_nonzero(ratio < 1.0))
        if active:
            logger.debug(f"limiter active in {active} cells")
    return low_w + theta_w * delta_w, low_z + theta_z * delta_z
