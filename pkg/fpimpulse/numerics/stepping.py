# stepping.py
# -----------------------------------------------------------------------------
# Explicit Heun (RK2) integration and the step-size guard.
# The guard bounds the diagonal of the monotone low-order update used by the
# limiter, node row by node row along z:
#   2|a|/dw + alpha/dz (2 alpha/dz on the half cells at z = 0, 1)
#   + 2K/dz^2 + R
# where the factor 2 on |a| covers the half cell at w = 0. One forward-Euler
# stage stays non-negative whenever dt times this rate is at most 1.
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
from typing import Callable, TypeVar

import numpy as np

from ..core.config import CFL_SAFETY
from ..core.errors import InputError, StabilityError

logger = logging.getLogger(__name__)

State = TypeVar("State")


def heun_step(state: State, rhs: Callable[[State], State], dt: float) -> State:
    """
    One predictor-corrector step: u* = u + dt*f(u); u + dt/2*(f(u) + f(u*)).

    Works for floats, numpy arrays and Field2D alike.
    """
    if not dt > 0:
        raise InputError(f"dt must be positive (got {dt})")
    k1 = rhs(state)
    predictor = state + dt * k1
    k2 = rhs(predictor)
    return state + (0.5 * dt) * (k1 + k2)


def loss_rates(dw: float, dz: float, w_speed, z_drift, diffusivity, sink_rate: float = 0.0) -> np.ndarray:
    """
    Worst-case outflow rate (1/day) of each z row of the low-order update.
    Coefficients are given per z node; scalars stand for a single row.
    """
    a, A, K = np.broadcast_arrays(
        np.abs(np.atleast_1d(np.asarray(w_speed, dtype=float))),
        np.atleast_1d(np.asarray(z_drift, dtype=float)),
        np.atleast_1d(np.asarray(diffusivity, dtype=float)),
    )
    alpha = float(np.max(np.abs(A), initial=0.0))
    z_term = np.full(a.shape, alpha / dz)
    z_term[[0, -1]] = 2.0 * alpha / dz
    return 2.0 * a / dw + z_term + 2.0 * np.maximum(K, 0.0) / (dz * dz) + sink_rate


def stable_dt(dw: float, dz: float, w_speed, z_drift, diffusivity, sink_rate: float = 0.0,
              safety: float = CFL_SAFETY) -> float:
    """
    Largest admissible step: safety / max over rows of the summed loss rate.
    Vanishing coefficients impose no limit.
    """
    peak = float(np.max(loss_rates(dw, dz, w_speed, z_drift, diffusivity, sink_rate)))
    return safety / peak if peak > 0 else np.inf


def check_cfl(dt: float, dw: float, dz: float, w_speed, z_drift, diffusivity,
              sink_rate: float = 0.0) -> None:
    """Raise StabilityError when dt exceeds stable_dt."""
    limit = stable_dt(dw, dz, w_speed, z_drift, diffusivity, sink_rate)
    if dt > limit:
        raise StabilityError(f"time step {dt} exceeds the stability limit {limit:.6g}")
    logger.debug(f"dt={dt} within stability limit {limit:.6g}")
