# weno.py
# -----------------------------------------------------------------------------
# Fifth-order WENO kernels along the last array axis.
#  - weno5_faces / weno5_flux_derivative: conservative finite-difference form
#    with Lax-Friedrichs flux splitting (used by the forward FPE).
#  - weno5_upwind_derivative: non-conservative upwind-biased derivative of
#    point values (used by the adjoint).
#  - first-order counterparts (Lax-Friedrichs, donor-cell upwind) for the
#    limiter's low-order flux and for exact discrete duality checks.
# Nonlinear weights are the WENO-Z form with the classical smoothness
# indicators; lines may carry any number of leading batch dimensions.
# -----------------------------------------------------------------------------

from __future__ import annotations

from typing import Callable, Union

import numpy as np

from ..core.errors import InputError

GHOSTS = 3
STENCIL = 2 * GHOSTS - 1
EPS = 1e-40
LINEAR_WEIGHTS = (0.1, 0.6, 0.3)
BOUNDARIES = ("extrapolate", "periodic")

ArrayLike = Union[np.ndarray, float]


def _pad(values: np.ndarray, ghosts: int, boundary: str) -> np.ndarray:
    if boundary not in BOUNDARIES:
        raise InputError(f"unknown boundary closure {boundary!r}; expected one of {BOUNDARIES}")
    mode = "wrap" if boundary == "periodic" else "edge"
    width = [(0, 0)] * (values.ndim - 1) + [(ghosts, ghosts)]
    return np.pad(values, width, mode=mode)


def pad_line(values: np.ndarray, ghosts: int = GHOSTS, boundary: str = "extrapolate") -> np.ndarray:
    """Pad the last axis with ghost values (constant extrapolation or periodic wrap)."""
    if values.shape[-1] < STENCIL:
        raise InputError(f"line length {values.shape[-1]} shorter than the WENO stencil ({STENCIL})")
    return _pad(values, ghosts, boundary)


def weno5_reconstruct(v1, v2, v3, v4, v5) -> np.ndarray:
    """
    Left-biased fifth-order reconstruction at the right edge of v3's cell.

    The same combination gives the face value of a flux (conservative form)
    and the one-sided derivative from divided differences (upwind form).
    """
    q0 = (2.0 * v1 - 7.0 * v2 + 11.0 * v3) / 6.0
    q1 = (-v2 + 5.0 * v3 + 2.0 * v4) / 6.0
    q2 = (2.0 * v3 + 5.0 * v4 - v5) / 6.0

    b0 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) ** 2 + 0.25 * (v1 - 4.0 * v2 + 3.0 * v3) ** 2
    b1 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) ** 2 + 0.25 * (v2 - v4) ** 2
    b2 = 13.0 / 12.0 * (v3 - 2.0 * v4 + v5) ** 2 + 0.25 * (3.0 * v3 - 4.0 * v4 + v5) ** 2

    tau = np.abs(b0 - b2)
    d0, d1, d2 = LINEAR_WEIGHTS
    a0 = d0 * (1.0 + (tau / (b0 + EPS)) ** 2)
    a1 = d1 * (1.0 + (tau / (b1 + EPS)) ** 2)
    a2 = d2 * (1.0 + (tau / (b2 + EPS)) ** 2)
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)


def weno5_faces(f_plus: np.ndarray, f_minus: np.ndarray, boundary: str = "extrapolate") -> np.ndarray:
    """
    Numerical fluxes at the N+1 faces x_{-1/2} .. x_{N-1/2} of N points.

    f_plus is reconstructed from the left, f_minus from the right. An
    identically zero f_minus (non-negative wave speed) is skipped.
    """
    n = f_plus.shape[-1]
    fp = pad_line(np.asarray(f_plus, dtype=float), boundary=boundary)
    faces = weno5_reconstruct(
        fp[..., 0:n + 1], fp[..., 1:n + 2], fp[..., 2:n + 3], fp[..., 3:n + 4], fp[..., 4:n + 5]
    )
    f_minus = np.asarray(f_minus, dtype=float)
    if np.any(f_minus):
        fm = pad_line(f_minus, boundary=boundary)
        faces = faces + weno5_reconstruct(
            fm[..., 5:n + 6], fm[..., 4:n + 5], fm[..., 3:n + 4], fm[..., 2:n + 3], fm[..., 1:n + 2]
        )
    return faces


def split_flux(flux_values: np.ndarray, values: np.ndarray, alpha: ArrayLike):
    """Lax-Friedrichs splitting f± = (f ± alpha*u) / 2."""
    return 0.5 * (flux_values + alpha * values), 0.5 * (flux_values - alpha * values)


def weno5_flux_derivative(
    line: np.ndarray,
    flux: Callable[[np.ndarray], np.ndarray],
    alpha: ArrayLike,
    dx: float = 1.0,
    boundary: str = "extrapolate",
) -> np.ndarray:
    """
    Conservative approximation of d flux(u)/dx.

    Args:
        line: Point values u_i (last axis).
        flux: Vectorized flux function.
        alpha: Wave-speed bound, >= max |flux'(u)| on the line.
        dx: Point spacing.
        boundary: Ghost closure, "extrapolate" or "periodic".

    Returns:
        (F_{i+1/2} - F_{i-1/2}) / dx for every point.
    """
    if np.any(np.asarray(alpha) < 0):
        raise InputError("alpha must be non-negative")
    u = np.asarray(line, dtype=float)
    f_plus, f_minus = split_flux(np.asarray(flux(u), dtype=float), u, alpha)
    faces = weno5_faces(f_plus, f_minus, boundary)
    return (faces[..., 1:] - faces[..., :-1]) / dx


def weno5_upwind_derivative(
    line: np.ndarray,
    wind_sign: ArrayLike,
    dx: float = 1.0,
    boundary: str = "extrapolate",
) -> np.ndarray:
    """
    Upwind-biased fifth-order derivative of point values.

    wind_sign > 0 (information moving toward +x) selects the left-biased
    stencil, wind_sign < 0 the right-biased one; it may vary per point.
    """
    u = np.asarray(line, dtype=float)
    n = u.shape[-1]
    up = pad_line(u, boundary=boundary)
    d = np.diff(up, axis=-1) / dx  # d[k + 3] = (u_{k+1} - u_k) / dx
    left = weno5_reconstruct(d[..., 0:n], d[..., 1:n + 1], d[..., 2:n + 2], d[..., 3:n + 3], d[..., 4:n + 4])
    right = weno5_reconstruct(d[..., 5:n + 5], d[..., 4:n + 4], d[..., 3:n + 3], d[..., 2:n + 2], d[..., 1:n + 1])
    return np.where(np.asarray(wind_sign) >= 0, left, right)


def lax_friedrichs_faces(
    flux_values: np.ndarray, values: np.ndarray, alpha: ArrayLike, boundary: str = "extrapolate"
) -> np.ndarray:
    """First-order monotone fluxes F_{i+1/2} = f+_i + f-_{i+1} at N+1 faces."""
    f_plus, f_minus = split_flux(np.asarray(flux_values, dtype=float), np.asarray(values, dtype=float), alpha)
    fp = _pad(f_plus, 1, boundary)
    fm = _pad(f_minus, 1, boundary)
    return fp[..., :-1] + fm[..., 1:]


def upwind_faces(velocity: np.ndarray, values: np.ndarray, boundary: str = "extrapolate") -> np.ndarray:
    """Donor-cell fluxes v+_i u_i + v-_{i+1} u_{i+1} at N+1 faces."""
    carried_right = _pad(np.maximum(velocity, 0.0) * values, 1, boundary)
    carried_left = _pad(np.minimum(velocity, 0.0) * values, 1, boundary)
    return carried_right[..., :-1] + carried_left[..., 1:]


def upwind_derivative(
    line: np.ndarray, wind_sign: ArrayLike, dx: float = 1.0, boundary: str = "extrapolate"
) -> np.ndarray:
    """First-order one-sided derivative: backward where wind_sign >= 0, forward otherwise."""
    up = _pad(np.asarray(line, dtype=float), 1, boundary)
    backward = (up[..., 1:-1] - up[..., :-2]) / dx
    forward = (up[..., 2:] - up[..., 1:-1]) / dx
    return np.where(np.asarray(wind_sign) >= 0, backward, forward)
