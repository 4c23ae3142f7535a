# operators.py
# -----------------------------------------------------------------------------
# Spatial operators of the forward (FPE) and adjoint equations on one habitat.
#
# Forward, conservative:  dy/dt = -div(F) - R y,
#   F_w = a(z) y,  F_z = A(z) y - d/dz (K(z) y),  zero flux through all walls.
#   Faces follow the node grid: (n_w + 1, n_z) for w and (n_w, n_z + 1) for z,
#   with half control volumes at the boundary nodes.
# Adjoint, in reversed time s = T - t:
#   dq/ds = a(z) dq/dw + A(z) dq/dz + K(z) d2q/dz2 - R q,
#   upwinded against the forward velocity, zero normal derivative at walls.
#
# scheme="weno5" is the production discretization; scheme="upwind1" gives
# first-order operators that are exact discrete transposes of each other.
# -----------------------------------------------------------------------------

from __future__ import annotations

from typing import Tuple

import numpy as np

from ..core.errors import InputError
from ..numerics.diffusion import diffusion_faces, second_difference
from ..numerics.grid import Field2D, Grid2D
from ..numerics.limiter import limit_fluxes_2d
from ..numerics.stepping import check_cfl
from ..numerics.weno import (lax_friedrichs_faces, upwind_derivative, upwind_faces, weno5_faces,
                             weno5_upwind_derivative)
from .habitat import HabitatParams

SCHEMES = ("weno5", "upwind1")

FaceFluxes = Tuple[np.ndarray, np.ndarray]


def _walls(faces: np.ndarray) -> np.ndarray:
    faces[..., 0] = 0.0
    faces[..., -1] = 0.0
    return faces


def _check_scheme(scheme: str) -> None:
    if scheme not in SCHEMES:
        raise InputError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")


def advection_faces(y: np.ndarray, habitat: HabitatParams, grid: Grid2D, scheme: str = "weno5") -> FaceFluxes:
    """High-order (or donor-cell) advective face fluxes in w and z."""
    _check_scheme(scheme)
    a = habitat.w_speed(grid.z)[:, None]      # per z-row, lines along w
    A = habitat.z_drift(grid.z)[None, :]
    lines_w = y.T
    if scheme == "weno5":
        fw = weno5_faces(a * lines_w, np.zeros_like(lines_w))   # a >= 0: pure upwind split
        alpha = float(np.max(np.abs(A), initial=0.0))
        fz = weno5_faces(0.5 * (A + alpha) * y, 0.5 * (A - alpha) * y)
    else:
        fw = upwind_faces(np.broadcast_to(a, lines_w.shape), lines_w)
        fz = upwind_faces(np.broadcast_to(A, y.shape), y)
    return _walls(fw).T, _walls(fz)


def low_order_faces(y: np.ndarray, habitat: HabitatParams, grid: Grid2D) -> FaceFluxes:
    """Monotone Lax-Friedrichs advective fluxes for the limiter."""
    a = habitat.w_speed(grid.z)[:, None]
    A = habitat.z_drift(grid.z)[None, :]
    lines_w = y.T
    fw = lax_friedrichs_faces(a * lines_w, lines_w, a)
    alpha = float(np.max(np.abs(A), initial=0.0))
    fz = lax_friedrichs_faces(A * y, y, alpha)
    return _walls(fw).T, _walls(fz)


def divergence(fw: np.ndarray, fz: np.ndarray, grid: Grid2D) -> np.ndarray:
    """-div F over node control volumes."""
    return (
        -(fw[1:, :] - fw[:-1, :]) / grid.w_weights[:, None]
        - (fz[:, 1:] - fz[:, :-1]) / grid.z_weights[None, :]
    )


def check_step(habitat: HabitatParams, grid: Grid2D, dt: float) -> None:
    """Stability guard for explicit steps of either equation."""
    z = grid.z
    check_cfl(dt, grid.dw, grid.dz, habitat.w_speed(z), habitat.z_drift(z), habitat.diffusivity(z),
              habitat.mortality)


def fpe_advection(y: Field2D, habitat: HabitatParams, scheme: str = "weno5") -> Field2D:
    """Advective part -div(a y, A y) with zero wall flux."""
    grid = y.grid
    fw, fz = advection_faces(y.values, habitat, grid, scheme)
    return Field2D(grid, divergence(fw, fz, grid))


def fpe_rhs(y: Field2D, habitat: HabitatParams, scheme: str = "weno5") -> Field2D:
    """
    Unlimited forward tendency -div(F) - R y.

    Advection by conservative WENO with Lax-Friedrichs splitting, diffusion
    by central differences of K y, zero flux through all four boundaries.
    """
    grid = y.grid
    fw, fz = advection_faces(y.values, habitat, grid, scheme)
    fz = fz + diffusion_faces(habitat.diffusivity(grid.z)[None, :] * y.values, grid.dz)
    return Field2D(grid, divergence(fw, fz, grid) - habitat.mortality * y.values)


def fpe_limited_rhs(y: Field2D, habitat: HabitatParams, dt: float) -> Field2D:
    """
    Forward tendency with WENO fluxes blended toward Lax-Friedrichs so that
    y + dt * rhs stays non-negative. Used per Heun stage.
    """
    grid = y.grid
    values = y.values
    if not values.any():
        return Field2D.zeros(grid)
    diff = diffusion_faces(habitat.diffusivity(grid.z)[None, :] * values, grid.dz)
    hi_w, hi_z = advection_faces(values, habitat, grid)
    lo_w, lo_z = low_order_faces(values, habitat, grid)
    fw, fz = limit_fluxes_2d(
        values, hi_w, lo_w, hi_z + diff, lo_z + diff, dt,
        grid.w_weights, grid.z_weights, habitat.mortality,
    )
    return Field2D(grid, divergence(fw, fz, grid) - habitat.mortality * values)


def adjoint_advection(q: Field2D, habitat: HabitatParams, scheme: str = "weno5") -> Field2D:
    """a dq/dw + A dq/dz, upwinded against the forward velocity."""
    _check_scheme(scheme)
    grid = q.grid
    a = habitat.w_speed(grid.z)
    A = habitat.z_drift(grid.z)
    derivative = weno5_upwind_derivative if scheme == "weno5" else upwind_derivative
    dq_dw = derivative(q.values.T, -np.sign(a)[:, None], grid.dw).T
    dq_dz = derivative(q.values, -np.sign(A)[None, :], grid.dz)
    return Field2D(grid, a[None, :] * dq_dw + A[None, :] * dq_dz)


def adjoint_rhs(q: Field2D, habitat: HabitatParams, scheme: str = "weno5") -> Field2D:
    """
    Reversed-time tendency dq/ds = -S*q - R q of the adjoint equation.

    A constant q gives -R q; the solution of the pure sink decays as
    q(t) = q(T) exp(-R (T - t)).
    """
    grid = q.grid
    if not q.values.any():
        return Field2D.zeros(grid)
    transport = adjoint_advection(q, habitat, scheme).values
    spread = habitat.diffusivity(grid.z)[None, :] * second_difference(q.values, grid.dz)
    return Field2D(grid, transport + spread - habitat.mortality * q.values)
