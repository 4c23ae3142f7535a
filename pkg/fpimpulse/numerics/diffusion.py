# diffusion.py
# -----------------------------------------------------------------------------
# Central differences for the degenerate z-diffusion.
# Both forms share one face flux G_{k+1/2} = -(v_{k+1} - v_k)/dx with zero
# wall flux and half cells at the ends, which is the mirror-ghost closure
# 2(v_1 - v_0)/dx^2 at the boundary nodes. The forward (FPE) form
# differentiates the product coeff*u; the adjoint form multiplies coeff by
# the second difference of q. On the trapezoid inner product the two are
# exact transposes of each other.
# -----------------------------------------------------------------------------

from __future__ import annotations

import numpy as np

from ..core.errors import InputError
from .grid import trapezoid_weights

FORMS = ("fpe", "adjoint")


def diffusion_faces(v: np.ndarray, dx: float) -> np.ndarray:
    """Diffusive face fluxes along the last axis, N+1 faces with zero walls."""
    v = np.asarray(v, dtype=float)
    inner = -(v[..., 1:] - v[..., :-1]) / dx
    zeros = np.zeros(v.shape[:-1] + (1,))
    return np.concatenate([zeros, inner, zeros], axis=-1)


def second_difference(v: np.ndarray, dx: float) -> np.ndarray:
    """Centered second difference with mirror ghosts at both ends."""
    faces = diffusion_faces(v, dx)
    widths = trapezoid_weights(np.shape(v)[-1], dx)
    return -(faces[..., 1:] - faces[..., :-1]) / widths


def central_diffusion(line: np.ndarray, coeff, dx: float = 1.0, form: str = "fpe") -> np.ndarray:
    """
    Second-derivative term of a diffusion operator.

    form="fpe" returns d^2(coeff*u)/dx^2; form="adjoint" returns
    coeff * d^2 q/dx^2. coeff is per node (or scalar).
    """
    line = np.asarray(line, dtype=float)
    if line.shape[-1] < 3:
        raise InputError("diffusion needs at least 3 nodes")
    if form == "fpe":
        return second_difference(np.asarray(coeff) * line, dx)
    if form == "adjoint":
        return np.asarray(coeff) * second_difference(line, dx)
    raise InputError(f"unknown diffusion form {form!r}; expected one of {FORMS}")
