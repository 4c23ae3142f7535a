# Discretization kernels: grid/field algebra, WENO, limiter, diffusion, Heun.

from .diffusion import central_diffusion, diffusion_faces, second_difference
from .grid import (Field2D, Grid2D, conditional_density, integrate, trapezoid_weights,
                   window_indicator, window_integral)
from .limiter import apply_bp_limiter, limit_fluxes_2d
from .stepping import check_cfl, heun_step, loss_rates, stable_dt
from .weno import (lax_friedrichs_faces, upwind_derivative, upwind_faces, weno5_faces,
                   weno5_flux_derivative, weno5_upwind_derivative)
