# fpimpulse: stochastic fish-growth calibration and impulse-control
# optimization of two-habitat population densities.

from .core.config import VERSION as __version__
from .growth import GrowthParams, ModelKind, simulate_paths
from .numerics import Field2D, Grid2D
from .optimize import Scenario, cost_sweep, optimize_full, optimize_partial
from .pde import ControlPolicy, InfoMode, solve_adjoint, solve_forward
