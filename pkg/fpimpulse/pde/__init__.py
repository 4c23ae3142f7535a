# Forward FPE and backward adjoint solvers for the two-habitat system.

from .adjoint import (AdjointSolution, adjoint_impulse, retreat_adjoint, solve_adjoint,
                      solve_backward, terminal_adjoint)
from .export import conditional_csv, fields_csv
from .forward import (ForwardSolution, advance_fpe, apply_transport_impulse, solve_forward,
                      steps_between)
from .habitat import HabitatParams, ImpulseSchedule
from .operators import adjoint_advection, adjoint_rhs, fpe_advection, fpe_limited_rhs, fpe_rhs
from .policy import ControlPolicy, InfoMode, broadcast_control
