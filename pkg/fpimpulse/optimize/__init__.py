# Objective, control extraction, Picard loop and cost sweeps.

from .controls import extract_control_full, extract_control_partial, switching_function_partial
from .objective import directional_fd, gateaux_derivative, null_objective, objective
from .picard import OptimizationReport, optimize_full, optimize_partial
from .scenario import InitialHump, Scenario
from .sweep import (ActiveInterval, SweepResult, active_intervals, cost_sweep, intervals_csv,
                    objective_log_csv)
