# picard.py
# -----------------------------------------------------------------------------
# Optimal transport policies.
# - Full information: one backward sweep extracts every u_j(w, z) directly
#   from q(tau_j+), because the switch does not involve the population.
# - Partial information: Picard iteration between a forward solve under
#   u^(K-1) and a backward sweep extracting u^(K) from L_j(w). Controls are
#   grid indicators times U, so a fixed point is reached with an exactly
#   zero sup-norm change.
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from ..core.config import PICARD_MAX_ITERS
from ..core.errors import InputError
from ..pde.adjoint import AdjointSolution, solve_backward
from ..pde.forward import ForwardSolution, solve_forward
from ..pde.policy import ControlPolicy, InfoMode
from .objective import objective
from .scenario import Scenario

logger = logging.getLogger(__name__)


@dataclass
class OptimizationReport:
    """Outcome of one optimization; forward/adjoint are computed under `policy`."""

    policy: ControlPolicy
    objective_value: float
    iterations: int
    delta_history: List[float] = field(default_factory=list)
    converged: bool = True
    forward: Optional[ForwardSolution] = None
    adjoint: Optional[AdjointSolution] = None

    @property
    def mode(self) -> InfoMode:
        return self.policy.mode


def optimize_full(scenario: Scenario) -> OptimizationReport:
    """Single backward sweep, then one forward solve for the objective."""
    adjoint, policy = solve_backward(scenario, InfoMode.FULL)
    forward = solve_forward(scenario, policy)
    phi = objective(scenario, policy, forward)
    logger.info(f"full-information optimum: phi={phi:.6g} (c={scenario.cost_c:g})")
    return OptimizationReport(policy, phi, 1, [0.0], True, forward, adjoint)


def optimize_partial(scenario: Scenario, max_iters: int = PICARD_MAX_ITERS,
                     initial_guess: Optional[ControlPolicy] = None) -> OptimizationReport:
    """
    Picard iteration for the partial-information policy, starting from
    initial_guess (u = 0 when omitted). Running out of iterations returns a
    report with converged=False.

    Raises:
        InputError: max_iters < 1 or an initial guess of the wrong mode.
    """
    if max_iters < 1:
        raise InputError(f"max_iters must be >= 1 (got {max_iters})")
    n_imp = len(scenario.schedule)
    if initial_guess is None:
        policy = ControlPolicy.zeros(InfoMode.PARTIAL, n_imp, scenario.grid, scenario.cap_u)
    elif initial_guess.mode is not InfoMode.PARTIAL:
        raise InputError("initial guess must be a partial-information policy")
    else:
        policy = initial_guess

    deltas: List[float] = []
    forward = adjoint = None
    converged = False
    for k in range(1, max_iters + 1):
        forward = solve_forward(scenario, policy)
        adjoint, extracted = solve_backward(scenario, InfoMode.PARTIAL, forward)
        delta = extracted.sup_distance(policy)
        deltas.append(delta)
        logger.info(f"picard iteration {k}: delta={delta:g}")
        converged = delta == 0.0
        policy = extracted
        if converged:
            break

    if not converged:
        logger.warning(f"picard iteration did not converge in {max_iters} iterations "
                       f"(last delta={deltas[-1]:g}, c={scenario.cost_c:g})")
        forward = solve_forward(scenario, policy)
    phi = objective(scenario, policy, forward)
    logger.info(f"partial-information result: phi={phi:.6g} after {len(deltas)} iterations (c={scenario.cost_c:g})")
    return OptimizationReport(policy, phi, len(deltas), deltas, converged, forward, adjoint)
