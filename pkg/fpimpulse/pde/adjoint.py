# adjoint.py
# -----------------------------------------------------------------------------
# Backward adjoint solve with terminal data q1(T) = 0, q2(T) = -chi_window and
# the interface condition at every tau_j:
#   q1(tau_j) = q1(tau_j+) + u_j (c - q1(tau_j+) + q2(tau_j+)),
#   q2(tau_j) = q2(tau_j+).
# The same sweep either applies a given policy (gradient evaluation) or
# extracts the bang-bang control from (q1+, q2+) on the fly (optimization).
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, List, Optional, Tuple

import numpy as np

from ..core.errors import InputError
from ..numerics.grid import Field2D, window_indicator
from ..numerics.stepping import heun_step
from .habitat import HabitatParams
from .operators import adjoint_rhs, check_step
from .policy import ControlPolicy, InfoMode, broadcast_control

if TYPE_CHECKING:
    from ..optimize.scenario import Scenario
    from .forward import ForwardSolution

logger = logging.getLogger(__name__)

ControlChooser = Callable[[int, Field2D, Field2D], np.ndarray]


@dataclass
class AdjointSolution:
    """
    Adjoint snapshots. *_post hold q(tau_j+) (before the interface is applied
    in backward time), *_pre hold q(tau_j) (after it); index j-1 for tau_j.
    """

    taus: Tuple[float, ...]
    q1_post: List[Field2D]
    q2_post: List[Field2D]
    q1_pre: List[Field2D]
    q2_pre: List[Field2D]
    q1_0: Field2D
    q2_0: Field2D
    q1_T: Field2D
    q2_T: Field2D


def terminal_adjoint(scenario: "Scenario") -> Tuple[Field2D, Field2D]:
    """q1(T) = 0 and q2(T) = -indicator of window x (0, 1)."""
    grid = scenario.grid
    chi = window_indicator(grid, scenario.target_window)
    return Field2D.zeros(grid), Field2D(grid, -np.broadcast_to(chi[:, None], grid.shape))


def adjoint_impulse(q1_plus: Field2D, q2_plus: Field2D, u_star: np.ndarray,
                    c: float) -> Tuple[Field2D, Field2D]:
    """Interface condition at one impulse; w-only controls broadcast along z."""
    u = broadcast_control(u_star, q1_plus.grid)
    q1 = q1_plus.values + u * (c - q1_plus.values + q2_plus.values)
    return Field2D(q1_plus.grid, q1), q2_plus


def retreat_adjoint(q: Field2D, habitat: HabitatParams, n_steps: int, dt: float) -> Field2D:
    """Integrate the adjoint n_steps backward in time with Heun."""
    check_step(habitat, q.grid, dt)

    def rhs(state: Field2D) -> Field2D:
        return adjoint_rhs(state, habitat)

    for _ in range(n_steps):
        if q.is_zero():
            break
        q = heun_step(q, rhs, dt)
    return q


def _integrate_adjoint(scenario: "Scenario", choose: ControlChooser) -> Tuple[AdjointSolution, List[np.ndarray]]:
    grid, dt = scenario.grid, scenario.dt
    tau_steps, n_total = scenario.schedule.step_indices(dt)
    h1, h2 = scenario.habitat1, scenario.habitat2
    check_step(h1, grid, dt)
    check_step(h2, grid, dt)

    q1_T, q2_T = terminal_adjoint(scenario)
    q1, q2 = q1_T, q2_T
    n_imp = len(tau_steps)
    q1_post: List[Optional[Field2D]] = [None] * n_imp
    q2_post: List[Optional[Field2D]] = [None] * n_imp
    q1_pre: List[Optional[Field2D]] = [None] * n_imp
    q2_pre: List[Optional[Field2D]] = [None] * n_imp
    controls: List[Optional[np.ndarray]] = [None] * n_imp
    upper = n_total

    with ThreadPoolExecutor(max_workers=2) as pool:
        for j in range(n_imp - 1, -1, -1):
            f1 = pool.submit(retreat_adjoint, q1, h1, upper - tau_steps[j], dt)
            f2 = pool.submit(retreat_adjoint, q2, h2, upper - tau_steps[j], dt)
            q1, q2 = f1.result(), f2.result()
            q1_post[j], q2_post[j] = q1, q2
            controls[j] = choose(j, q1, q2)
            q1, q2 = adjoint_impulse(q1, q2, controls[j], scenario.cost_c)
            q1_pre[j], q2_pre[j] = q1, q2
            upper = tau_steps[j]
        f1 = pool.submit(retreat_adjoint, q1, h1, upper, dt)
        f2 = pool.submit(retreat_adjoint, q2, h2, upper, dt)
        q1, q2 = f1.result(), f2.result()

    solution = AdjointSolution(
        taus=tuple(k * dt for k in tau_steps),
        q1_post=q1_post, q2_post=q2_post, q1_pre=q1_pre, q2_pre=q2_pre,
        q1_0=q1, q2_0=q2, q1_T=q1_T, q2_T=q2_T,
    )
    return solution, controls


def solve_adjoint(scenario: "Scenario", policy: ControlPolicy) -> AdjointSolution:
    """Adjoint sweep applying a prescribed policy at the interfaces."""
    policy.check_against(scenario.grid, len(scenario.schedule))
    solution, _ = _integrate_adjoint(scenario, lambda j, q1, q2: policy.controls[j])
    return solution


def solve_backward(scenario: "Scenario", mode: InfoMode,
                   y_snapshots: Optional["ForwardSolution"] = None) -> Tuple[AdjointSolution, ControlPolicy]:
    """
    Adjoint sweep that extracts the optimal bang-bang control at each tau_j
    from the post-impulse adjoints (and, for partial information, from the
    pre-impulse habitat-1 population of y_snapshots).

    Raises:
        InputError: partial mode without forward snapshots.
    """
    from ..optimize.controls import (extract_control_full, extract_control_partial,
                                     switching_function_partial)

    c, cap = scenario.cost_c, scenario.cap_u
    if mode is InfoMode.PARTIAL:
        if y_snapshots is None:
            raise InputError("partial-information extraction needs forward snapshots y1(tau_j)")
        if len(y_snapshots.y1_pre) != len(scenario.schedule):
            raise InputError("forward snapshots do not match the impulse schedule")

        def choose(j: int, q1: Field2D, q2: Field2D) -> np.ndarray:
            return extract_control_partial(switching_function_partial(y_snapshots.y1_pre[j], q1, q2, c), cap)
    else:
        def choose(j: int, q1: Field2D, q2: Field2D) -> np.ndarray:
            return extract_control_full(q1, q2, c, cap)

    solution, controls = _integrate_adjoint(scenario, choose)
    policy = ControlPolicy(mode, tuple(controls), cap)
    active = [int(np.count_nonzero(u)) for u in controls]
    logger.info(f"backward sweep ({mode.value}): active nodes per impulse {active}")
    return solution, policy
