# objective.py
# -----------------------------------------------------------------------------
# Objective and its adjoint-based directional derivative.
#   phi(u)      = sum_j c * int u_j y1(tau_j) dw dz  -  int_{window x (0,1)} y2(T)
#   dphi(u)[v]  = sum_j int v_j y1(tau_j) (c - q1(tau_j+) + q2(tau_j+)) dw dz
# w-only controls and directions are broadcast along z.
# -----------------------------------------------------------------------------

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..core.errors import InputError
from ..numerics.grid import Grid2D, window_integral
from ..pde.adjoint import AdjointSolution
from ..pde.forward import ForwardSolution, solve_forward
from ..pde.policy import ControlPolicy, InfoMode, broadcast_control
from .scenario import Scenario


def _double_integral(grid: Grid2D, values: np.ndarray) -> float:
    return float(grid.w_weights @ values @ grid.z_weights)


def _check_forward(policy: ControlPolicy, forward: ForwardSolution, grid: Grid2D) -> None:
    if len(forward.y1_pre) != policy.n_impulses:
        raise InputError(
            f"forward solution has {len(forward.y1_pre)} impulse snapshots, policy has {policy.n_impulses} controls"
        )
    if forward.y2_T.grid != grid:
        raise InputError("forward solution was computed on a different grid")


def transport_cost(scenario: Scenario, policy: ControlPolicy, forward: ForwardSolution) -> float:
    """c times the total mass moved over all impulses."""
    grid = scenario.grid
    moved = (
        _double_integral(grid, policy.field(j, grid) * y1.values) for j, y1 in enumerate(forward.y1_pre)
    )
    return scenario.cost_c * math.fsum(moved)


def target_reward(scenario: Scenario, forward: ForwardSolution) -> float:
    """Habitat-2 population inside the target window at T (0 without a window)."""
    if scenario.target_window is None:
        return 0.0
    return window_integral(forward.y2_T, *scenario.target_window)


def objective(scenario: Scenario, policy: ControlPolicy, forward: ForwardSolution) -> float:
    """
    phi = transport cost - target reward, for a forward solve under `policy`.

    Raises:
        InputError: snapshots and policy disagree on impulses or grid.
    """
    policy.check_against(scenario.grid, len(scenario.schedule))
    _check_forward(policy, forward, scenario.grid)
    return transport_cost(scenario, policy, forward) - target_reward(scenario, forward)


def null_objective(scenario: Scenario) -> float:
    """phi of the policy that never transports."""
    policy = ControlPolicy.zeros(InfoMode.PARTIAL, len(scenario.schedule), scenario.grid, scenario.cap_u)
    return objective(scenario, policy, solve_forward(scenario, policy))


def gateaux_derivative(scenario: Scenario, policy: ControlPolicy, direction: Sequence[np.ndarray],
                       adjoint: AdjointSolution, forward: ForwardSolution) -> float:
    """
    Directional derivative of phi at `policy` along `direction` (one array per
    impulse, shaped like the policy's controls). The adjoint and forward
    solutions must both be computed under `policy`.

    Raises:
        InputError: direction, snapshots or adjoint do not match the policy.
    """
    grid = scenario.grid
    _check_forward(policy, forward, grid)
    if len(direction) != policy.n_impulses:
        raise InputError(f"direction has {len(direction)} components, policy has {policy.n_impulses}")
    if len(adjoint.q1_post) != policy.n_impulses:
        raise InputError("adjoint solution does not match the impulse schedule")

    terms = []
    for j, v in enumerate(direction):
        v = np.asarray(v, dtype=float)
        if v.shape != policy.controls[j].shape:
            raise InputError(f"direction {j + 1} has shape {v.shape}, expected {policy.controls[j].shape}")
        switch = scenario.cost_c - adjoint.q1_post[j].values + adjoint.q2_post[j].values
        terms.append(_double_integral(grid, broadcast_control(v, grid) * forward.y1_pre[j].values * switch))
    return math.fsum(terms)


def directional_fd(scenario: Scenario, policy: ControlPolicy, direction: Sequence[np.ndarray],
                   eps: float = 1e-3) -> float:
    """
    Central difference (phi(u + eps v) - phi(u - eps v)) / (2 eps). Both
    perturbed controls must stay inside [0, U].
    """
    def phi(sign: float) -> float:
        shifted = policy.with_controls([u + sign * eps * np.asarray(v, dtype=float)
                                        for u, v in zip(policy.controls, direction)])
        return objective(scenario, shifted, solve_forward(scenario, shifted))

    return (phi(1.0) - phi(-1.0)) / (2.0 * eps)
