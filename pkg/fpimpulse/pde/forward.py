# forward.py
# -----------------------------------------------------------------------------
# Forward population solve for the two habitats.
# Between impulses each habitat follows its FPE with mortality (Heun stages
# with the bound-preserving limiter); at tau_j the transport impulse moves a
# fraction u_j of habitat 1 into habitat 2. The two habitats are independent
# between impulses and are advanced on a two-thread pool.
# -----------------------------------------------------------------------------

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..core.errors import InputError, StabilityError
from ..numerics.grid import Field2D, conditional_density, integrate
from ..numerics.stepping import heun_step
from .habitat import HabitatParams
from .operators import check_step, fpe_limited_rhs
from .policy import ControlPolicy, broadcast_control, check_control

if TYPE_CHECKING:
    from ..optimize.scenario import Scenario

logger = logging.getLogger(__name__)

ROUNDOFF_RTOL = 1e-12


def _drop_roundoff(y: Field2D) -> Field2D:
    """Zero negatives at round-off level; larger ones mean the limiter failed."""
    values = y.values
    low = float(values.min(initial=0.0))
    if low >= 0.0:
        return y
    if low < -ROUNDOFF_RTOL * float(values.max(initial=0.0)):
        raise StabilityError(f"density became negative ({low:.3e}) after a limited step")
    return Field2D(y.grid, np.maximum(values, 0.0))


def steps_between(t0: float, t1: float, dt: float) -> int:
    """Number of dt steps from t0 to t1; the span must be a multiple of dt."""
    if not t1 > t0:
        raise InputError(f"need t1 > t0 (got {t0}, {t1})")
    if not dt > 0:
        raise InputError(f"dt must be positive (got {dt})")
    n = int(round((t1 - t0) / dt))
    if n < 1 or abs(n * dt - (t1 - t0)) > 1e-9 * max(1.0, abs(t1)):
        raise InputError(f"dt={dt} does not divide the interval [{t0}, {t1}]")
    return n


def _advance_steps(y: Field2D, habitat: HabitatParams, n_steps: int, dt: float,
                   on_step: Optional[Callable[[int, Field2D], None]] = None) -> Field2D:
    check_step(habitat, y.grid, dt)

    def rhs(state: Field2D) -> Field2D:
        return fpe_limited_rhs(state, habitat, dt)

    for k in range(1, n_steps + 1):
        if not y.is_zero():
            y = _drop_roundoff(heun_step(y, rhs, dt))
        if on_step is not None:
            on_step(k, y)
    return y


def advance_fpe(y: Field2D, habitat: HabitatParams, t0: float, t1: float, dt: float) -> Field2D:
    """
    Integrate one habitat's FPE from t0 to t1.

    Raises:
        InputError: dt does not divide t1 - t0.
        StabilityError: dt violates the stability guard.
    """
    return _advance_steps(y, habitat, steps_between(t0, t1, dt), dt)


def apply_transport_impulse(y1: Field2D, y2: Field2D, u_j: np.ndarray,
                            cap: float) -> Tuple[Field2D, Field2D]:
    """
    Move the fraction u_j of habitat 1 into habitat 2 pointwise.
    A w-only control is broadcast along z.

    Raises:
        PolicyError: u_j outside [0, cap].
    """
    u = broadcast_control(check_control(u_j, cap), y1.grid)
    moved = u * y1.values
    return Field2D(y1.grid, y1.values - moved), Field2D(y2.grid, y2.values + moved)


@dataclass
class ForwardSolution:
    """
    Snapshots of the populations around every impulse and at T, the total
    mass of each habitat after every step (index 0 is t = 0; at an impulse
    step the pre-impulse mass), and conditional densities sampled every
    record interval for heatmaps.
    """

    taus: Tuple[float, ...]
    y1_pre: List[Field2D]
    y2_pre: List[Field2D]
    y1_post: List[Field2D]
    y2_post: List[Field2D]
    y1_T: Field2D
    y2_T: Field2D
    step_times: np.ndarray
    mass1: np.ndarray
    mass2: np.ndarray
    history_times: np.ndarray = field(default_factory=lambda: np.empty(0))
    history_y1: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))
    history_y2: np.ndarray = field(default_factory=lambda: np.empty((0, 0)))

    def snapshots(self) -> List[Field2D]:
        return [*self.y1_pre, *self.y2_pre, *self.y1_post, *self.y2_post, self.y1_T, self.y2_T]

    def min_value(self) -> float:
        return min(float(s.values.min()) for s in self.snapshots())


class _Recorder:
    """Per-habitat mass and conditional-density bookkeeping on global step indices."""

    def __init__(self, n_total: int, stride: int):
        self.mass = np.zeros(n_total + 1)
        self.stride = stride
        self.history: Dict[int, np.ndarray] = {}

    def start(self, y: Field2D) -> None:
        self.mass[0] = integrate(y)
        self.history[0] = conditional_density(y)

    def callback(self, offset: int) -> Callable[[int, Field2D], None]:
        def record(k: int, y: Field2D) -> None:
            step = offset + k
            self.mass[step] = integrate(y)
            if step % self.stride == 0:
                self.history[step] = conditional_density(y)
        return record


def solve_forward(scenario: "Scenario", policy: ControlPolicy,
                  record_every: Optional[float] = None) -> ForwardSolution:
    """
    Alternate FPE segments and transport impulses over [0, T].

    Raises:
        InputError: policy does not match the schedule or grid.
        PolicyError: control values outside [0, U].
        StabilityError: dt too large for the grid.
    """
    grid, dt = scenario.grid, scenario.dt
    policy.check_against(grid, len(scenario.schedule))
    tau_steps, n_total = scenario.schedule.step_indices(dt)
    h1, h2 = scenario.habitat1, scenario.habitat2
    check_step(h1, grid, dt)
    check_step(h2, grid, dt)

    every = scenario.record_every if record_every is None else record_every
    stride = max(1, int(round(every / dt)))
    rec1, rec2 = _Recorder(n_total, stride), _Recorder(n_total, stride)

    y1, y2 = scenario.initial_populations()
    rec1.start(y1)
    rec2.start(y2)
    y1_pre, y2_pre, y1_post, y2_post = [], [], [], []
    bounds = [0, *tau_steps, n_total]

    with ThreadPoolExecutor(max_workers=2) as pool:
        for seg in range(len(bounds) - 1):
            start, end = bounds[seg], bounds[seg + 1]
            f1 = pool.submit(_advance_steps, y1, h1, end - start, dt, rec1.callback(start))
            f2 = pool.submit(_advance_steps, y2, h2, end - start, dt, rec2.callback(start))
            y1, y2 = f1.result(), f2.result()
            if seg == len(tau_steps):
                break
            y1_pre.append(y1)
            y2_pre.append(y2)
            y1, y2 = apply_transport_impulse(y1, y2, policy.controls[seg], policy.cap)
            y1_post.append(y1)
            y2_post.append(y2)
            rec1.history[end] = conditional_density(y1)
            rec2.history[end] = conditional_density(y2)
            logger.debug(
                f"impulse {seg + 1} at t={end * dt:g}: moved {integrate(y2) - integrate(y2_pre[-1]):.6g}"
            )

    steps = sorted(rec1.history)
    logger.info(
        f"forward solve done: T={n_total * dt:g}, masses {rec1.mass[-1]:.6g} / {rec2.mass[-1]:.6g}"
    )
    return ForwardSolution(
        taus=tuple(k * dt for k in tau_steps),
        y1_pre=y1_pre, y2_pre=y2_pre, y1_post=y1_post, y2_post=y2_post,
        y1_T=y1, y2_T=y2,
        step_times=np.arange(n_total + 1) * dt,
        mass1=rec1.mass, mass2=rec2.mass,
        history_times=np.asarray(steps, dtype=float) * dt,
        history_y1=np.array([rec1.history[k] for k in steps]),
        history_y2=np.array([rec2.history[k] for k in steps]),
    )
