#!/usr/bin/env python3
"""
Unit tests for the forward population solve, the adjoint sweep and their
discrete consistency
"""

import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).parent.parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from conftest import small_scenario  # noqa: E402
from fpimpulse.core.errors import InputError, ParameterError, PolicyError, StabilityError  # noqa: E402
from fpimpulse.growth import GrowthParams  # noqa: E402
from fpimpulse.numerics import Field2D, Grid2D, integrate  # noqa: E402
from fpimpulse.optimize.scenario import InitialHump, default_habitat  # noqa: E402
from fpimpulse.pde import (ControlPolicy, HabitatParams, ImpulseSchedule, InfoMode,  # noqa: E402
                           adjoint_impulse, adjoint_rhs, advance_fpe, apply_transport_impulse,
                           fpe_rhs, solve_adjoint, solve_backward, solve_forward, steps_between,
                           terminal_adjoint)


def _heun_factor(rate, dt):
    return 1.0 - rate * dt + 0.5 * (rate * dt) ** 2


def _pairing(grid, a, b):
    return float(grid.w_weights @ (a * b) @ grid.z_weights)


def _interior_bump(grid, wc, zc, sw, sz):
    field = Field2D.from_function(grid, lambda w, z: np.exp(-((w - wc) / sw) ** 2 - ((z - zc) / sz) ** 2))
    values = field.values.copy()
    values[[0, -1], :] = 0.0
    values[:, [0, -1]] = 0.0
    return values


@pytest.mark.unit
class TestHabitatAndSchedule:
    """Coefficients, schedules and step snapping"""

    def test_coefficients(self):
        """a = r(1-z), A = D(1-z), K = sigma^2 z(1-z)/2"""
        h = HabitatParams(GrowthParams(r=0.05, d_relax=0.02, sigma=0.1), 0.01)
        z = np.array([0.0, 0.5, 1.0])
        np.testing.assert_allclose(h.w_speed(z), [0.05, 0.025, 0.0])
        np.testing.assert_allclose(h.z_drift(z), [0.02, 0.01, 0.0])
        np.testing.assert_allclose(h.diffusivity(z), [0.0, 0.00125, 0.0])

    def test_mortality_must_be_positive(self):
        """R <= 0 is reported with its path"""
        problems = HabitatParams(GrowthParams(), 0.0).problems("scenario.habitat2")
        assert problems == ["scenario.habitat2.mortality: must be > 0 (got 0.0)"]

    @pytest.mark.parametrize("times,horizon", [((10.0, 5.0), 20.0), ((5.0, 25.0), 20.0), ((), 20.0)])
    def test_invalid_schedule(self, times, horizon):
        """Times must increase strictly inside (0, T)"""
        with pytest.raises(ParameterError):
            ImpulseSchedule(times, horizon)

    def test_step_indices(self):
        """Impulses snap to whole steps"""
        assert ImpulseSchedule((5.0, 10.0, 15.0), 20.0).step_indices(0.5) == ([10, 20, 30], 40)

    def test_horizon_not_a_multiple_of_dt(self):
        """T must be a whole number of steps"""
        with pytest.raises(InputError):
            ImpulseSchedule((5.0, 10.0), 20.0).step_indices(0.3)

    def test_impulses_collapsing_onto_one_step(self):
        """Two impulses on the same step are rejected"""
        with pytest.raises(InputError):
            ImpulseSchedule((5.0, 5.1), 20.0).step_indices(1.0)

    def test_steps_between(self):
        """dt must divide the interval"""
        assert steps_between(0.0, 5.0, 0.5) == 10
        with pytest.raises(InputError):
            steps_between(0.0, 5.0, 0.3)


@pytest.mark.unit
class TestControlPolicy:
    """Admissible controls"""

    def test_values_above_cap(self, tiny_grid):
        """u > U is a policy error"""
        with pytest.raises(PolicyError):
            ControlPolicy(InfoMode.PARTIAL, (np.full(tiny_grid.n_w, 0.3),), 0.2)

    @pytest.mark.parametrize("cap", [0.0, 1.0, 1.5])
    def test_cap_outside_open_unit_interval(self, tiny_grid, cap):
        """U must satisfy 0 < U < 1"""
        with pytest.raises(PolicyError):
            ControlPolicy.zeros(InfoMode.FULL, 2, tiny_grid, cap)

    def test_dimension_must_match_mode(self, tiny_grid):
        """A partial policy holds w-only controls"""
        with pytest.raises(InputError):
            ControlPolicy(InfoMode.PARTIAL, (np.zeros(tiny_grid.shape),), 0.2)

    def test_schedule_length_checked(self, tiny_grid):
        """One control per impulse"""
        policy = ControlPolicy.zeros(InfoMode.PARTIAL, 2, tiny_grid, 0.2)
        with pytest.raises(InputError):
            policy.check_against(tiny_grid, 3)

    def test_sup_distance_and_bang_bang(self, tiny_grid):
        """l-infinity distance over impulses; two-valued controls are bang-bang"""
        zero = ControlPolicy.zeros(InfoMode.PARTIAL, 2, tiny_grid, 0.2)
        u = np.zeros(tiny_grid.n_w)
        u[3] = 0.2
        other = zero.with_controls([np.zeros(tiny_grid.n_w), u])
        assert other.sup_distance(zero) == pytest.approx(0.2)
        assert other.is_bang_bang() and not other.is_null() and zero.is_null()
        assert not zero.with_controls([u * 0.5, u]).is_bang_bang()

    def test_partial_control_broadcasts_along_z(self, tiny_grid):
        """field() lifts u(w) to the grid"""
        u = np.linspace(0.0, 0.2, tiny_grid.n_w)
        policy = ControlPolicy(InfoMode.PARTIAL, (u,), 0.2)
        np.testing.assert_array_equal(policy.field(0, tiny_grid)[:, 7], u)


@pytest.mark.unit
class TestTransportImpulse:
    """Pointwise transfer between habitats"""

    def test_conserves_total_pointwise(self, tiny_grid):
        """y1 + y2 is unchanged at every node"""
        rng = np.random.default_rng(0)
        y1 = Field2D(tiny_grid, rng.random(tiny_grid.shape))
        y2 = Field2D(tiny_grid, rng.random(tiny_grid.shape))
        u = 0.2 * (rng.random(tiny_grid.shape) < 0.5)
        a, b = apply_transport_impulse(y1, y2, u, 0.2)
        np.testing.assert_allclose(a.values + b.values, y1.values + y2.values, rtol=1e-14)
        np.testing.assert_allclose(a.values, (1 - u) * y1.values)

    def test_control_above_cap(self, tiny_grid):
        """Transport beyond U is rejected"""
        y = Field2D.constant(tiny_grid, 1.0)
        with pytest.raises(PolicyError):
            apply_transport_impulse(y, y, np.full(tiny_grid.n_w, 0.5), 0.2)

    def test_cap_must_be_given(self, tiny_grid):
        """There is no implicit cap: a 0.9 control cannot slip through"""
        y = Field2D.constant(tiny_grid, 1.0)
        with pytest.raises(TypeError):
            apply_transport_impulse(y, y, np.full(tiny_grid.n_w, 0.9))


@pytest.mark.unit
class TestForwardSolve:
    """Forward populations over the horizon"""

    def test_mass_decays_at_the_mortality_rate(self, scenario):
        """Zero-flux walls: total mass follows exp(-R t) without transport"""
        policy = ControlPolicy.zeros(InfoMode.PARTIAL, 3, scenario.grid, scenario.cap_u)
        fwd = solve_forward(scenario, policy)
        rate = scenario.habitat1.mortality
        expected = 1000.0 * np.exp(-rate * fwd.step_times)
        np.testing.assert_allclose(fwd.mass1, expected, rtol=1e-5)
        assert fwd.y2_T.is_zero()
        assert fwd.min_value() >= 0.0

    def test_transport_moves_mass_without_loss(self, scenario):
        """With equal mortalities the combined mass still decays as exp(-R t)"""
        policy = ControlPolicy.constant(InfoMode.FULL, 3, scenario.grid, scenario.cap_u, scenario.cap_u)
        fwd = solve_forward(scenario, policy)
        total = fwd.mass1 + fwd.mass2
        steps = np.round(fwd.step_times / scenario.dt)
        expected = 1000.0 * _heun_factor(scenario.habitat1.mortality, scenario.dt) ** steps
        np.testing.assert_allclose(total, expected, rtol=1e-9)
        for j in range(3):
            moved = integrate(fwd.y2_post[j]) - integrate(fwd.y2_pre[j])
            assert moved == pytest.approx(0.2 * integrate(fwd.y1_pre[j]), rel=1e-12)

    def test_density_stays_non_negative(self, scenario):
        """The limiter keeps every snapshot >= 0"""
        policy = ControlPolicy.constant(InfoMode.PARTIAL, 3, scenario.grid, scenario.cap_u, 0.1)
        assert solve_forward(scenario, policy).min_value() >= 0.0

    def test_history_is_sampled_every_record_interval(self, scenario):
        """record_every = 5 gives rows at 0, 5, 10, 15 and 20"""
        policy = ControlPolicy.zeros(InfoMode.PARTIAL, 3, scenario.grid, scenario.cap_u)
        fwd = solve_forward(scenario, policy)
        np.testing.assert_allclose(fwd.history_times, [0.0, 5.0, 10.0, 15.0, 20.0])
        assert fwd.history_y1.shape == (5, scenario.grid.n_w)
        assert fwd.taus == (5.0, 10.0, 15.0)

    def test_zero_population_stays_zero(self):
        """An empty habitat remains empty"""
        scenario = small_scenario(init=InitialHump(a=20.0, w_center=1.2, z_center=0.3, total=0.0))
        policy = ControlPolicy.zeros(InfoMode.PARTIAL, 3, scenario.grid, scenario.cap_u)
        fwd = solve_forward(scenario, policy)
        assert fwd.y1_T.is_zero() and not np.any(fwd.mass1)

    def test_step_too_large(self, scenario):
        """dt beyond the stability limit raises before stepping"""
        y1, _ = scenario.initial_populations()
        with pytest.raises(StabilityError):
            advance_fpe(y1, scenario.habitat1, 0.0, 10.0, 5.0)

    def test_dt_must_divide_interval(self, scenario):
        """Segments are whole numbers of steps"""
        y1, _ = scenario.initial_populations()
        with pytest.raises(InputError):
            advance_fpe(y1, scenario.habitat1, 0.0, 1.0, 0.3)

    def test_policy_mismatch(self, scenario):
        """A policy for another schedule is rejected"""
        policy = ControlPolicy.zeros(InfoMode.PARTIAL, 2, scenario.grid, scenario.cap_u)
        with pytest.raises(InputError):
            solve_forward(scenario, policy)


@pytest.mark.unit
class TestAdjoint:
    """Terminal data, interfaces and backward sweeps"""

    def test_terminal_data(self, scenario):
        """q1(T) = 0 and q2(T) = -indicator of the window"""
        q1, q2 = terminal_adjoint(scenario)
        assert q1.is_zero()
        w = scenario.grid.w
        inside = (w > 1.5 + scenario.grid.dw) & (w < 3.0 - scenario.grid.dw)
        np.testing.assert_allclose(q2.values[inside], -1.0)
        assert not np.any(q2.values[w < 1.5 - scenario.grid.dw])

    def test_empty_window_gives_zero_adjoint(self):
        """No target, no terminal data, zero adjoint everywhere"""
        scenario = small_scenario(target_window=None)
        policy = ControlPolicy.zeros(InfoMode.PARTIAL, 3, scenario.grid, scenario.cap_u)
        adj = solve_adjoint(scenario, policy)
        assert adj.q1_0.is_zero() and adj.q2_0.is_zero()

    def test_constant_adjoint_decays_like_the_sink(self):
        """A whole-domain window keeps q2 constant in space, decaying as exp(-R (T - t))"""
        scenario = small_scenario(target_window=(0.0, 5.3))
        policy = ControlPolicy.zeros(InfoMode.PARTIAL, 3, scenario.grid, scenario.cap_u)
        adj = solve_adjoint(scenario, policy)
        rate = scenario.habitat2.mortality
        np.testing.assert_allclose(adj.q2_0.values, -math.exp(-rate * 20.0), rtol=1e-5)
        tail_steps = round(5.0 / scenario.dt)
        np.testing.assert_allclose(adj.q2_post[2].values, -_heun_factor(rate, scenario.dt) ** tail_steps, rtol=1e-12)
        assert adj.q1_0.is_zero()

    def test_interface_condition(self, tiny_grid):
        """q1 = q1+ + u (c - q1+ + q2+), q2 unchanged"""
        q1p = Field2D.constant(tiny_grid, -0.3)
        q2p = Field2D.constant(tiny_grid, -0.9)
        u = np.full(tiny_grid.n_w, 0.2)
        q1, q2 = adjoint_impulse(q1p, q2p, u, 0.2)
        np.testing.assert_allclose(q1.values, -0.3 + 0.2 * (0.2 + 0.3 - 0.9))
        assert q2 is q2p

    def test_interface_preserves_the_pairing(self, tiny_grid):
        """<q1, y1> + <q2, y2> before an impulse equals the sum after plus c times the moved mass"""
        rng = np.random.default_rng(5)
        y1 = Field2D(tiny_grid, rng.random(tiny_grid.shape))
        y2 = Field2D(tiny_grid, rng.random(tiny_grid.shape))
        q1p = Field2D(tiny_grid, -rng.random(tiny_grid.shape))
        q2p = Field2D(tiny_grid, -rng.random(tiny_grid.shape))
        u, c = 0.2 * (rng.random(tiny_grid.shape) < 0.5), 0.3
        y1p, y2p = apply_transport_impulse(y1, y2, u, 0.2)
        q1, q2 = adjoint_impulse(q1p, q2p, u, c)
        before = _pairing(tiny_grid, q1.values, y1.values) + _pairing(tiny_grid, q2.values, y2.values)
        after = _pairing(tiny_grid, q1p.values, y1p.values) + _pairing(tiny_grid, q2p.values, y2p.values)
        assert before == pytest.approx(after + c * _pairing(tiny_grid, u, y1.values), rel=1e-12)

    def test_full_optimum_keeps_adjoint_signs(self, scenario):
        """At the extracted optimum q2 stays in [-exp(R T), 0] and q1 <= 0 up to scheme overshoot"""
        adj, _ = solve_backward(scenario, InfoMode.FULL)
        bound = math.exp(scenario.habitat2.mortality * scenario.schedule.horizon)
        tol = 1e-2
        for q2 in [adj.q2_0, adj.q2_T, *adj.q2_pre, *adj.q2_post]:
            assert q2.values.max() <= tol and q2.values.min() >= -bound - tol
        for q1 in [adj.q1_0, adj.q1_T, *adj.q1_pre, *adj.q1_post]:
            assert q1.values.max() <= tol

    def test_free_transport_keeps_q1_non_positive(self, scenario):
        """With c = 0 the interface mixes two non-positive fields for any control"""
        free = replace(scenario, cost_c=0.0)
        rng = np.random.default_rng(11)
        controls = tuple(0.2 * rng.random(free.grid.n_w) for _ in range(3))
        adj = solve_adjoint(free, ControlPolicy(InfoMode.PARTIAL, controls, free.cap_u))
        for q1 in [adj.q1_0, *adj.q1_pre, *adj.q1_post]:
            assert q1.values.max() <= 1e-2
        assert adj.q2_0.values.max() <= 1e-2

    def test_partial_extraction_needs_snapshots(self, scenario):
        """Partial information cannot be extracted without y1(tau_j)"""
        with pytest.raises(InputError):
            solve_backward(scenario, InfoMode.PARTIAL)


@pytest.mark.unit
class TestDuality:
    """Forward and adjoint operators on the trapezoid inner product"""

    def test_first_order_operators_are_exact_transposes(self, tiny_grid):
        """<q, L y> = <L* q, y> to round-off for fields vanishing on the boundary"""
        habitat = default_habitat(0.051)
        rng = np.random.default_rng(6)
        y = rng.random(tiny_grid.shape)
        q = rng.normal(size=tiny_grid.shape)
        for values in (y, q):
            values[[0, -1], :] = 0.0
            values[:, [0, -1]] = 0.0
        ly = fpe_rhs(Field2D(tiny_grid, y), habitat, scheme="upwind1").values
        lq = adjoint_rhs(Field2D(tiny_grid, q), habitat, scheme="upwind1").values
        assert _pairing(tiny_grid, q, ly) == pytest.approx(_pairing(tiny_grid, lq, y), rel=1e-10, abs=1e-14)

    def test_weno_duality_residual_shrinks_under_refinement(self):
        """The high-order pair is consistent: the residual falls as the grid is refined"""
        habitat = default_habitat(0.051)
        residuals = []
        for n_w, n_z in ((41, 31), (161, 121)):
            grid = Grid2D(5.3, n_w, n_z)
            y = _interior_bump(grid, 2.65, 0.5, 0.6, 0.1)
            q = _interior_bump(grid, 2.4, 0.45, 0.9, 0.15)
            ly = fpe_rhs(Field2D(grid, y), habitat).values
            lq = adjoint_rhs(Field2D(grid, q), habitat).values
            residuals.append(abs(_pairing(grid, q, ly) - _pairing(grid, lq, y)))
        assert residuals[1] < 0.5 * residuals[0]

    def test_impulse_jumps_of_the_pairing_with_sensitivities(self):
        """
        Decay-only dynamics: <q, s> is constant between impulses, drops by
        c<u, s1> + <v y1, q1+ - q2+> at each impulse, and the jumps add up to
        <q2(T), s2(T)>, with s the finite-difference sensitivity along v
        """
        still = HabitatParams(GrowthParams(r=0.0, d_relax=0.0, sigma=0.0), 0.01)
        scenario = replace(small_scenario(cost_c=0.3), habitat1=still, habitat2=still)
        grid = scenario.grid
        rng = np.random.default_rng(12)
        base = tuple(0.05 + 0.1 * rng.random(grid.shape) for _ in range(3))
        direction = [rng.uniform(-1.0, 1.0, size=grid.shape) for _ in range(3)]
        eps = 1e-3

        def run(sign):
            controls = tuple(u + sign * eps * v for u, v in zip(base, direction))
            return solve_forward(scenario, ControlPolicy(InfoMode.FULL, controls, scenario.cap_u))

        def sensitivity(attr, j=None):
            up, down = getattr(plus, attr), getattr(minus, attr)
            if j is not None:
                up, down = up[j], down[j]
            return (up.values - down.values) / (2.0 * eps)

        policy = ControlPolicy(InfoMode.FULL, base, scenario.cap_u)
        fwd, adj = solve_forward(scenario, policy), solve_adjoint(scenario, policy)
        plus, minus = run(1.0), run(-1.0)

        def pairing(q1, q2, s1, s2):
            return _pairing(grid, q1.values, s1) + _pairing(grid, q2.values, s2)

        before = [pairing(adj.q1_pre[j], adj.q2_pre[j], sensitivity("y1_pre", j), sensitivity("y2_pre", j))
                  for j in range(3)]
        after = [pairing(adj.q1_post[j], adj.q2_post[j], sensitivity("y1_post", j), sensitivity("y2_post", j))
                 for j in range(3)]
        terminal = _pairing(grid, adj.q2_T.values, sensitivity("y2_T"))
        scale = abs(terminal)
        assert scale > 0.0
        assert before[0] == pytest.approx(0.0, abs=1e-6 * scale)
        for j in range(3):
            s1 = sensitivity("y1_pre", j)
            switch = adj.q1_post[j].values - adj.q2_post[j].values
            drop = (scenario.cost_c * _pairing(grid, base[j], s1)
                    + _pairing(grid, direction[j] * fwd.y1_pre[j].values, switch))
            assert before[j] - after[j] == pytest.approx(drop, rel=1e-4, abs=1e-6 * scale)
        for j in range(2):
            assert after[j] == pytest.approx(before[j + 1], rel=1e-4, abs=1e-6 * scale)
        assert sum(a - b for a, b in zip(after, before)) == pytest.approx(terminal, rel=1e-4)

    def test_unknown_scheme(self, tiny_grid):
        """Only weno5 and upwind1 exist"""
        with pytest.raises(InputError):
            fpe_rhs(Field2D.zeros(tiny_grid), default_habitat(0.05), scheme="weno7")


@pytest.mark.unit
class TestSwappedScenario:
    """Habitat exchange"""

    def test_swapped_exchanges_parameters(self, scenario):
        """swapped() flips habitat1 and habitat2"""
        swapped = scenario.swapped()
        assert swapped.habitat1 == scenario.habitat2 and swapped.habitat2 == scenario.habitat1

    def test_mortality_override(self, scenario):
        """Habitats can be replaced wholesale on a scenario"""
        h = HabitatParams(GrowthParams(r=0.05), mortality=0.05)
        assert replace(scenario, habitat1=h).habitat1.mortality == 0.05
