#!/usr/bin/env python3
"""
Unit tests for the node grid, window quadrature and field algebra
"""

import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).parent.parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from fpimpulse.core.errors import InputError, ParameterError, StabilityError  # noqa: E402
from fpimpulse.numerics import (Field2D, Grid2D, conditional_density, integrate,  # noqa: E402
                                trapezoid_weights, window_indicator, window_integral)


@pytest.fixture
def grid():
    # dw = 0.25 so window edges on multiples of 0.25 are node-aligned
    return Grid2D(w_max=5.0, n_w=21, n_z=11)


@pytest.mark.unit
class TestGrid2D:
    """Grid geometry and validation"""

    def test_spacing_and_nodes(self, grid):
        """Both boundaries are nodes"""
        assert grid.dw == pytest.approx(0.25)
        assert grid.dz == pytest.approx(0.1)
        assert grid.w[0] == 0.0 and grid.w[-1] == pytest.approx(5.0)
        assert grid.shape == (21, 11)

    def test_trapezoid_weights_sum_to_length(self):
        """Half weights at the ends, total equals the interval length"""
        weights = trapezoid_weights(5, 0.5)
        assert weights.tolist() == [0.25, 0.5, 0.5, 0.5, 0.25]

    @pytest.mark.parametrize("kwargs,fragment", [
        ({"w_max": -1.0}, "grid.w_max"),
        ({"n_w": 5}, "grid.n_w"),
        ({"n_z": 20.5}, "grid.n_z"),
    ])
    def test_invalid_grid(self, kwargs, fragment):
        """Bad geometry raises ParameterError naming the field"""
        with pytest.raises(ParameterError) as exc:
            Grid2D(**kwargs)
        assert any(p.startswith(fragment) for p in exc.value.problems)

    def test_grids_compare_by_value(self):
        """Equal geometry means equal grids"""
        assert Grid2D(5.0, 21, 11) == Grid2D(5.0, 21, 11)


@pytest.mark.unit
class TestQuadrature:
    """Integrals and window weights"""

    def test_integrate_constant(self, grid):
        """The integral of 1 is the domain area"""
        assert integrate(Field2D.constant(grid, 1.0)) == pytest.approx(5.0)

    def test_integrate_bilinear_exactly(self, grid):
        """Trapezoid quadrature is exact for w*z"""
        field = Field2D.from_function(grid, lambda w, z: w * z)
        assert integrate(field) == pytest.approx(12.5 * 0.5)

    def test_conditional_density_of_constant(self, grid):
        """The z-marginal of 1 is 1 at every w"""
        np.testing.assert_allclose(conditional_density(Field2D.constant(grid, 1.0)), 1.0)

    def test_window_weights_sum_to_window_length(self, grid):
        """Aligned or not, weights add up to w_hi - w_lo"""
        assert grid.window_weights(1.0, 3.0).sum() == pytest.approx(2.0)
        assert grid.window_weights(1.1, 2.93).sum() == pytest.approx(1.83)

    def test_window_weights_integrate_linear_function_exactly(self, grid):
        """Fractional end cells split the interpolant exactly"""
        weights = grid.window_weights(1.1, 2.93)
        assert weights @ grid.w == pytest.approx(0.5 * (2.93 ** 2 - 1.1 ** 2))

    def test_window_integral(self, grid):
        """A constant density integrates to the window's area"""
        assert window_integral(Field2D.constant(grid, 2.0), 1.0, 3.0) == pytest.approx(4.0)

    @pytest.mark.parametrize("window", [(-0.1, 1.0), (2.0, 2.0), (3.0, 1.0), (1.0, 6.0)])
    def test_invalid_window(self, grid, window):
        """Windows must satisfy 0 <= lo < hi <= w_max"""
        with pytest.raises(InputError):
            grid.window_weights(*window)

    def test_indicator_with_aligned_edges(self, grid):
        """Interior nodes get 1, aligned edge nodes 0.5, outside 0"""
        chi = window_indicator(grid, (1.0, 3.0))
        assert chi[4] == pytest.approx(0.5) and chi[12] == pytest.approx(0.5)
        np.testing.assert_allclose(chi[5:12], 1.0)
        assert not np.any(chi[:4]) and not np.any(chi[13:])

    def test_indicator_with_edges_between_nodes(self, grid):
        """Off-node edges give fractional end values whose trapezoid sum is the window width"""
        chi = window_indicator(grid, (1.1, 2.9))
        assert chi.min() >= 0.0 and chi.max() <= 1.0 + 1e-12
        assert 0.0 < chi[4] < 1.0 and 0.0 < chi[12] < 1.0
        np.testing.assert_allclose(chi[6:11], 1.0)
        assert float(grid.w_weights @ chi) == pytest.approx(1.8, rel=1e-12)

    def test_indicator_of_whole_domain(self, grid):
        """A window covering [0, w_max] is 1 everywhere, boundary nodes included"""
        np.testing.assert_allclose(window_indicator(grid, (0.0, 5.0)), 1.0)

    def test_missing_window(self, grid):
        """No window means a zero indicator"""
        assert not np.any(window_indicator(grid, None))


@pytest.mark.unit
class TestField2D:
    """Field construction and arithmetic"""

    def test_shape_mismatch(self, grid):
        """Values must match the grid shape"""
        with pytest.raises(InputError):
            Field2D(grid, np.zeros((3, 3)))

    def test_non_finite_values(self, grid):
        """NaN or inf values are a numerical failure"""
        values = np.zeros(grid.shape)
        values[2, 2] = np.nan
        with pytest.raises(StabilityError):
            Field2D(grid, values)

    def test_arithmetic_returns_new_fields(self, grid):
        """+, -, * and unary minus work with fields and scalars"""
        a = Field2D.constant(grid, 2.0)
        b = Field2D.constant(grid, 3.0)
        result = -(a * b - 1.0) + 0.5 * a
        np.testing.assert_allclose(result.values, -4.0)
        assert (1.0 - a).values[0, 0] == -1.0
        assert a.values[0, 0] == 2.0

    def test_fields_on_different_grids(self, grid):
        """Mixing grids is rejected"""
        other = Grid2D(w_max=5.0, n_w=21, n_z=21)
        with pytest.raises(InputError):
            Field2D.zeros(grid) + Field2D.zeros(other)

    def test_is_zero(self, grid):
        """Only an all-zero field is zero"""
        assert Field2D.zeros(grid).is_zero()
        assert not Field2D.constant(grid, 1e-300).is_zero()
