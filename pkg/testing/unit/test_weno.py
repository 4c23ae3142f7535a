#!/usr/bin/env python3
"""
Unit tests for WENO and first-order transport kernels
"""

import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).parent.parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from fpimpulse.core.errors import InputError  # noqa: E402
from fpimpulse.numerics import (lax_friedrichs_faces, upwind_derivative, upwind_faces,  # noqa: E402
                                weno5_faces, weno5_flux_derivative, weno5_upwind_derivative)


def _periodic(n):
    x = np.arange(n) / n
    return x, 1.0 / n


def _observed_order(errors, sizes):
    return np.log(errors[-2] / errors[-1]) / np.log(sizes[-1] / sizes[-2])


@pytest.mark.unit
class TestWenoAccuracy:
    """Convergence on smooth periodic profiles"""

    SIZES = (40, 80, 160)

    def test_flux_derivative_is_fifth_order(self):
        """d/dx sin(2 pi x) through Lax-Friedrichs-split WENO converges at order >= 4.5"""
        errors = []
        for n in self.SIZES:
            x, dx = _periodic(n)
            approx = weno5_flux_derivative(np.sin(2 * np.pi * x), lambda u: u, 1.0, dx, "periodic")
            errors.append(np.max(np.abs(approx - 2 * np.pi * np.cos(2 * np.pi * x))))
        assert _observed_order(errors, self.SIZES) >= 4.5

    def test_split_flux_with_both_directions(self):
        """alpha above the wave speed activates the f- part without losing order"""
        errors = []
        for n in self.SIZES:
            x, dx = _periodic(n)
            approx = weno5_flux_derivative(np.sin(2 * np.pi * x), lambda u: u, 2.0, dx, "periodic")
            errors.append(np.max(np.abs(approx - 2 * np.pi * np.cos(2 * np.pi * x))))
        assert _observed_order(errors, self.SIZES) >= 4.5

    @pytest.mark.parametrize("wind", [1.0, -1.0])
    def test_upwind_derivative_is_fifth_order(self, wind):
        """Both stencil orientations converge at order >= 4.5"""
        errors = []
        for n in self.SIZES:
            x, dx = _periodic(n)
            approx = weno5_upwind_derivative(np.sin(2 * np.pi * x), wind, dx, "periodic")
            errors.append(np.max(np.abs(approx - 2 * np.pi * np.cos(2 * np.pi * x))))
        assert _observed_order(errors, self.SIZES) >= 4.5


@pytest.mark.unit
class TestWenoBehaviour:
    """Exactness, stencil selection and argument checks"""

    def test_constant_line_has_zero_derivative(self):
        """Constants are preserved by every kernel"""
        line = np.full(12, 3.0)
        assert not np.any(weno5_upwind_derivative(line, 1.0))
        assert not np.any(weno5_flux_derivative(line, lambda u: u, 1.0))

    def test_linear_profile_is_exact_in_the_interior(self):
        """Polynomial reproduction away from the ghost closure"""
        line = 2.0 * np.arange(20.0)
        d = weno5_upwind_derivative(line, 1.0)
        np.testing.assert_allclose(d[3:-3], 2.0)

    def test_stencil_follows_wind_per_point(self):
        """Sign-varying wind picks left or right stencils pointwise"""
        x, dx = _periodic(40)
        line = np.sin(2 * np.pi * x)
        wind = np.where(np.arange(40) % 2 == 0, 1.0, -1.0)
        mixed = weno5_upwind_derivative(line, wind, dx, "periodic")
        left = weno5_upwind_derivative(line, 1.0, dx, "periodic")
        right = weno5_upwind_derivative(line, -1.0, dx, "periodic")
        np.testing.assert_array_equal(mixed[::2], left[::2])
        np.testing.assert_array_equal(mixed[1::2], right[1::2])

    def test_batched_lines(self):
        """Leading axes are independent lines"""
        x, dx = _periodic(20)
        rows = np.vstack([np.sin(2 * np.pi * x), np.cos(2 * np.pi * x)])
        batched = weno5_upwind_derivative(rows, 1.0, dx, "periodic")
        np.testing.assert_array_equal(batched[1], weno5_upwind_derivative(rows[1], 1.0, dx, "periodic"))

    def test_faces_count(self):
        """N points have N + 1 faces"""
        assert weno5_faces(np.ones(10), np.zeros(10)).shape == (11,)

    def test_line_shorter_than_stencil(self):
        """Fewer than five points cannot carry the stencil"""
        with pytest.raises(InputError):
            weno5_upwind_derivative(np.ones(4), 1.0)

    def test_negative_alpha(self):
        """The splitting bound must be non-negative"""
        with pytest.raises(InputError):
            weno5_flux_derivative(np.ones(10), lambda u: u, -1.0)

    def test_unknown_boundary(self):
        """Only extrapolate and periodic closures exist"""
        with pytest.raises(InputError):
            weno5_upwind_derivative(np.ones(10), 1.0, boundary="reflect")


@pytest.mark.unit
class TestFirstOrder:
    """Donor-cell and Lax-Friedrichs faces"""

    def test_upwind_faces_carry_the_donor_value(self):
        """Positive velocity takes the left value, negative the right"""
        values = np.array([1.0, 2.0, 3.0])
        np.testing.assert_array_equal(upwind_faces(np.ones(3), values)[1:3], [1.0, 2.0])
        np.testing.assert_array_equal(upwind_faces(-np.ones(3), values)[1:3], [-2.0, -3.0])

    def test_lax_friedrichs_with_exact_speed_is_upwind(self):
        """alpha equal to a positive speed reduces to donor cell"""
        values = np.array([1.0, 4.0, 2.0, 5.0])
        velocity = 0.5
        lf = lax_friedrichs_faces(velocity * values, values, velocity)
        np.testing.assert_allclose(lf, upwind_faces(np.full(4, velocity), values))

    def test_upwind_derivative_directions(self):
        """Backward differences for wind >= 0, forward otherwise, zero at ghost ends"""
        line = np.array([0.0, 1.0, 4.0, 9.0])
        np.testing.assert_array_equal(upwind_derivative(line, 1.0), [0.0, 1.0, 3.0, 5.0])
        np.testing.assert_array_equal(upwind_derivative(line, -1.0), [1.0, 3.0, 5.0, 0.0])
