import math

import numpy as np
import pytest
from scipy.integrate import quad

from thedra import errors
from thedra.functions import (
    from_callable,
    from_registry,
    integral_function,
    polynomial,
    sampled,
    trig,
)
from thedra.quadrature import adaptive_simpson, cumulative


class TestAdaptiveSimpson:
    def test_polynomial_exact(self):
        assert adaptive_simpson(lambda x: 3 * x**2, 0.0, 2.0) == pytest.approx(8.0, abs=1e-12)

    def test_matches_library_quadrature(self):
        # cross-check against an independent integrator
        cases = [
            (lambda x: math.exp(-x) * math.sin(5 * x), 0.0, 3.0),
            (lambda x: 1.0 / (1.0 + x * x), -2.0, 5.0),
            (lambda x: math.sqrt(1.0 + 4.0 * x * x), 0.0, 1.0),
        ]
        for f, a, b in cases:
            expected, _ = quad(f, a, b, epsabs=1e-13, epsrel=1e-13)
            assert adaptive_simpson(f, a, b, tol=1e-11) == pytest.approx(expected, abs=1e-10)

    def test_sqrt_endpoint_substitution(self):
        val = adaptive_simpson(lambda x: math.sqrt(x), 0.0, 1.0, tol=1e-12, singular_left=True)
        assert val == pytest.approx(2.0 / 3.0, abs=1e-12)
        val = adaptive_simpson(
            lambda x: math.sqrt(1.0 - x), 0.0, 1.0, tol=1e-12, singular_right=True
        )
        assert val == pytest.approx(2.0 / 3.0, abs=1e-12)
        # both ends: a half-circle area
        val = adaptive_simpson(
            lambda x: math.sqrt(max(1.0 - x * x, 0.0)), -1.0, 1.0, tol=1e-12,
            singular_left=True, singular_right=True,
        )
        assert val == pytest.approx(math.pi / 2.0, abs=1e-10)

    def test_reversed_bounds(self):
        assert adaptive_simpson(lambda x: x, 1.0, 0.0) == pytest.approx(-0.5, abs=1e-13)

    def test_cumulative_grid(self):
        grid = np.linspace(0.0, 2.0, 9)
        vals = cumulative(lambda x: 2.0 * x, grid)
        assert np.allclose(vals, grid**2, atol=1e-12)


class TestScalarFunction:
    def test_polynomial_values_and_derivative(self):
        p = polynomial([1.0, 0.0, 3.0], (0.0, 2.0))
        assert p(1.0) == pytest.approx(4.0)
        assert p.derivative(1.0) == pytest.approx(6.0)

    def test_trig(self):
        s = trig((0.0, 2.0), amplitude=2.0, frequency=3.0, phase=0.5, kind="sin")
        assert s(1.0) == pytest.approx(2.0 * math.sin(3.5))
        assert s.derivative(1.0) == pytest.approx(6.0 * math.cos(3.5))

    def test_out_of_domain(self):
        p = polynomial([0.0, 1.0], (0.0, 1.0))
        with pytest.raises(errors.OutOfDomain):
            p(1.5)

    def test_sampled_interpolation_accuracy(self):
        xs = np.linspace(0.0, 1.0, 64)
        f = sampled(np.sin(2.0 * xs), (0.0, 1.0))
        probe = np.linspace(0.0, 1.0, 201)
        err = max(abs(f(x) - math.sin(2.0 * x)) for x in probe)
        assert err < 1e-6
        derr = max(abs(f.derivative(x) - 2.0 * math.cos(2.0 * x)) for x in probe)
        assert derr < 1e-4

    def test_sampled_needs_enough_points(self):
        with pytest.raises(errors.SchemaViolation):
            sampled([0.0, 1.0], (0.0, 1.0))

    def test_finite_difference_derivative(self):
        f = from_callable(lambda u: np.exp(0.7 * u) * np.sin(u), (0.0, 2.0))
        for x in (0.0, 0.001, 0.5, 1.0, 1.999, 2.0):
            exact = 0.7 * math.exp(0.7 * x) * math.sin(x) + math.exp(0.7 * x) * math.cos(x)
            assert f.derivative(x) == pytest.approx(exact, abs=1e-9)

    def test_registry_round_trip(self):
        p = polynomial([0.5, -1.0, 2.0], (0.0, 3.0))
        q = from_registry(p.to_registry())
        assert q(1.7) == pytest.approx(p(1.7), rel=1e-15)
        s = trig((0.0, 1.0), amplitude=1.5, frequency=2.0, phase=0.1, offset=-0.3, kind="cos")
        s2 = from_registry(s.to_registry())
        assert s2(0.4) == pytest.approx(s(0.4), rel=1e-15)

    def test_unknown_registry_entry(self):
        with pytest.raises(errors.SchemaViolation):
            from_registry({"name": "bessel", "params": {}, "domain": [0, 1]})


class TestIntegralFunction:
    def test_antiderivative_values(self):
        F = integral_function(lambda x: np.cos(x), (0.0, 3.0))
        for x in (0.0, 0.5, 1.5, 3.0):
            assert F(x) == pytest.approx(math.sin(x), abs=1e-10)
        assert F.derivative(1.0) == pytest.approx(math.cos(1.0), rel=1e-12)

    def test_anchor_and_vector_eval(self):
        F = integral_function(lambda x: 2.0 * x, (0.0, 2.0), value_at_base=5.0)
        xs = np.array([1.5, 0.5, 2.0, 0.5])
        assert np.allclose(F(xs), 5.0 + xs**2, atol=1e-10)

    def test_split_points_handle_kinks(self):
        # |x - 1| has a kink; splitting keeps the quadrature sharp
        F = integral_function(
            lambda x: abs(x - 1.0), (0.0, 2.0), singular_points=(1.0,)
        )
        assert F(2.0) == pytest.approx(1.0, abs=1e-10)
        assert F(1.0) == pytest.approx(0.5, abs=1e-10)
