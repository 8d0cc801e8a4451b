import math

import numpy as np
import pytest

from curvelab import _fd, _quadrature
from curvelab.curves import catalog_curve
from curvelab.frenet import arclength, speed
from oracles import composite_simpson


def test_gk15_rules_are_exact_on_polynomials():
    # Kronrod 15 integrates degree <= 22 exactly, Gauss 7 degree <= 13
    x, wk, wg = _quadrature.NODES, _quadrature.KRONROD_WEIGHTS, _quadrature.GAUSS_WEIGHTS
    for deg in range(0, 23):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert wk @ x**deg == pytest.approx(exact, abs=1e-14)
        if deg <= 13:
            assert wg @ x**deg == pytest.approx(exact, abs=1e-14)


def test_adaptive_integration():
    val, err = _quadrature.integrate(np.exp, 0.0, 1.0)
    assert val == pytest.approx(math.e - 1, abs=1e-14)
    val, _ = _quadrature.integrate(np.sqrt, 0.0, 1.0, abs_tol=1e-10)
    assert val == pytest.approx(2 / 3, abs=1e-10)
    val, _ = _quadrature.integrate(np.cos, 1.0, 0.0)
    assert val == pytest.approx(-math.sin(1.0), abs=1e-14)


def test_twisted_cubic_arclength_against_simpson():
    curve = catalog_curve("twisted_cubic")
    ref = composite_simpson(lambda t: np.sqrt(1 + 4 * t**2 + 9 * t**4), -1.0, 1.0, 1_000_000)
    assert arclength(curve, -1.0, 1.0) == pytest.approx(ref, abs=1e-8)
    np.testing.assert_allclose(speed(curve, np.array([0.5])), [math.sqrt(1 + 1 + 9 / 16)], rtol=1e-15)


def test_fornberg_reproduces_classical_stencils():
    nodes = np.array([[-2.0, -1.0, 0.0, 1.0, 2.0]])
    w = _fd.fornberg_weights(np.array([0.0]), nodes, 2)
    np.testing.assert_allclose(w[0, 0], [0, 0, 1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(w[1, 0], np.array([1, -8, 0, 8, -1]) / 12, atol=1e-15)
    np.testing.assert_allclose(w[2, 0], np.array([-1, 16, -30, 16, -1]) / 12, atol=1e-14)


def test_derivative_on_grid_with_one_sided_ends():
    x = np.linspace(0.0, 1.0, 41)
    d = _fd.derivative_on_grid(x, np.sin(3 * x), 1, width=7)
    np.testing.assert_allclose(d, 3 * np.cos(3 * x), atol=1e-6)
    vec = np.stack([x**2, x**3, x], axis=-1)
    np.testing.assert_allclose(_fd.derivative_on_grid(x, vec, 1), np.stack([2 * x, 3 * x**2, np.ones_like(x)], -1),
                               atol=1e-12)
