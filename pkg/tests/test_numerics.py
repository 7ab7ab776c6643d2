import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lossy_probe.errors import ConvergenceError
from lossy_probe.optimize import golden_section, grid_golden_min
from lossy_probe.quadrature import adaptive_quad


def test_quad_polynomial_exact():
    val, err = adaptive_quad(lambda x: 3 * x**2, [0.0, 2.0])
    assert val == pytest.approx(8.0, rel=1e-14)
    assert err <= 1e-12


def test_quad_sharp_feature_and_vector_output():
    def f(x):
        return np.stack([np.exp(-((x / 1e-3) ** 2)), np.cos(x)])

    val, _ = adaptive_quad(f, [-1.0, 0.0, 1.0], epsabs=1e-15)
    assert val[0] == pytest.approx(math.sqrt(math.pi) * 1e-3, rel=1e-10)
    assert val[1] == pytest.approx(2 * math.sin(1.0), rel=1e-12)


def test_quad_budget_exhaustion_raises():
    with pytest.raises(ConvergenceError):
        adaptive_quad(lambda x: np.sin(1.0 / x), [1e-9, 1.0], epsabs=1e-15, abs_floor=0.0, max_depth=6)


def test_quad_needs_two_breakpoints():
    with pytest.raises(ValueError):
        adaptive_quad(np.sin, [1.0, 1.0])


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(0.1, 10))
def test_golden_section_finds_parabola_vertex(c, w):
    x, fx = golden_section(lambda x: w * (x - c) ** 2, -6, 6, xtol=1e-10)
    assert x == pytest.approx(c, abs=1e-8)
    assert fx <= 1e-15 * max(1, w) + w * 1e-16


def test_grid_golden_log_and_ties():
    x, _ = grid_golden_min(lambda x: (math.log10(x) - 2.3) ** 2, 1e-3, 1e6, log=True)
    assert math.log10(x) == pytest.approx(2.3, abs=1e-7)
    # constant objective: the smallest abscissa wins
    assert grid_golden_min(lambda x: 1.0, 0.0, 1.0)[0] == 0.0
    # non-finite values are ignored
    x, fx = grid_golden_min(lambda x: math.inf if x < 0.5 else (x - 0.7) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.7, abs=1e-6)
