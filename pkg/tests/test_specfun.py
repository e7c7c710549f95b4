import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cgsme.errors import DomainError
from cgsme.specfun import expint_ei, expint_ei_array
from oracles import ei_integral, ei_mpmath

# points along the arguments the rate formulas use (x + i w t), plus both
# half planes, the branch cut and the series/continued-fraction seams
POINTS = [
    0.1, 1.0, 5.0, 20.0, 100.0, 699.0,
    0.1 + 6.37j, 0.05 + 1000j, 0.4 + 4000j, 0.1 - 6.37j, 0.25 + 0.5j,
    3.99 + 0.01j, 4.01 + 0.01j, 10 + 10j, 49 + 5j, 52 + 30j,
    -1.0, -10.0, -0.5 + 2j, -0.5 - 2j, 3 - 40j, -30 + 1j, -30 - 1e-3j, -5 + 5j,
    1e-8, 1e-8j, -1e-8,
]


@pytest.mark.parametrize("z", POINTS)
def test_matches_mpmath(z):
    got, ref = expint_ei(z), ei_mpmath(z)
    assert abs(got - ref) <= 2e-14 * max(abs(ref), 1.0)


@pytest.mark.parametrize("z", [0.1 + 6.37j, 2 - 15j, -3.0, 0.5, -2 + 0.3j, 7 + 1j])
def test_matches_integral_representation(z):
    assert abs(expint_ei(z) - ei_integral(z)) < 1e-12 * max(abs(ei_integral(z)), 1.0)


def test_real_axis_values():
    assert expint_ei(1.0) == pytest.approx(1.8951178163559368, rel=1e-15)
    assert expint_ei(1.0).imag == 0.0
    v = expint_ei(-1.0)
    assert v.real == pytest.approx(-0.21938393439552029, rel=1e-14)
    assert v.imag == pytest.approx(math.pi)


def test_negative_zero_imaginary_part_uses_upper_lip():
    assert expint_ei(complex(-2.0, -0.0)).imag == pytest.approx(math.pi)


def test_errors():
    with pytest.raises(DomainError):
        expint_ei(0)
    with pytest.raises(OverflowError):
        expint_ei(701.0)
    with pytest.raises(DomainError):
        expint_ei(complex(math.nan, 1.0))


def test_array_wrapper():
    z = np.array([0.5, 0.1 + 3j, -2 + 1j])
    out = expint_ei_array(z)
    assert out.shape == z.shape
    assert np.allclose(out, [expint_ei(x) for x in z], rtol=0, atol=0)


finite = st.floats(min_value=-60, max_value=60, allow_nan=False)


@settings(max_examples=150, deadline=None)
@given(finite, st.floats(min_value=1e-6, max_value=200))
def test_conjugate_symmetry(x, y):
    z = complex(x, y)
    a, b = expint_ei(z), expint_ei(z.conjugate())
    assert abs(a.conjugate() - b) <= 1e-14 * max(abs(a), 1.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-40, max_value=40), st.floats(min_value=0.05, max_value=100))
def test_derivative_is_exp_over_z(x, y):
    z = complex(x, y)
    h = 1e-5 * max(abs(z), 1.0)
    fd = (expint_ei(z + h) - expint_ei(z - h)) / (2 * h)
    exact = cmath.exp(z) / z
    scale = max(abs(exact), abs(expint_ei(z)) / max(abs(z), 1.0), 1e-300)
    assert abs(fd - exact) <= 1e-6 * scale
