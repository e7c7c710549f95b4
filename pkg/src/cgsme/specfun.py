"""Exponential integral Ei(z) for complex arguments.

Ei(z) = -PV int_{-z}^inf exp(-t)/t dt, with the branch cut on the negative
real axis.  On the cut the value approached from above is returned, so the
real part is the principal value and the imaginary part is +pi.

Two evaluation routes are used:

* the ascending series ``gamma + log z + sum z^k / (k k!)`` for small ``|z|``
  and in a sector around the positive real axis, where the terms do not
  cancel;
* a continued fraction for ``E1(-z)`` everywhere else, combined through
  ``Ei(z) = -E1(-z) + i*pi*sign(Im z)``.
"""
import cmath
import math

import numpy as np

from .errors import ConvergenceError, DomainError

EULER_GAMMA = 0.57721566490153286061

_SERIES_RADIUS = 4.0
_SECTOR_RADIUS = 50.0
_SECTOR_ANGLE = 0.4
_MAX_TERMS = 6000
_OVERFLOW_RE = 700.0
_TINY = 1e-300


def _series(z):
    total = 0j
    term = 1 + 0j
    for k in range(1, _MAX_TERMS):
        term *= z / k
        contrib = term / k
        total += contrib
        if abs(contrib) <= 1e-17 * abs(total):
            return EULER_GAMMA + cmath.log(z) + total
    raise ConvergenceError(f"Ei series did not converge at z={z!r}")


def _e1_contfrac(w):
    # E1(w) = exp(-w) / (w+1 - 1^2/(w+3 - 2^2/(w+5 - ...))), modified Lentz
    f = w + 1
    if f == 0:
        f = _TINY
    c = f
    d = 0j
    for n in range(1, _MAX_TERMS):
        a = -float(n * n)
        b = w + (2 * n + 1)
        d = b + a * d
        if d == 0:
            d = _TINY
        d = 1 / d
        c = b + a / c
        if c == 0:
            c = _TINY
        delta = c * d
        f *= delta
        if abs(delta - 1) < 1e-16:
            return cmath.exp(-w) / f
    raise ConvergenceError(f"E1 continued fraction did not converge at w={w!r}")


def expint_ei(z):
    """Exponential integral Ei of a (complex) scalar.

    Real positive input gives a real-valued complex result.  Raises
    DomainError at ``z == 0`` and OverflowError when ``Re z > 700``.
    """
    z = complex(z)
    if z.imag == 0:
        z = complex(z.real, 0.0)  # -0.0 would select the lower lip of the cut
    if z == 0:
        raise DomainError("Ei has a logarithmic singularity at z = 0")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    if z.real > _OVERFLOW_RE:
        raise OverflowError(f"Ei({z}) exceeds double range")

    r = abs(z)
    if r <= _SERIES_RADIUS or (r <= _SECTOR_RADIUS and abs(cmath.phase(z)) < _SECTOR_ANGLE):
        val = _series(z)
    else:
        if z.imag > 0 or (z.imag == 0 and z.real < 0):
            jump = math.pi
        elif z.imag < 0:
            jump = -math.pi
        else:
            jump = 0.0
        val = -_e1_contfrac(-z) + 1j * jump
    if z.imag == 0 and z.real > 0:
        val = complex(val.real, 0.0)
    return val


_expint_ei_vec = np.vectorize(expint_ei, otypes=[complex])


def expint_ei_array(z):
    """Elementwise :func:`expint_ei` over an array."""
    return _expint_ei_vec(np.asarray(z, dtype=complex))
