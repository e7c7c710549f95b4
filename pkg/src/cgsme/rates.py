"""Coarse-graining rate and Lamb-shift tensors for the Ohmic T = 0 bath.

For a coarse-graining window ``t`` the dissipative coefficients are

    b_{w w'}(t) = int_0^t ds int_0^t ds' exp(i(w' s - w s')) B(s - s')

and the Lamb-shift coefficients

    S_{w w'}(t) = -i/2 int_0^t ds int_0^s ds' [exp(i(w' s - w s')) B(s - s')
                                             - exp(-i(w s - w' s')) B(s' - s)]

with ``B(u) = eta / (1/omega_c + i u)^2``.  Closed forms are written through
the principal-value transforms

    I1(w)    = PV int_0^inf J(v) / (w - v) dv
    I2(w, t) = PV int_0^inf J(v) exp(i v t) / (w - v) dv

and the diagonal entries through Ei at ``w/omega_c +- i w t``.  The
``*_quadrature_oracle`` functions integrate the defining double integrals
numerically (reduced to one dimension in ``u = s - s'``) and are kept
independent of the closed forms.
"""
from dataclasses import dataclass, field
import cmath
import math

import numpy as np
from scipy.integrate import quad

from .bath import corr_zero_t, pv_transform
from .errors import ConvergenceError, DegenerateFrequencies, DomainError
from .specfun import expint_ei

DEGEN_RTOL = 1e-6
# separation used to measure the antisymmetric slope for near-degenerate pairs
_SLOPE_RSEP = 1e-3


def i1(spec, omega):
    """I1(w) = -eta*omega_c + eta*w*exp(-w/omega_c)*Ei(w/omega_c)."""
    return pv_transform(spec, omega)


def i2(spec, omega, t):
    """I2(w, t) = -eta*omega_c/(1 - i omega_c t) + eta*w*exp(-w a)*Ei(w a), a = 1/omega_c - i t."""
    if not omega > 0:
        raise DomainError(f"I2 needs omega > 0, got {omega}")
    a = 1.0 / spec.omega_c - 1j * t
    return (-spec.eta * spec.omega_c / (1 - 1j * spec.omega_c * t)
            + spec.eta * omega * cmath.exp(-omega * a) * expint_ei(omega * a))


def _check_pair(omega, omega_p):
    if not (omega > 0 and omega_p > 0):
        raise DomainError(f"frequencies must be positive, got {omega}, {omega_p}")
    if abs(omega_p - omega) <= DEGEN_RTOL * max(omega, omega_p):
        raise DegenerateFrequencies(f"|{omega} - {omega_p}| below degeneracy threshold")


def b_offdiag(spec, omega, omega_p, t):
    """b_{w w'}(t) for w != w' (no coupling prefactor)."""
    _check_pair(omega, omega_p)
    d1 = i1(spec, omega) - i1(spec, omega_p)
    i2w, i2p = i2(spec, omega, t), i2(spec, omega_p, t)
    num = ((1 + cmath.exp(1j * (omega_p - omega) * t)) * d1
           + cmath.exp(1j * omega_p * t) * (i2p.conjugate() - i2w.conjugate())
           + cmath.exp(-1j * omega * t) * (i2p - i2w))
    return num / (omega_p - omega)


def s_offdiag(spec, omega, omega_p, t):
    """S_{w w'}(t) for w != w' (no coupling prefactor)."""
    _check_pair(omega, omega_p)
    d = omega_p - omega
    s1 = i1(spec, omega) + i1(spec, omega_p)
    i2w, i2p = i2(spec, omega, t), i2(spec, omega_p, t)
    num = ((1 - cmath.exp(1j * d * t)) * s1
           + cmath.exp(1j * omega_p * t) * (i2w.conjugate() - i2p.conjugate())
           + cmath.exp(-1j * omega * t) * (i2p - i2w))
    return 1j * num / (2 * d)


def b_diag(spec, omega, t):
    """b_{w w}(t) = 2 int_{-w}^inf J(v + w) (1 - cos v t) / v^2 dv.

    Closed form:
    2 eta e^{-x} [(1 - x)(Re Ei(x + i w t) - Ei(x)) + w t Im Ei(x + i w t)] - 2 eta (1 - cos w t)
    with x = w / omega_c.
    """
    if not omega > 0:
        raise DomainError(f"b_diag needs omega > 0, got {omega}")
    if t == 0:
        return 0.0
    x = omega / spec.omega_c
    ep = expint_ei(complex(x, omega * t))
    e0 = expint_ei(x).real
    val = (2 * spec.eta * math.exp(-x) * ((1 - x) * (ep.real - e0) + omega * t * ep.imag)
           - 2 * spec.eta * (1 - math.cos(omega * t)))
    return val


def i3(spec, omega, t):
    """I3(w, t) = PV int_0^inf J(v) sin((v - w) t) / (v - w)^2 dv.

    Equals eta e^{-x} [(1 - x) Im Ei(x + i w t) - w t Re Ei(x + i w t)] + eta sin(w t).
    """
    x = omega / spec.omega_c
    ep = expint_ei(complex(x, omega * t))
    return spec.eta * math.exp(-x) * ((1 - x) * ep.imag - omega * t * ep.real) + spec.eta * math.sin(omega * t)


def s_diag(spec, omega, t):
    """S_{w w}(t) = t I1(w) + I3(w, t); real."""
    if not omega > 0:
        raise DomainError(f"s_diag needs omega > 0, got {omega}")
    if t == 0:
        return 0.0
    return t * i1(spec, omega) + i3(spec, omega, t)


# The printed diagonal closed forms differ from the defining integrals: the
# cosine term of b_ww enters with the opposite sign, and S_ww uses -t I1 with a
# different I3.  They are kept, opt-in only, because the published optimal
# windows were evidently computed with them.
def b_diag_published(spec, omega, t):
    """Printed variant of b_ww: b_diag + 4 eta (1 - cos w t)."""
    return b_diag(spec, omega, t) + 4 * spec.eta * (1 - math.cos(omega * t))


def s_diag_published(spec, omega, t):
    """Printed variant of S_ww: -t I1 + I3', with I3' in its printed form."""
    if not omega > 0:
        raise DomainError(f"s_diag needs omega > 0, got {omega}")
    if t == 0:
        return 0.0
    x = omega / spec.omega_c
    ep = expint_ei(complex(x, omega * t))
    em = ep.conjugate()
    i3p = (spec.eta * math.exp(-x) / 2j * ((1 - 2 * x + 2j * omega * t) * ep
                                         - (1 - 2 * x - 2j * omega * t) * em)
           + spec.eta * math.sin(omega * t))
    return -t * i1(spec, omega) + i3p.real


FORMS = ("exact", "published")


def _diagonals(forms):
    if forms == "exact":
        return b_diag, s_diag
    if forms == "published":
        return b_diag_published, s_diag_published
    raise DomainError(f"forms must be one of {FORMS}, got {forms!r}")


def _near_diag(diag, offdiag, spec, omega, omega_p, t):
    # Hermitian in (w, w'): the first-order term in w' - w is purely imaginary,
    # i*(w' - w)*d Im/d w'; the slope is taken from the closed form at a safe separation.
    c = 0.5 * (omega + omega_p)
    h = _SLOPE_RSEP * c
    slope = offdiag(spec, c - h / 2, c + h / 2, t).imag / h
    return diag(spec, c, t) + 1j * (omega_p - omega) * slope


def b_element(spec, omega, omega_p, t, forms="exact"):
    """b_{w w'}(t) for any positive pair, routing around the w = w' singularity."""
    diag = _diagonals(forms)[0]
    if omega == omega_p:
        return complex(diag(spec, omega, t))
    if abs(omega_p - omega) <= DEGEN_RTOL * max(omega, omega_p):
        return _near_diag(diag, b_offdiag, spec, omega, omega_p, t)
    return b_offdiag(spec, omega, omega_p, t)


def s_element(spec, omega, omega_p, t, forms="exact"):
    """S_{w w'}(t) for any positive pair."""
    diag = _diagonals(forms)[1]
    if omega == omega_p:
        return complex(diag(spec, omega, t))
    if abs(omega_p - omega) <= DEGEN_RTOL * max(omega, omega_p):
        return _near_diag(diag, s_offdiag, spec, omega, omega_p, t)
    return s_offdiag(spec, omega, omega_p, t)


@dataclass(frozen=True)
class RateTensor:
    """Coarse-grained rates ``gamma[j, k] = g b_{w_j w_k}(dt) / dt`` and
    Lamb shifts ``lamb[j, k] = g S_{w_j w_k}(dt) / dt`` for the two
    transition frequencies."""

    gamma: np.ndarray
    lamb: np.ndarray
    dt: float
    frequencies: tuple = field(default=(None, None))

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(self.gamma).min())


def rate_tensor(spec, sys, dt, forms="exact"):
    """Rates and Lamb shifts for window dt.  ``forms="published"`` swaps in the
    printed diagonal closed forms (see :func:`b_diag_published`)."""
    if not dt > 0:
        raise DomainError(f"coarse-graining time must be positive, got {dt}")
    freqs = (sys.omega1, sys.omega2)
    gam = np.empty((2, 2), dtype=complex)
    lam = np.empty((2, 2), dtype=complex)
    for j in range(2):
        for k in range(j, 2):
            b = b_element(spec, freqs[j], freqs[k], dt, forms)
            s = s_element(spec, freqs[j], freqs[k], dt, forms)
            gam[j, k], lam[j, k] = b, s
            gam[k, j], lam[k, j] = np.conj(b), np.conj(s)
    gam[0, 0], gam[1, 1] = gam[0, 0].real, gam[1, 1].real
    lam[0, 0], lam[1, 1] = lam[0, 0].real, lam[1, 1].real
    scale = spec.g / dt
    return RateTensor(gamma=scale * gam, lamb=scale * lam, dt=dt, frequencies=freqs)


# --- quadrature oracles -------------------------------------------------

def _phase_integral(d, a, b):
    """int_a^b exp(i d s) ds, stable for d -> 0."""
    length = b - a
    return np.exp(0.5j * d * (a + b)) * length * np.sinc(d * length / (2 * np.pi))


def _cquad(f, a, b, rtol):
    if a == b:
        return 0j
    kw = dict(limit=4000, epsabs=0.0, epsrel=rtol)
    re, ere = quad(lambda x: f(x).real, a, b, **kw)
    im, eim = quad(lambda x: f(x).imag, a, b, **kw)
    return complex(re, im), math.hypot(ere, eim)


def _finish(parts, rtol, what):
    val = sum(p[0] for p in parts)
    err = sum(p[1] for p in parts)
    if err > max(100 * rtol * abs(val), 1e-300):
        raise ConvergenceError(f"{what}: quadrature error {err:.2e} on value {abs(val):.2e}")
    return val


def b_quadrature_oracle(spec, omega, omega_p, t, rtol=1e-12):
    """Direct quadrature of b_{w w'}(t); the s' integral at fixed u = s - s' is exact."""
    if t < 0:
        raise DomainError("t must be nonnegative")
    if t == 0:
        return 0j
    d = omega_p - omega

    def pos(u):  # u in [0, t]: s' in [0, t - u]
        return corr_zero_t(spec, u) * cmath.exp(1j * omega_p * u) * _phase_integral(d, 0.0, t - u)

    def neg(u):  # u in [-t, 0]: s' in [-u, t]
        return corr_zero_t(spec, u) * cmath.exp(1j * omega_p * u) * _phase_integral(d, -u, t)

    return _finish([_cquad(pos, 0.0, t, rtol), _cquad(neg, -t, 0.0, rtol)], rtol, "b oracle")


def onesided_quadrature_oracle(spec, omega, omega_p, t, rtol=1e-12):
    """Time-ordered integral int_0^t ds int_0^s ds' exp(i(w' s - w s')) B(s - s')."""
    if t == 0:
        return 0j
    d = omega_p - omega

    def f(u):
        return corr_zero_t(spec, u) * cmath.exp(1j * omega_p * u) * _phase_integral(d, 0.0, t - u)

    return _finish([_cquad(f, 0.0, t, rtol)], rtol, "one-sided oracle")


def s_quadrature_oracle(spec, omega, omega_p, t, rtol=1e-12):
    """Direct quadrature of the Lamb-shift coefficient S_{w w'}(t)."""
    if t == 0:
        return 0j
    d = omega_p - omega

    def f(u):
        bu = corr_zero_t(spec, u)
        return ((cmath.exp(1j * omega_p * u) * bu - cmath.exp(-1j * omega * u) * bu.conjugate())
                * _phase_integral(d, 0.0, t - u))

    return -0.5j * _finish([_cquad(f, 0.0, t, rtol)], rtol, "Lamb-shift oracle")


def rate_scan(spec, sys, dts, forms="exact"):
    """Rate tensors over a sequence of coarse-graining times."""
    return [rate_tensor(spec, sys, float(dt), forms) for dt in dts]
