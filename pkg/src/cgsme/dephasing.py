"""Pure dephasing of a single two-level system, the benchmark where the
rotating-wave approximation is trivially exact in form.

H_S = omega0 sigma_z / 2 couples to the bath through sigma_z, so populations
never change and the coherence obeys

    rho_eg(t) = exp(-i omega0 t) exp(Gamma(t)) rho_eg(0),

with index 0 the excited and index 1 the ground level.  Three choices of the
exponent are offered: the exact Gamma_exact(t), the coarse-grained
Gamma_CG(t, dt) = (t/dt) Gamma_exact(dt), and the rotating-wave
Gamma_RWA(t) = -gamma_rwa_2l * t.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import quad

from .bath import BathSpec, dephasing_weight
from .errors import ConvergenceError, DomainError

# above this many oscillations of cos(w t) across the support the integral is
# split into a smooth part and a Fourier part handled by QAWF
_DIRECT_OSCILLATIONS = 400
_SUPPORT = 60.0  # in units of omega_c; exp(-60) is far below double precision relative to the total
ATOL = 1e-10


@dataclass(frozen=True)
class TwoLevelSpec:
    omega0: float
    bath: BathSpec = BathSpec()

    def __post_init__(self):
        if not math.isfinite(self.omega0):
            raise DomainError(f"omega0 must be finite, got {self.omega0}")


def _quad(f, a, b, what, **kw):
    val, err = quad(f, a, b, limit=4000, epsabs=ATOL / 10, epsrel=1e-12, **kw)
    if not err <= max(ATOL, 1e-8 * abs(val)):
        raise ConvergenceError(f"{what}: quadrature error {err:.3g} for value {val:.6g}")
    return val


def _weight_integral(bath, t):
    """int_0^inf J(w) coth(beta w/2) (1 - cos w t) / w^2 dw, without the coupling."""
    wmax = _SUPPORT * bath.omega_c
    kink = 1.0 / bath.beta if not bath.zero_temperature else None

    def w(x):
        return dephasing_weight(bath, x, t)

    if wmax * t / (2 * math.pi) <= _DIRECT_OSCILLATIONS:
        pts = [p for p in (kink,) if p is not None and p < wmax]
        return _quad(w, 0.0, wmax, "dephasing integral", points=pts or None)

    # Long times: the 2/(beta w) part of coth has a closed form,
    #   int_0^inf e^{-a w} (1 - cos w t)/w^2 dw = t atan(t/a) - (a/2) ln(1 + t^2/a^2),
    # and the bounded remainder r(w) = coth(beta w/2) - 2/(beta w) (r = 1 at T = 0)
    # is integrated over [0, eps] directly and beyond by splitting 1 - cos into
    # a plain part and a Fourier part (QAWF).
    a = 1.0 / bath.omega_c
    singular = 0.0
    if kink is not None:
        singular = 2 * bath.eta / bath.beta * (t * math.atan(t / a) - 0.5 * a * math.log1p((t / a) ** 2))

    def rem(x):
        if bath.zero_temperature:
            return 1.0
        z = bath.beta * x / 2
        if z < 1e-4:
            return z / 3 - z ** 3 / 45
        return 1.0 / math.tanh(z) - 1.0 / z

    def head_f(x):
        return 0.0 if x == 0 else bath.eta * math.exp(-x / bath.omega_c) * rem(x) * 2 * math.sin(x * t / 2) ** 2 / x

    def smooth(x):
        return bath.eta * math.exp(-x / bath.omega_c) * rem(x) / x

    eps = math.pi / t
    head = _quad(head_f, 0.0, eps, "dephasing integral head")
    pts = [kink] if kink is not None and eps < kink < wmax else None
    plain = _quad(smooth, eps, wmax, "dephasing integral body", points=pts)
    fourier, ferr = quad(smooth, eps, np.inf, weight="cos", wvar=t, limlst=200, epsabs=ATOL / 10)
    if not ferr <= ATOL:
        raise ConvergenceError(f"dephasing Fourier tail: error {ferr:.3g}")
    return singular + head + plain - fourier


def gamma_exact_2l(spec, t):
    """Gamma_exact(t) = -4 g int J coth(beta w/2) (1 - cos w t)/w^2 dw  (<= 0)."""
    if not t >= 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if t == 0:
        return 0.0
    return -4.0 * spec.bath.g * _weight_integral(spec.bath, t)


def gamma_cg_2l(spec, t, dt):
    """Coarse-grained exponent (t/dt) Gamma_exact(dt); linear in t."""
    if not t >= 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    return t / dt * gamma_exact_2l(spec, dt)


def gamma_rwa_2l(spec):
    """Rotating-wave dephasing rate 4 pi g lim_{w->0} J(w)/(1 - exp(-beta w)) = 4 pi g eta / beta.

    Returned as a positive rate; the exponent is -rate * t.
    """
    b = spec.bath
    if b.zero_temperature:
        return 0.0
    return 4 * math.pi * b.g * b.eta / b.beta


def exponent(spec, t, method="exact", dt=None):
    """Gamma(t) for method 'exact', 'cg' (needs dt) or 'rwa'."""
    if method == "exact":
        return gamma_exact_2l(spec, t)
    if method == "cg":
        if dt is None:
            raise DomainError("method 'cg' needs dt")
        return gamma_cg_2l(spec, t, dt)
    if method == "rwa":
        if not t >= 0:
            raise DomainError(f"t must be nonnegative, got {t}")
        return -gamma_rwa_2l(spec) * t
    raise DomainError(f"unknown method {method!r}")


def evolve_dephasing(spec, rho0, t, method="exact", dt=None):
    """Schroedinger-picture state at time t; ``method`` is 'exact', 'rwa', 'cg'
    (with ``dt``) or a tuple ``('cg', dt)``."""
    if isinstance(method, tuple):
        method, dt = method
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (2, 2):
        raise DomainError(f"expected a 2x2 density matrix, got shape {rho0.shape}")
    factor = np.exp(-1j * spec.omega0 * t + exponent(spec, t, method, dt))
    rho = rho0.copy()
    rho[0, 1] = factor * rho0[0, 1]
    rho[1, 0] = np.conj(factor) * rho0[1, 0]
    return rho


def dephasing_table(spec, times, dt, rho12_0=0.5):
    """Rows (t, Gamma_exact, Gamma_CG, Gamma_RWA, |rho_eg| under the exact exponent)."""
    ge_dt = gamma_exact_2l(spec, dt)
    rate = gamma_rwa_2l(spec)
    rows = []
    for t in times:
        t = float(t)
        ge = gamma_exact_2l(spec, t)
        rows.append((t, ge, t / dt * ge_dt, -rate * t, abs(rho12_0) * math.exp(ge)))
    return rows
