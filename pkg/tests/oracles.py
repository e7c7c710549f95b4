"""Reference values computed independently of the closed forms in the package."""
import cmath
import math

import mpmath
import numpy as np
from scipy.integrate import dblquad, quad

mpmath.mp.dps = 30


def ei_mpmath(z):
    """mpmath Ei with this package's branch choice (upper lip on the negative real axis)."""
    z = complex(z)
    val = complex(mpmath.ei(mpmath.mpc(z.real, z.imag)))
    if z.imag == 0 and z.real < 0:
        val = complex(val.real, math.pi)
    return val


def ei_integral(z):
    """Ei(z) = gamma + log z + int_0^1 (exp(z s) - 1)/s ds, by quadrature."""
    z = complex(z)

    def f(s, part):
        w = z * s
        if abs(w) < 1e-3:
            v = z * (1 + w / 2 + w * w / 6 + w ** 3 / 24)
        else:
            v = (cmath.exp(w) - 1) / s
        return v.real if part == 0 else v.imag

    kw = dict(limit=2000, epsabs=0, epsrel=1e-13)
    re = quad(f, 0, 1, args=(0,), **kw)[0]
    im = quad(f, 0, 1, args=(1,), **kw)[0]
    log = cmath.log(z)
    if z.imag == 0 and z.real < 0:
        log = complex(log.real, math.pi)
    return 0.57721566490153286061 + log + complex(re, im)


def ohmic(nu, eta=1.0, omega_c=1.0):
    return eta * nu * math.exp(-nu / omega_c)


def pv_transform(omega, t=0.0, eta=1.0, omega_c=1.0, upper=60.0):
    """PV int_0^inf J(v) exp(i v t)/(omega - v) dv via Cauchy-weighted quadrature."""
    out = []
    for part in (math.cos, math.sin):
        g = lambda v: -ohmic(v, eta, omega_c) * part(v * t)  # noqa: E731  (1/(w - v) = -1/(v - w))
        near = quad(g, 0.0, 2 * omega, weight="cauchy", wvar=omega, limit=500, epsabs=1e-14)[0]
        far = quad(lambda v: g(v) / (v - omega), 2 * omega, upper * omega_c, limit=20000,
                   epsabs=1e-14, epsrel=1e-12)[0]
        out.append(near + far)
    return complex(out[0], out[1])


def corr(u, eta=1.0, omega_c=1.0):
    return eta / (1.0 / omega_c + 1j * u) ** 2


def b_double(omega, omega_p, t, eta=1.0, omega_c=1.0):
    """Defining double integral of b_{w w'}(t) with scipy's 2-D adaptive quadrature."""
    def f(sp, s, part):
        v = cmath.exp(1j * (omega_p * s - omega * sp)) * corr(s - sp, eta, omega_c)
        return v.real if part == 0 else v.imag
    kw = dict(epsabs=1e-13, epsrel=1e-11)
    re = dblquad(f, 0, t, 0, t, args=(0,), **kw)[0]
    im = dblquad(f, 0, t, 0, t, args=(1,), **kw)[0]
    return complex(re, im)


def s_double(omega, omega_p, t, eta=1.0, omega_c=1.0):
    """Defining double integral of S_{w w'}(t) over the triangle s' < s."""
    def f(sp, s, part):
        v = (cmath.exp(1j * (omega_p * s - omega * sp)) * corr(s - sp, eta, omega_c)
             - cmath.exp(-1j * (omega * s - omega_p * sp)) * corr(sp - s, eta, omega_c))
        return v.real if part == 0 else v.imag
    kw = dict(epsabs=1e-13, epsrel=1e-11)
    re = dblquad(f, 0, t, 0, lambda s: s, args=(0,), **kw)[0]
    im = dblquad(f, 0, t, 0, lambda s: s, args=(1,), **kw)[0]
    return -0.5j * complex(re, im)


def dephasing_zero_t(t, g=1.0, eta=1.0, omega_c=1.0):
    """Gamma_exact at T = 0: -4 g eta int_0^inf e^{-w/wc}(1 - cos w t)/w dw = -2 g eta ln(1 + wc^2 t^2)."""
    return -2.0 * g * eta * math.log1p((omega_c * t) ** 2)


def dephasing_mpmath(t, g=1.0, eta=1.0, omega_c=1.0, beta=math.inf):
    """Gamma_exact by mpmath's tanh-sinh quadrature (a different node family from QUADPACK)."""
    def w(x):
        if x == 0:
            return mpmath.mpf(0) if math.isinf(beta) else eta * t * t / beta
        c = 1 if math.isinf(beta) else mpmath.coth(beta * x / 2)
        return eta * mpmath.exp(-x / omega_c) * c * 2 * mpmath.sin(x * t / 2) ** 2 / x
    period = 2 * mpmath.pi / t
    pts = [0] + [period * k for k in range(1, int(60 * omega_c / period) + 1)] + [mpmath.inf]
    return float(-4 * g * mpmath.quad(w, pts))


def rwa_populations(gamma1, times):
    """Closed-form RWA solution from |1><1|: rho11 = exp(-gamma1 t), rho00 = 1 - rho11."""
    times = np.asarray(times)
    return 1 - np.exp(-gamma1 * times), np.exp(-gamma1 * times)
