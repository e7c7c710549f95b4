"""Ohmic bath: spectral density, zero-temperature correlation function and
the golden-rule quantities built from it.

Every bath integral carries one overall coupling prefactor ``g``; the
spectral density itself is ``J(w) = eta * w * exp(-w / omega_c)`` for
``w >= 0`` and zero below.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .specfun import expint_ei


@dataclass(frozen=True)
class BathSpec:
    """Ohmic bath parameters.

    ``eta`` has units of time squared and defaults to ``omega_c**-2``.
    ``beta = math.inf`` means zero temperature.
    """

    omega_c: float = 1.0
    g: float = 0.001
    eta: float = None
    beta: float = math.inf

    def __post_init__(self):
        if not self.omega_c > 0:
            raise DomainError(f"omega_c must be positive, got {self.omega_c}")
        if self.eta is None:
            object.__setattr__(self, "eta", self.omega_c ** -2)
        if not self.eta > 0:
            raise DomainError(f"eta must be positive, got {self.eta}")
        if not self.g >= 0:
            raise DomainError(f"g must be nonnegative, got {self.g}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive or inf, got {self.beta}")

    @property
    def zero_temperature(self):
        return math.isinf(self.beta)


def spectral_density(spec, omega):
    """J(w); scalar in, float out, array in, array out."""
    w = np.asarray(omega, dtype=float)
    out = np.where(w > 0, spec.eta * w * np.exp(-np.maximum(w, 0.0) / spec.omega_c), 0.0)
    return float(out) if out.ndim == 0 else out


def corr_zero_t(spec, t):
    """B(t, 0) = int_0^inf J(w) exp(-i w t) dw = eta / (1/omega_c + i t)^2."""
    t = np.asarray(t, dtype=float)
    out = spec.eta / (1.0 / spec.omega_c + 1j * t) ** 2
    return complex(out) if out.ndim == 0 else out


def exact_kernel(spec, omega_j, t):
    """Memory kernel f_j(t) = g exp(i omega_j t) B(t, 0) of the amplitude equations."""
    t = np.asarray(t, dtype=float)
    out = spec.g * np.exp(1j * omega_j * t) * corr_zero_t(spec, t)
    return complex(out) if out.ndim == 0 else out


def gamma_rwa(spec, omega):
    """Golden-rule decay rate 2 pi g J(w) (zero for w <= 0 at T = 0)."""
    return 2 * math.pi * spec.g * spectral_density(spec, omega)


def pv_transform(spec, omega):
    """PV int_0^inf J(v) / (w - v) dv for the Ohmic density, w > 0.

    Equal to ``-eta*omega_c + J(w) Ei(w/omega_c)``.
    """
    if not omega > 0:
        raise DomainError(f"principal-value transform needs omega > 0, got {omega}")
    x = omega / spec.omega_c
    return -spec.eta * spec.omega_c + spectral_density(spec, omega) * expint_ei(x).real


def lamb_rwa(spec, omega):
    """Lamb shift S(w) of the rotating-wave generator, scaled by g.

    This is the imaginary part of the one-sided transform
    ``int_0^inf B(t,0) exp(i w t) dt``; the constant term carries
    ``-eta*omega_c``.
    """
    return spec.g * pv_transform(spec, omega)


def dephasing_weight(spec, omega, t):
    """Integrand J(w) coth(beta w / 2) (1 - cos w t) / w^2 of the dephasing exponent.

    Written as ``eta e^{-w/wc} coth(beta w/2) 2 sin^2(w t/2) / w`` so nothing
    cancels; the w -> 0 limit is ``eta t^2 / beta`` (0 at T = 0).
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.zeros_like(w)
    pos = w > 0
    wp = w[pos]
    base = spec.eta * np.exp(-wp / spec.omega_c) * 2 * np.sin(wp * t / 2) ** 2 / wp
    if spec.zero_temperature:
        out[pos] = base
    else:
        out[pos] = base / np.tanh(spec.beta * wp / 2)
        out[w == 0] = spec.eta * t * t / spec.beta
    return float(out[0]) if np.ndim(omega) == 0 else out
