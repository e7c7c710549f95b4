"""Exact zero-temperature dynamics of the V-type three-level atom.

In the single-excitation sector the bath modes can be integrated out,
leaving two Volterra integro-differential equations for the
interaction-picture amplitudes c1, c2:

    dc_j/dt = -exp(i w_j t) int_0^t f(t - tau) sigma(tau) dtau,
    sigma(tau) = exp(-i w1 tau) c1(tau) + exp(-i w2 tau) c2(tau),

with f(u) = g B(u, 0).  Pulling the phases onto sigma turns the four
kernel convolutions f_j * c_k into a single scalar one.  Integration is
fixed-step RK4; the convolution is a quadrature over the stored history.
"""
from dataclasses import dataclass
import math

import numpy as np

from .bath import exact_kernel
from .errors import DomainError, NonUnitaryError, StepSizeError

SCHEMES = ("trapezoid", "riemann")


@dataclass(frozen=True)
class VSystemSpec:
    """Transition frequencies of the two excited levels (ground energy 0)."""

    omega1: float
    omega2: float

    def __post_init__(self):
        if not (self.omega1 > 0 and self.omega2 > 0):
            raise DomainError(f"transition frequencies must be positive: {self.omega1}, {self.omega2}")

    @classmethod
    def from_mean_split(cls, mean, split):
        """Build from the mean frequency and the splitting w2 - w1."""
        return cls(mean - split / 2, mean + split / 2)

    @property
    def mean(self):
        return 0.5 * (self.omega1 + self.omega2)

    @property
    def splitting(self):
        return self.omega2 - self.omega1


@dataclass(frozen=True)
class AmplitudeState:
    c0: complex = 0j
    c1: complex = 1 + 0j
    c2: complex = 0j

    def __post_init__(self):
        norm = abs(self.c0) ** 2 + abs(self.c1) ** 2 + abs(self.c2) ** 2
        if norm > 1 + 1e-9:
            raise NonUnitaryError(f"amplitude norm {norm} exceeds 1")


@dataclass
class Trajectory:
    """Density matrices on a strictly increasing time grid."""

    times: np.ndarray
    states: np.ndarray  # shape (n, d, d)
    picture: str = "interaction"

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.shape[0] != self.times.shape[0]:
            raise ValueError("times and states differ in length")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        if self.picture not in ("interaction", "schroedinger"):
            raise ValueError(f"unknown picture {self.picture!r}")

    def __len__(self):
        return self.times.size

    def populations(self):
        return np.real(np.einsum("nii->ni", self.states))

    def element(self, j, k):
        return self.states[:, j, k]


def amplitudes_to_density(c):
    """Reduced density matrix of c0|0> + c1|1> + c2|2> + (bath excitations)."""
    c0, c1, c2 = (complex(x) for x in (c.c0, c.c1, c.c2))
    rho = np.array([
        [1 - abs(c1) ** 2 - abs(c2) ** 2, c0 * c1.conjugate(), c0 * c2.conjugate()],
        [c0.conjugate() * c1, abs(c1) ** 2, c1 * c2.conjugate()],
        [c0.conjugate() * c2, c2 * c1.conjugate(), abs(c2) ** 2],
    ], dtype=complex)
    return rho


def amplitudes_from_density(rho, tol=1e-9):
    """Amplitudes of a pure density matrix (global phase chosen freely).

    The exact solver propagates a single wave function, so mixed initial
    states are rejected.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise DomainError(f"expected a 3x3 density matrix, got shape {rho.shape}")
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    if abs(w[-1] - 1) > tol or abs(w[:-1]).max() > tol:
        raise DomainError("initial state must be pure for the exact solver")
    psi = v[:, -1]
    k = int(np.argmax(np.abs(psi)))
    psi = psi * (abs(psi[k]) / psi[k])
    return AmplitudeState(*(complex(x) for x in psi))


def _density_batch(c0, c1, c2):
    n = c1.size
    rho = np.empty((n, 3, 3), dtype=complex)
    rho[:, 0, 0] = 1 - np.abs(c1) ** 2 - np.abs(c2) ** 2
    rho[:, 1, 1] = np.abs(c1) ** 2
    rho[:, 2, 2] = np.abs(c2) ** 2
    rho[:, 0, 1] = c0 * c1.conj()
    rho[:, 0, 2] = c0 * c2.conj()
    rho[:, 1, 2] = c1 * c2.conj()
    rho[:, 1, 0] = rho[:, 0, 1].conj()
    rho[:, 2, 0] = rho[:, 0, 2].conj()
    rho[:, 2, 1] = rho[:, 1, 2].conj()
    return rho


@dataclass
class ExactSolution:
    """Raw output of :func:`solve_amplitudes` on the stored sample grid."""

    times: np.ndarray
    c0: complex
    c1: np.ndarray
    c2: np.ndarray

    def trajectory(self):
        return Trajectory(self.times, _density_batch(self.c0, self.c1, self.c2), "interaction")


def max_step(sys, bath):
    return 0.1 / max(sys.omega1, sys.omega2, bath.omega_c)


def solve_amplitudes(sys, bath, psi0, t_max, h, scheme="trapezoid", subsample=100, norm_tol=1e-8):
    """Integrate the amplitude equations on [0, t_max] with step h.

    Returns an :class:`ExactSolution` sampled every ``subsample`` steps
    (the step index grid is ``0, k, 2k, ... <= round(t_max/h)``).
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if not h > 0:
        raise StepSizeError(f"step must be positive, got {h}")
    if h > max_step(sys, bath) * (1 + 1e-12):
        raise StepSizeError(f"step {h} exceeds 0.1/max(omega1, omega2, omega_c) = {max_step(sys, bath)}")
    if not t_max >= h:
        raise DomainError(f"t_max={t_max} shorter than one step")
    if subsample < 1:
        raise ValueError("subsample must be >= 1")
    if not isinstance(psi0, AmplitudeState):
        psi0 = AmplitudeState(*psi0)

    n_steps = int(round(t_max / h))
    w1, w2 = sys.omega1, sys.omega2
    c0 = complex(psi0.c0)
    budget = 1 - abs(c0) ** 2 + norm_tol

    # kernel on integer and half-integer multiples of h
    fk = exact_kernel(bath, 0.0, h * np.arange(n_steps + 2))
    fh = exact_kernel(bath, 0.0, h * (np.arange(n_steps + 1) + 0.5))
    fk_rev = np.ascontiguousarray(fk[::-1])  # fk_rev[L-1-m] = fk[m]
    fh_rev = np.ascontiguousarray(fh[::-1])
    lk, lh = fk.size, fh.size
    f0, f1, fhalf = fk[0], fk[1], fh[0]
    trap = scheme == "trapezoid"

    sig = np.zeros(n_steps + 1, dtype=complex)
    n_out = n_steps // subsample + 1
    out_c1 = np.empty(n_out, dtype=complex)
    out_c2 = np.empty(n_out, dtype=complex)

    c1, c2 = complex(psi0.c1), complex(psi0.c2)
    sig[0] = c1 + c2
    out_c1[0], out_c2[0] = c1, c2
    a_prev = 0j  # sum_{j=1}^{n-1} f((n-j)h) sigma_j
    cexp = np.exp

    for n in range(n_steps):
        t = n * h
        sn = sig[n]
        if n == 0:
            h0 = hh = h1 = 0j
            a_cur = 0j
        else:
            s0 = sig[0]
            a_cur = np.dot(fk_rev[lk - 1 - n: lk - 1], sig[1:n + 1])
            bh = np.dot(fh_rev[lh - n: lh - 1], sig[1:n]) if n > 1 else 0j
            if trap:
                h0 = h * (0.5 * fk[n] * s0 + a_prev + 0.5 * f0 * sn)
                hh = h * (0.5 * fh[n] * s0 + bh + 0.5 * fhalf * sn)
                h1 = h * (0.5 * fk[n + 1] * s0 + a_cur - 0.5 * f1 * sn)
            else:
                h0 = h * (fk[n] * s0 + a_prev)
                hh = h * (fh[n] * s0 + bh)
                h1 = h * (fk[n + 1] * s0 + a_cur)
        if n == 0 and not trap:
            h0 = 0j

        th, t1 = t + 0.5 * h, t + h
        p1a, p1b = cexp(1j * w1 * t), cexp(1j * w2 * t)
        pha, phb = cexp(1j * w1 * th), cexp(1j * w2 * th)
        p4a, p4b = cexp(1j * w1 * t1), cexp(1j * w2 * t1)

        m1 = h0
        k1a, k1b = -p1a * m1, -p1b * m1
        y2a, y2b = c1 + 0.5 * h * k1a, c2 + 0.5 * h * k1b
        if trap:
            s2 = y2a / pha + y2b / phb
            m2 = hh + 0.25 * h * (fhalf * sn + f0 * s2)
        else:
            m2 = hh + 0.5 * h * fhalf * sn
        k2a, k2b = -pha * m2, -phb * m2
        y3a, y3b = c1 + 0.5 * h * k2a, c2 + 0.5 * h * k2b
        if trap:
            s3 = y3a / pha + y3b / phb
            m3 = hh + 0.25 * h * (fhalf * sn + f0 * s3)
        else:
            m3 = m2
        k3a, k3b = -pha * m3, -phb * m3
        y4a, y4b = c1 + h * k3a, c2 + h * k3b
        if trap:
            s4 = y4a / p4a + y4b / p4b
            m4 = h1 + 0.5 * h * (f1 * sn + f0 * s4)
        else:
            m4 = h1
        k4a, k4b = -p4a * m4, -p4b * m4

        c1 = c1 + h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a)
        c2 = c2 + h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b)
        sig[n + 1] = c1 / p4a + c2 / p4b
        a_prev = a_cur

        if (n + 1) % subsample == 0:
            norm = abs(c1) ** 2 + abs(c2) ** 2
            if not norm <= budget:
                raise NonUnitaryError(f"|c1|^2 + |c2|^2 = {norm:.12g} at t = {t1:g} exceeds {budget:.12g}")
            i = (n + 1) // subsample
            out_c1[i], out_c2[i] = c1, c2

    times = h * subsample * np.arange(n_out)
    return ExactSolution(times=times, c0=c0, c1=out_c1, c2=out_c2)


def solve_exact(sys, bath, psi0, t_max, h, scheme="trapezoid", subsample=100):
    """Exact reduced dynamics as an interaction-picture :class:`Trajectory`."""
    return solve_amplitudes(sys, bath, psi0, t_max, h, scheme, subsample).trajectory()
