"""GKSL generators for the V-type atom and their propagation.

Basis order is (|0>, |1>, |2>) and vec() stacks columns, so that
vec(A X C) = (C^T kron A) vec(X).  Jump operators are the lowering
operators a_j = |0><j|.  Both generators are written in the interaction
picture.

The coarse-grained generator is derived for the window [0, dt].  Shifting
the window to [n dt, (n+1) dt] multiplies every cross term a_j . a_k^+ by
exp(i (w_j - w_k) n dt), which is the same as conjugating with the free
evolution.  The generator is therefore stationary in the frame that
co-rotates with H_S, so :func:`propagate` integrates L - i[H_S, .] and
rotates the result back.  For the rotating-wave generator both routes
agree because it commutes with the free evolution.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .bath import gamma_rwa, lamb_rwa
from .errors import NumericalError, PictureError
from .exact import Trajectory
from .rates import rate_tensor

DIM = 3
_EYE = np.eye(DIM)


def lowering(j, dim=DIM):
    a = np.zeros((dim, dim), dtype=complex)
    a[0, j] = 1.0
    return a


def vec(rho):
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v, dim=DIM):
    return np.asarray(v).reshape(dim, dim, order="F")


def left(a):
    return np.kron(np.eye(a.shape[0]), a)


def right(c):
    return np.kron(c.T, np.eye(c.shape[0]))


@dataclass(frozen=True)
class Superoperator:
    matrix: np.ndarray
    picture: str = "interaction"
    energies: tuple = None  # levels of H_S; None means no free rotation is known

    def __call__(self, rho):
        return unvec(self.matrix @ vec(rho), int(round(np.sqrt(self.matrix.shape[0]))))

    def trace_row(self):
        """vec(I)^dagger L, zero for a trace-preserving generator."""
        d = int(round(np.sqrt(self.matrix.shape[0])))
        return vec(np.eye(d)).conj() @ self.matrix


def gksl_matrix(hamiltonian, rates, jumps):
    """Generator -i[H, .] + sum_jk rates[j,k] (L_j . L_k^+ - 1/2 {L_k^+ L_j, .})."""
    h = np.asarray(hamiltonian, dtype=complex)
    gen = -1j * (left(h) - right(h))
    for j, lj in enumerate(jumps):
        for k, lk in enumerate(jumps):
            r = rates[j][k]
            if r == 0:
                continue
            lkd = lk.conj().T
            prod = lkd @ lj
            gen = gen + r * (np.kron(lkd.T, lj) - 0.5 * left(prod) - 0.5 * right(prod))
    return gen


def generator_from_tensors(gamma, lamb, energies=None):
    """Interaction-picture generator with H'_LS = sum_jk lamb[j,k] a_k^+ a_j."""
    jumps = [lowering(1), lowering(2)]
    h = np.zeros((DIM, DIM), dtype=complex)
    for j in range(2):
        for k in range(2):
            h += lamb[j][k] * (jumps[k].conj().T @ jumps[j])
    return Superoperator(gksl_matrix(h, gamma, jumps), energies=energies)


def level_energies(sys):
    return (0.0, float(sys.omega1), float(sys.omega2))


def build_cg_generator(sys, bath, dt, forms="exact"):
    """Coarse-grained generator for window dt."""
    rt = rate_tensor(bath, sys, dt, forms)
    return generator_from_tensors(rt.gamma, rt.lamb, level_energies(sys))


def build_rwa_generator(sys, bath):
    """Rotating-wave generator: independent decay channels with golden-rule rates."""
    freqs = (sys.omega1, sys.omega2)
    gamma = np.diag([gamma_rwa(bath, w) for w in freqs]).astype(complex)
    lamb = np.diag([lamb_rwa(bath, w) for w in freqs]).astype(complex)
    return generator_from_tensors(gamma, lamb, level_energies(sys))


def _rotation(energies, times):
    e = np.asarray(energies, dtype=float)
    de = e[:, None] - e[None, :]
    return np.exp(-1j * np.asarray(times)[:, None, None] * de[None, :, :])


def propagate(gen, rho0, times, co_rotate=True):
    """Interaction-picture trajectory generated by ``gen`` from rho(0).

    With ``co_rotate`` (and known level energies) the generator is applied in
    the frame co-rotating with H_S, see the module docstring; otherwise
    rho(t) = exp(L t) rho(0) literally.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise ValueError("empty time grid")
    if times[0] < 0:
        raise ValueError("times must start at t >= 0")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("times must be strictly increasing")
    mat = gen.matrix
    rotate = co_rotate and gen.energies is not None
    if rotate:
        h = np.diag(np.asarray(gen.energies, dtype=complex))
        mat = mat - 1j * (left(h) - right(h))
    dim = int(round(np.sqrt(mat.shape[0])))
    steps = {}

    def step(dt):
        key = round(dt, 12)
        if key not in steps:
            p = expm(mat * dt)
            if not np.all(np.isfinite(p)):
                raise NumericalError(f"matrix exponential failed for dt={dt}")
            steps[key] = p
        return steps[key]

    out = np.empty((times.size, dim, dim), dtype=complex)
    v = vec(rho0)
    if times[0] > 0:
        v = step(times[0]) @ v
    out[0] = unvec(v, dim)
    for i in range(1, times.size):
        v = step(times[i] - times[i - 1]) @ v
        out[i] = unvec(v, dim)
    if rotate:
        out = out * _rotation(gen.energies, times).conj()
    return Trajectory(times, out, gen.picture)


def to_schroedinger(traj, sys):
    """Undo the free rotation: rho_jk -> exp(-i (E_j - E_k) t) rho_jk, E = (0, w1, w2)."""
    if traj.picture != "interaction":
        raise PictureError("trajectory is already in the Schroedinger picture")
    phase = _rotation(level_energies(sys), traj.times)
    return Trajectory(traj.times.copy(), traj.states * phase, "schroedinger")


def check_density(rho, trace_tol=1e-9, eig_tol=1e-8):
    """True if rho is Hermitian, unit trace and positive within tolerance."""
    rho = np.asarray(rho)
    if not np.allclose(rho, rho.conj().T, atol=1e-12):
        return False
    if abs(np.trace(rho) - 1) > trace_tol:
        return False
    return np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() >= -eig_tol
