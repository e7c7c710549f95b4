"""Trace-norm comparison of master-equation trajectories against the exact
dynamics and the search for the best coarse-graining window."""
from dataclasses import asdict, dataclass, field
import hashlib
import json
import logging
import math
import os
from pathlib import Path

import numpy as np

from .bath import gamma_rwa
from .errors import BoundaryError, DomainError, GridMismatch
from .exact import AmplitudeState, Trajectory, amplitudes_from_density, solve_amplitudes
from .lindblad import build_cg_generator, build_rwa_generator, propagate

log = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2

# (mean frequency, splitting, coupling, published optimal window), omega_c = 1
REFERENCE_WINDOWS = (
    (0.05, 0.01, 0.001, 124.0),
    (0.1, 0.01, 0.001, 63.0),
    (0.1, 0.01, 0.002, 61.0),
    (0.1, 0.01, 0.003, 59.0),
    (0.15, 0.01, 0.001, 39.0),
    (0.2, 0.02, 0.002, 28.0),
    (0.3, 0.03, 0.003, 18.0),
    (0.4, 0.04, 0.004, 13.0),
    (0.4, 0.01, 0.001, 13.0),
)


def trace_distance(a, b):
    """Half the Schatten 1-norm of a - b."""
    diff = np.asarray(a) - np.asarray(b)
    diff = 0.5 * (diff + diff.conj().T)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(diff)).sum())


def trace_distances(a, b):
    """Pointwise trace distance of two trajectories on the same grid."""
    diff = a.states - b.states
    diff = 0.5 * (diff + np.conj(np.swapaxes(diff, -1, -2)))
    return 0.5 * np.abs(np.linalg.eigvalsh(diff)).sum(axis=-1)


def _check_grids(a, b):
    if a.times.shape != b.times.shape or not np.allclose(a.times, b.times, rtol=0, atol=1e-9):
        raise GridMismatch("trajectories are sampled on different grids")
    if a.picture != b.picture:
        raise GridMismatch(f"pictures differ: {a.picture} vs {b.picture}")


def integrated_distance(a, b):
    """Time average of the trace distance over the common grid (trapezoid rule)."""
    _check_grids(a, b)
    d = trace_distances(a, b)
    span = a.times[-1] - a.times[0]
    if span <= 0:
        return float(d[0])
    return float(np.trapezoid(d, a.times) / span)


def default_horizon(sys, bath, n_relax=3.0):
    """n_relax golden-rule relaxation times at the mean transition frequency."""
    return n_relax / gamma_rwa(bath, sys.mean)


def as_amplitudes(state):
    """Accept an AmplitudeState, an (c0, c1, c2) tuple or a pure 3x3 density matrix."""
    if isinstance(state, AmplitudeState):
        return state
    arr = np.asarray(state, dtype=complex)
    if arr.shape == (3,):
        return AmplitudeState(*arr)
    return amplitudes_from_density(arr)


@dataclass
class OptimizerResult:
    dt_opt: float
    objective: float
    bracket: tuple
    evaluations: int
    scan: list = field(default_factory=list)  # (dt, objective) on the coarse grid
    rwa_objective: float = float("nan")


class DistanceObjective:
    """dt -> integrated distance between the coarse-grained and exact trajectories."""

    def __init__(self, sys, bath, reference, forms="exact"):
        self.sys, self.bath, self.reference = sys, bath, reference
        self.rho0 = reference.states[0]
        self.forms = forms
        self.evaluations = 0
        self._cache = {}

    def trajectory(self, dt):
        gen = build_cg_generator(self.sys, self.bath, dt, self.forms)
        return propagate(gen, self.rho0, self.reference.times)

    def __call__(self, dt):
        dt = float(dt)
        if dt not in self._cache:
            self.evaluations += 1
            self._cache[dt] = integrated_distance(self.trajectory(dt), self.reference)
        return self._cache[dt]

    def rwa(self):
        gen = build_rwa_generator(self.sys, self.bath)
        return integrated_distance(propagate(gen, self.rho0, self.reference.times), self.reference)


def golden_section(f, lo, hi, tol):
    """Minimize a unimodal f on [lo, hi] until the bracket is narrower than tol."""
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:  # ties move toward smaller dt
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def default_search(bath, n_grid=40):
    return (1.0 / bath.omega_c, 0.5 / bath.g, n_grid)


class _Counted:
    def __init__(self, f):
        self.f, self.evaluations = f, 0

    def __call__(self, x):
        self.evaluations += 1
        return self.f(x)


def minimize_objective(objective, lo, hi, n_grid=40, tol=1e-2):
    """Log-grid scan on [lo, hi] followed by golden-section refinement in the best bracket.

    ``objective`` may expose an ``evaluations`` counter (as
    :class:`DistanceObjective` does); plain callables are counted here.
    """
    if not hasattr(objective, "evaluations"):
        objective = _Counted(objective)
    if not 0 < lo < hi:
        raise DomainError(f"search interval must satisfy 0 < lo < hi, got ({lo}, {hi})")
    if n_grid < 3:
        raise DomainError("need at least 3 grid points")
    grid = np.geomspace(lo, hi, n_grid)
    values = np.array([objective(x) for x in grid])
    i = int(np.argmin(values))  # first occurrence: ties toward smaller dt
    scan = list(zip(grid.tolist(), values.tolist()))
    if i == 0 or i == n_grid - 1:
        j = 1 if i == 0 else n_grid - 2
        res = OptimizerResult(float(grid[i]), float(values[i]),
                              tuple(sorted((float(grid[i]), float(grid[j])))), objective.evaluations, scan)
        raise BoundaryError(f"minimum at search boundary dt={grid[i]:.4g}; widen the bracket", res)
    a, b = float(grid[i - 1]), float(grid[i + 1])
    x, fx = golden_section(objective, a, b, tol)
    if values[i] < fx:
        x, fx = float(grid[i]), float(values[i])
    return OptimizerResult(float(x), float(fx), (a, b), objective.evaluations, scan)


class ReferenceCache:
    """Exact trajectories memoized on disk, keyed by a hash of every input."""

    def __init__(self, directory):
        self.directory = Path(directory)

    @staticmethod
    def key(sys, bath, psi0, t_max, h, scheme, subsample):
        payload = {
            "sys": asdict(sys), "bath": {k: repr(v) for k, v in asdict(bath).items()},
            "psi0": [repr(complex(x)) for x in (psi0.c0, psi0.c1, psi0.c2)],
            "t_max": repr(float(t_max)), "h": repr(float(h)), "scheme": scheme, "subsample": int(subsample),
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:24]

    def get(self, sys, bath, psi0, t_max, h, scheme="trapezoid", subsample=100):
        psi0 = as_amplitudes(psi0)
        path = self.directory / f"exact-{self.key(sys, bath, psi0, t_max, h, scheme, subsample)}.npz"
        if path.exists():
            with np.load(path) as data:
                return Trajectory(data["times"], data["states"], "interaction")
        traj = solve_amplitudes(sys, bath, psi0, t_max, h, scheme, subsample).trajectory()
        self.directory.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.stem + f".{os.getpid()}.tmp.npz")
        np.savez(tmp, times=traj.times, states=traj.states)
        os.replace(tmp, path)
        return traj


def exact_reference(sys, bath, psi0, t_max, h=0.05, scheme="trapezoid", subsample=100, cache=None):
    """Exact interaction-picture trajectory, through ``cache`` when one is given."""
    psi0 = as_amplitudes(psi0)
    if cache is not None:
        return cache.get(sys, bath, psi0, t_max, h, scheme, subsample)
    return solve_amplitudes(sys, bath, psi0, t_max, h, scheme, subsample).trajectory()


def optimize_dt(sys, bath, t_max=None, rho0=(0, 1, 0), search=None, h=0.05, scheme="trapezoid",
                subsample=100, tol=1e-2, cache=None, forms="exact"):
    """Coarse-graining window minimizing the integrated trace distance to the exact dynamics.

    ``rho0`` is a pure 3x3 density matrix or amplitudes (c0, c1, c2); the
    default is |1><1|.  ``search`` is ``(lo, hi, n_grid)`` and defaults to
    40 log points on [1/omega_c, 0.5/g].  ``t_max`` defaults to three
    golden-rule relaxation times at the mean frequency.
    """
    if t_max is None:
        t_max = default_horizon(sys, bath)
    lo, hi, n_grid = search if search is not None else default_search(bath)
    ref = exact_reference(sys, bath, rho0, t_max, h, scheme, subsample, cache)
    obj = DistanceObjective(sys, bath, ref, forms)
    try:
        res = minimize_objective(obj, lo, hi, int(n_grid), tol)
    except BoundaryError as exc:
        if exc.result is not None:
            exc.result.rwa_objective = obj.rwa()
        raise
    res.rwa_objective = obj.rwa()
    log.info("dt_opt=%.4g objective=%.4g (rwa %.4g) after %d evaluations",
             res.dt_opt, res.objective, res.rwa_objective, res.evaluations)
    return res


def robustness_scan(sys, bath, t_max=None, rho0=(0, 1, 0), dt_values=(), h=0.05, scheme="trapezoid",
                    subsample=100, cache=None, forms="exact"):
    """Objective over the given windows, each row ``(dt, objective, rwa_objective)``."""
    if t_max is None:
        t_max = default_horizon(sys, bath)
    ref = exact_reference(sys, bath, rho0, t_max, h, scheme, subsample, cache)
    obj = DistanceObjective(sys, bath, ref, forms)
    rwa = obj.rwa()
    return [(float(dt), obj(dt), rwa) for dt in dt_values]
