import numpy as np
import pytest

from cgsme.analysis import REFERENCE_WINDOWS
from cgsme.bath import BathSpec, gamma_rwa, lamb_rwa
from cgsme.errors import PictureError
from cgsme.exact import AmplitudeState, VSystemSpec, amplitudes_to_density, solve_exact
from cgsme.lindblad import (Superoperator, build_cg_generator, build_rwa_generator, check_density,
                            generator_from_tensors, level_energies, propagate, to_schroedinger, unvec, vec)
from cgsme.rates import rate_tensor

BENCH = VSystemSpec(0.095, 0.105)
BATH = BathSpec(g=0.001)
EXCITED = np.diag([0, 1, 0]).astype(complex)
MIXED = amplitudes_to_density(AmplitudeState(0.6, 0.64, 0.48j))


def test_vec_identity():
    rng = np.random.default_rng(3)
    a, x, c = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
    assert np.allclose(vec(a @ x @ c), np.kron(c.T, a) @ vec(x))
    assert np.array_equal(unvec(vec(x)), x)


@pytest.mark.parametrize("dt", [1.0, 63.7, 1e4])
def test_trace_row_vanishes(dt):
    for gen in (build_cg_generator(BENCH, BATH, dt), build_rwa_generator(BENCH, BATH)):
        assert np.abs(gen.trace_row()).max() < 1e-12
        ev = np.linalg.eigvals(gen.matrix)
        assert ev.real.max() < 1e-10


def test_forced_diagonal_reduces_to_rwa_structure():
    rt = rate_tensor(BATH, BENCH, 63.7)
    gamma = np.diag(np.diag(rt.gamma))
    lamb = np.diag(np.diag(rt.lamb))
    cg = generator_from_tensors(gamma, lamb)
    freqs = (BENCH.omega1, BENCH.omega2)
    rwa = build_rwa_generator(BENCH, BATH)
    # swapping in the rotating-wave values must give exactly the RWA generator
    swapped = generator_from_tensors(np.diag([gamma_rwa(BATH, w) for w in freqs]),
                                     np.diag([lamb_rwa(BATH, w) for w in freqs]))
    assert np.array_equal(swapped.matrix, rwa.matrix)
    # same sparsity pattern: no 1 <-> 2 couplings
    assert np.array_equal(cg.matrix != 0, rwa.matrix != 0)


def test_rwa_closed_form_and_dark_level_two():
    times = np.linspace(0, 5000, 101)
    traj = propagate(build_rwa_generator(BENCH, BATH), EXCITED, times)
    g1 = gamma_rwa(BATH, BENCH.omega1)
    pops = traj.populations()
    assert np.max(np.abs(pops[:, 1] - np.exp(-g1 * times))) < 1e-12
    assert np.max(np.abs(pops[:, 0] - (1 - np.exp(-g1 * times)))) < 1e-12
    assert np.all(traj.element(2, 2) == 0)


def test_vacuum_is_stationary():
    vac = np.diag([1, 0, 0]).astype(complex)
    for gen in (build_cg_generator(BENCH, BATH, 63.7), build_rwa_generator(BENCH, BATH)):
        traj = propagate(gen, vac, [0.0, 10.0, 1e4])
        assert np.abs(traj.states - vac).max() < 1e-14


def test_time_zero_and_semigroup():
    gen = build_cg_generator(BENCH, BATH, 63.7)
    assert np.array_equal(propagate(gen, MIXED, [0.0]).states[0], MIXED)
    for co in (True, False):
        direct = propagate(gen, MIXED, [0.0, 700.0], co_rotate=co).states[-1]
        split = propagate(gen, MIXED, [0.0, 300.0, 700.0], co_rotate=co).states[-1]
        assert np.abs(direct - split).max() < 1e-10


def test_rwa_is_frame_independent():
    gen = build_rwa_generator(BENCH, BATH)
    times = np.linspace(0, 2000, 21)
    a = propagate(gen, MIXED, times, co_rotate=True).states
    b = propagate(gen, MIXED, times, co_rotate=False).states
    assert np.abs(a - b).max() < 1e-12


def test_cg_generator_matches_exact_map_to_second_order():
    # within the derivation window [0, dt] the literal exponential reproduces
    # the exact map up to O(g^2) corrections
    dt = 30.0
    errs = []
    for g in (1e-3, 2e-3, 4e-3):
        bath = BathSpec(g=g)
        exact = solve_exact(BENCH, bath, AmplitudeState(0.6, 0.64, 0.48j), dt, 0.01, subsample=3000).states[-1]
        cg = propagate(build_cg_generator(BENCH, bath, dt), MIXED, [0.0, dt], co_rotate=False).states[-1]
        assert np.abs(cg - exact).max() < 0.05 * np.abs(exact - MIXED).max()
        errs.append(np.abs(cg - exact).max())
    assert errs[1] / errs[0] == pytest.approx(4, rel=0.1)
    assert errs[2] / errs[1] == pytest.approx(4, rel=0.1)


def test_dark_state_under_cg():
    sys = VSystemSpec(0.1, 0.1)
    minus = np.zeros((3, 3), dtype=complex)
    minus[1:, 1:] = 0.5 * np.array([[1, -1], [-1, 1]])
    traj = propagate(build_cg_generator(sys, BATH, 50.0), minus, np.linspace(0, 5000, 11))
    assert np.abs(traj.states - minus).max() < 1e-9


@pytest.mark.parametrize("row", REFERENCE_WINDOWS)
def test_cptp_along_trajectories(row):
    mean, split, g, dt_pub = row
    sys = VSystemSpec.from_mean_split(mean, split)
    bath = BathSpec(g=g)
    times = np.linspace(0, 3 / gamma_rwa(bath, mean), 60)
    for gen in (build_cg_generator(sys, bath, dt_pub), build_rwa_generator(sys, bath)):
        for rho0 in (EXCITED, MIXED):
            st = propagate(gen, rho0, times).states
            assert np.abs(np.trace(st, axis1=1, axis2=2) - 1).max() < 1e-10
            assert np.linalg.eigvalsh(st).min() >= -1e-10


def test_cg_populates_second_level():
    traj = propagate(build_cg_generator(BENCH, BATH, 36.4), EXCITED, np.linspace(0, 5000, 501))
    assert traj.element(2, 2).real.max() > 0.01


def test_schroedinger_transform():
    traj = propagate(build_cg_generator(BENCH, BATH, 63.7), MIXED, np.linspace(0, 300, 31))
    sch = to_schroedinger(traj, BENCH)
    assert sch.picture == "schroedinger"
    assert np.array_equal(sch.populations(), traj.populations())
    assert np.allclose(np.abs(sch.element(1, 2)), np.abs(traj.element(1, 2)), rtol=1e-15)
    t = traj.times[7]
    assert sch.states[7, 0, 1] == pytest.approx(np.exp(1j * BENCH.omega1 * t) * traj.states[7, 0, 1])
    with pytest.raises(PictureError):
        to_schroedinger(sch, BENCH)
    diag = propagate(build_rwa_generator(BENCH, BATH), EXCITED, [0.0, 50.0])
    assert np.array_equal(to_schroedinger(diag, BENCH).states, diag.states)


def test_propagate_validation():
    gen = build_rwa_generator(BENCH, BATH)
    for bad in ([], [-1.0, 0.0], [0.0, 2.0, 1.0]):
        with pytest.raises(ValueError):
            propagate(gen, EXCITED, bad)


def test_superoperator_call_and_density_check():
    gen = build_rwa_generator(BENCH, BATH)
    d = gen(EXCITED)
    assert d[1, 1].real == pytest.approx(-gamma_rwa(BATH, BENCH.omega1))
    assert isinstance(gen, Superoperator) and gen.energies == level_energies(BENCH)
    assert check_density(MIXED)
    assert not check_density(np.diag([1.2, -0.2, 0.0]))
    assert not check_density(np.diag([0.5, 0.4, 0.0]))
