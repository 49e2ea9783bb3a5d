"""Propagation tests: exact spectral propagation, RK4 convergence order,
semigroup property, stationary states, and relaxation timescales.
"""

import numpy as np
import pytest

from conftest import random_hermitian
from oqsim.bath import BathSpec, spectral_tensor
from oqsim.generators import build_lindblad
from oqsim.models import THREE_LEVEL_CM1
from oqsim.operators import (
    SiteHamiltonian,
    Superoperator,
    bohr_frequencies,
    commutator_superoperator,
    eigendecompose,
    site_projector,
)
from oqsim.propagator import (
    DegenerateStationaryState,
    IllConditionedError,
    Trajectory,
    default_times,
    liouvillian_spectrum,
    propagate_exact,
    propagate_rk4,
    relaxation_timescale,
    stationary_state,
)


BATH = BathSpec(eta_cm1=0.125, omega_c_cm1=100.0, temperature_k=300.0, matsubara_n=100)


def three_level_generator(secular: bool) -> tuple:
    eig = eigendecompose(SiteHamiltonian.from_cm1(THREE_LEVEL_CM1))
    table = bohr_frequencies(eig)
    tensor = spectral_tensor(table.reps, BATH, 3)
    return build_lindblad(eig, tensor, secular), eig


class TestPropagateExact:
    def test_initial_point(self):
        l, _ = three_level_generator(secular=False)
        rho0 = site_projector(0, 3)
        traj = propagate_exact(l, rho0, [0.0, 1.0])
        assert np.max(np.abs(traj.states[0] - rho0)) <= 1e-12

    def test_eigenstate_stationary_under_commutator(self):
        rng = np.random.default_rng(127)
        eig = eigendecompose(SiteHamiltonian(random_hermitian(rng, 3)))
        l = Superoperator(commutator_superoperator(eig.hamiltonian()), basis="site")
        rho0 = np.outer(eig.vectors[:, 1], eig.vectors[:, 1].conj())
        traj = propagate_exact(l, rho0, default_times(2.0, 50))
        assert np.max(np.abs(traj.states - rho0)) <= 1e-10

    def test_trajectory_invariants(self):
        l, _ = three_level_generator(secular=False)
        traj = propagate_exact(l, site_projector(0, 3), default_times(5.0, 200))
        assert traj.max_trace_error() <= 1e-8
        assert traj.max_hermiticity_error() <= 1e-10

    def test_semigroup_property(self):
        l, _ = three_level_generator(secular=False)
        rho0 = site_projector(0, 3)
        one_step = propagate_exact(l, rho0, [0.0, 1.7]).states[-1]
        mid = propagate_exact(l, rho0, [0.0, 0.9]).states[-1]
        two_step = propagate_exact(l, mid, [0.0, 0.8]).states[-1]
        assert np.max(np.abs(one_step - two_step)) <= 1e-10

    def test_ill_conditioned_raises(self):
        # a Jordan-block superoperator is not diagonalizable
        m = np.eye(4, k=1).astype(complex)
        with pytest.raises(IllConditionedError):
            propagate_exact(Superoperator(m, basis="site"), np.diag([1.0, 0.0]), [0.0, 1.0])


class TestPropagateRK4:
    def test_zero_generator_constant(self):
        l = Superoperator(np.zeros((9, 9), dtype=complex), basis="site")
        rho0 = np.diag([0.5, 0.3, 0.2]).astype(complex)
        traj = propagate_rk4(l, rho0, 1.0, 0.01, samples=20)
        assert np.max(np.abs(traj.states - rho0)) == 0.0

    def test_matches_exact(self):
        l, _ = three_level_generator(secular=False)
        rho0 = site_projector(0, 3)
        times = default_times(5.0, 100)
        ex = propagate_exact(l, rho0, times)
        dt = min(times[1] - times[0], 0.1 / np.max(np.abs(l.matrix)))
        rk = propagate_rk4(l, rho0, 5.0, dt, samples=100)
        assert np.max(np.abs(ex.states - rk.states)) <= 1e-6

    def test_fourth_order_convergence(self):
        l, _ = three_level_generator(secular=False)
        rho0 = site_projector(0, 3)
        ref = propagate_exact(l, rho0, [0.0, 1.0]).states[-1]
        dts = np.array([0.1, 0.05, 0.02, 0.01])
        errs = np.array([
            np.max(np.abs(propagate_rk4(l, rho0, 1.0, dt, samples=2).states[-1] - ref))
            for dt in dts
        ])
        order = np.polyfit(np.log(dts), np.log(errs), 1)[0]
        assert 3.7 <= order <= 4.3

    def test_unitary_invariance_of_spectrum(self):
        rng = np.random.default_rng(131)
        h = random_hermitian(rng, 3, scale_cm1=5.0)
        l = Superoperator(commutator_superoperator(h), basis="site")
        rho0 = np.diag([0.6, 0.3, 0.1]).astype(complex)
        traj = propagate_rk4(l, rho0, 2.0, 0.0005, samples=10)
        for state in traj.states:
            vals = np.sort(np.linalg.eigvalsh((state + state.conj().T) / 2))
            assert np.max(np.abs(vals - [0.1, 0.3, 0.6])) <= 1e-8

    def test_trace_drift_abort(self):
        # an unstable step size must abort with a diagnostic, not return junk
        l, _ = three_level_generator(secular=False)
        big = Superoperator(l.matrix * 1e2, basis="site")
        with pytest.raises(RuntimeError, match="trace drift"):
            propagate_rk4(big, site_projector(0, 3), 5.0, 0.05, samples=10)

    def test_bad_dt_rejected(self):
        l, _ = three_level_generator(secular=False)
        with pytest.raises(ValueError):
            propagate_rk4(l, site_projector(0, 3), 1.0, -0.1)


class TestStationaryState:
    def test_matches_long_time_limit(self):
        l, _ = three_level_generator(secular=True)
        rho_ss = stationary_state(l)
        far = propagate_exact(l, site_projector(0, 3), [0.0, 2000.0]).states[-1]
        assert np.max(np.abs(rho_ss - far)) <= 1e-6

    def test_boltzmann_populations(self):
        l, eig = three_level_generator(secular=True)
        rho_ss = stationary_state(l)
        pops = np.real(np.diag(eig.vectors.conj().T @ rho_ss @ eig.vectors))
        boltz = np.exp(-eig.omegas / BATH.kt)
        boltz /= boltz.sum()
        assert np.max(np.abs(pops - boltz)) <= 1e-10

    def test_residual_bound(self):
        from oqsim.operators import vectorize

        l, _ = three_level_generator(secular=False)
        rho_ss = stationary_state(l)
        res = np.max(np.abs(l.matrix @ vectorize(rho_ss)))
        assert res <= 1e-9 * np.max(np.abs(l.matrix))

    def test_closed_system_degenerate(self):
        rng = np.random.default_rng(137)
        h = random_hermitian(rng, 3)
        l = Superoperator(commutator_superoperator(h), basis="site")
        with pytest.raises(DegenerateStationaryState) as exc:
            stationary_state(l)
        # every eigenstate projector is stationary
        assert exc.value.multiplicity == 3


class TestRelaxationTimescale:
    def test_single_decay_rate(self):
        gamma = 0.37
        l = Superoperator(np.diag([0.0, -gamma, -gamma, -2.0 * gamma]).astype(complex),
                          basis="site")
        assert relaxation_timescale(l) == pytest.approx(1.0 / gamma)

    def test_basis_invariance(self):
        rng = np.random.default_rng(139)
        l, eig = three_level_generator(secular=False)
        from oqsim.operators import transform_superoperator

        a = relaxation_timescale(l)
        b = relaxation_timescale(transform_superoperator(l, eig.vectors))
        assert a == pytest.approx(b, rel=1e-9)

    def test_no_decaying_mode_raises(self):
        rng = np.random.default_rng(149)
        l = Superoperator(commutator_superoperator(random_hermitian(rng, 2)), basis="site")
        with pytest.raises(RuntimeError, match="no decaying mode"):
            relaxation_timescale(l)


class TestSpectrum:
    def test_secular_lindblad_spectrum_classes(self):
        l, _ = three_level_generator(secular=True)
        summary = liouvillian_spectrum(l)
        thr = 1e-9 * np.max(np.abs(l.matrix))
        zero = np.abs(summary.eigenvalues.real) <= thr
        assert np.sum(zero) == 1
        assert np.all(summary.eigenvalues.real[~zero] < 0)
        assert summary.null_multiplicity == 1
        assert summary.gap > 0
        assert summary.stationary is not None

    def test_trajectory_accessors(self):
        l, _ = three_level_generator(secular=True)
        traj = propagate_exact(l, site_projector(0, 3), default_times(3.0, 50))
        pops = traj.populations()
        assert pops.shape == (50, 3)
        assert pops[0, 0] == pytest.approx(1.0)
        assert traj.min_eigenvalue() >= -1e-8
