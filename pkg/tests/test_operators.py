"""Core operator-layer tests: Hamiltonians, eigen systems, Bohr frequency
clustering, vectorization conventions, and superoperator transforms.
"""

import numpy as np
import pytest

from conftest import random_hermitian
from oqsim.operators import (
    BohrFrequencyTable,
    SiteHamiltonian,
    Superoperator,
    bohr_frequencies,
    check_density_matrix,
    commutator_superoperator,
    devectorize,
    eigendecompose,
    left_right_superoperator,
    site_projector,
    transform_superoperator,
    vectorize,
)
from oqsim.units import CM1_TO_RADPS, KB_CM1_PER_K, cm1_to_radps, radps_to_cm1


# unit constants re-derived from c = 2.99792458e10 cm/s
def test_unit_constants():
    assert CM1_TO_RADPS == pytest.approx(0.1883651567308853, rel=1e-12)
    assert KB_CM1_PER_K == pytest.approx(0.6950348004861274, rel=1e-12)
    assert radps_to_cm1(cm1_to_radps(123.456)) == pytest.approx(123.456, rel=1e-14)


class TestSiteHamiltonian:
    def test_symmetrization_and_asymmetry_record(self):
        raw = np.array([[0.0, 1.0], [0.5, 2.0]])
        h = SiteHamiltonian(raw)
        assert np.allclose(h.matrix, h.matrix.conj().T)
        assert h.matrix[0, 1] == pytest.approx(0.75)
        assert h.max_asymmetry == pytest.approx(0.5)

    def test_rejects_small_and_nonsquare(self):
        with pytest.raises(ValueError):
            SiteHamiltonian(np.array([[1.0]]))
        with pytest.raises(ValueError):
            SiteHamiltonian(np.zeros((2, 3)))

    def test_from_cm1_converts(self):
        h = SiteHamiltonian.from_cm1(np.diag([1.0, 2.0]))
        assert h.matrix[1, 1].real == pytest.approx(cm1_to_radps(2.0))


class TestEigendecompose:
    def test_diagonal_input(self):
        eig = eigendecompose(SiteHamiltonian(np.diag([1.0, 2.0, 3.0])))
        assert np.allclose(eig.omegas, [1.0, 2.0, 3.0])
        assert np.allclose(eig.vectors, np.eye(3))

    def test_symmetric_two_level(self):
        v = 0.3
        eig = eigendecompose(SiteHamiltonian(np.array([[0.0, v], [v, 0.0]])))
        assert np.allclose(eig.omegas, [-v, v])
        s = 1.0 / np.sqrt(2.0)
        # phase convention: largest-magnitude (first, on ties) component positive
        assert np.allclose(eig.vectors[:, 0], [s, -s])
        assert np.allclose(eig.vectors[:, 1], [s, s])

    def test_three_level_matches_independent_root_finder(self):
        from oqsim.models import three_level

        # roots of the characteristic polynomial, computed independently of
        # the LAPACK eigensolver (companion-matrix root finder)
        expected_cm1 = np.array([-4.029629366615345, -2.475522572075985, 0.16515193869133])
        eig = eigendecompose(three_level().hamiltonian)
        assert np.allclose(eig.omegas, cm1_to_radps(expected_cm1), rtol=1e-10)

    def test_unitarity_and_reconstruction_random(self):
        rng = np.random.default_rng(7)
        for dim in (2, 3, 4, 5, 6):
            h = SiteHamiltonian(random_hermitian(rng, dim))
            eig = eigendecompose(h)
            assert np.max(np.abs(eig.vectors.conj().T @ eig.vectors - np.eye(dim))) <= 1e-12
            resid = h.matrix @ eig.vectors - eig.vectors @ np.diag(eig.omegas)
            assert np.max(np.abs(resid)) <= 1e-10 * np.max(np.abs(h.matrix))
            assert np.max(np.abs(eig.hamiltonian() - h.matrix)) <= 1e-10 * np.max(np.abs(h.matrix))

    def test_degeneracy_grouping(self):
        eig = eigendecompose(SiteHamiltonian(np.diag([1.0, 1.0, 2.0])))
        assert eig.groups == ((0, 1), (2,))
        # projectors onto degeneracy groups resolve the identity
        total = sum(eig.projector(g) for g in eig.groups)
        assert np.allclose(total, np.eye(3))

    def test_phase_determinism(self):
        rng = np.random.default_rng(11)
        h = SiteHamiltonian(random_hermitian(rng, 4))
        a = eigendecompose(h)
        b = eigendecompose(h)
        assert np.array_equal(a.vectors, b.vectors)


class TestBohrFrequencies:
    def test_zero_cluster_pinned(self):
        rng = np.random.default_rng(3)
        table = bohr_frequencies(eigendecompose(SiteHamiltonian(random_hermitian(rng, 4))))
        zero_c = table.cluster_of(0.0)
        assert table.reps[zero_c] == 0.0
        assert all(table.index[n, n] == zero_c for n in range(4))

    def test_antisymmetry_mirror(self):
        rng = np.random.default_rng(5)
        table = bohr_frequencies(eigendecompose(SiteHamiltonian(random_hermitian(rng, 5))))
        for c in range(table.n_clusters):
            m = table.mirror(c)
            assert table.reps[m] == pytest.approx(-table.reps[c], abs=1e-9)
            assert table.mirror(m) == c

    def test_index_consistency(self):
        rng = np.random.default_rng(9)
        eig = eigendecompose(SiteHamiltonian(random_hermitian(rng, 4)))
        table = bohr_frequencies(eig)
        for m in range(4):
            for n in range(4):
                w = eig.omegas[m] - eig.omegas[n]
                assert abs(table.reps[table.index[m, n]] - w) <= max(table.tol_deg, 1e-9)

    def test_cluster_count_bound(self):
        rng = np.random.default_rng(13)
        for dim in (2, 3, 5):
            table = bohr_frequencies(eigendecompose(SiteHamiltonian(random_hermitian(rng, dim))))
            assert table.n_clusters <= dim * dim

    def test_cluster_of_unknown_value_raises(self):
        table = bohr_frequencies(eigendecompose(SiteHamiltonian(np.diag([0.0, 1.0]))))
        with pytest.raises(KeyError):
            table.cluster_of(0.123456)


class TestSiteProjector:
    def test_basic(self):
        assert np.array_equal(site_projector(0, 2), np.array([[1, 0], [0, 0]], dtype=complex))
        s = site_projector(1, 3)
        assert s[1, 1] == 1.0 and np.count_nonzero(s) == 1

    def test_completeness(self):
        for dim in (2, 4, 7):
            assert np.array_equal(sum(site_projector(a, dim) for a in range(dim)), np.eye(dim))

    def test_idempotent_hermitian_trace_one(self):
        s = site_projector(2, 5)
        assert np.array_equal(s @ s, s)
        assert np.array_equal(s, s.conj().T)
        assert np.trace(s) == 1.0

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            site_projector(3, 3)


class TestVectorization:
    def test_column_major_convention(self):
        rho = np.array([[1.0, 3.0], [2.0, 4.0]])
        assert np.array_equal(vectorize(rho), [1.0, 2.0, 3.0, 4.0])

    def test_round_trip_exact(self):
        rng = np.random.default_rng(17)
        rho = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert np.array_equal(devectorize(vectorize(rho)), rho)

    def test_kron_identity(self):
        rng = np.random.default_rng(19)
        a, b, rho = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
                     for _ in range(3))
        lhs = left_right_superoperator(a, b) @ vectorize(rho)
        assert np.allclose(devectorize(lhs), a @ rho @ b, atol=1e-13)

    def test_non_square_vector_rejected(self):
        with pytest.raises(ValueError):
            devectorize(np.zeros(5))


class TestSuperoperator:
    def test_commutator_action(self):
        rng = np.random.default_rng(23)
        h = random_hermitian(rng, 3)
        rho = random_hermitian(rng, 3)
        l = Superoperator(commutator_superoperator(h), basis="site")
        assert np.allclose(l.apply(rho), -1j * (h @ rho - rho @ h), atol=1e-12)

    def test_shape_and_basis_validation(self):
        with pytest.raises(ValueError):
            Superoperator(np.zeros((3, 3)), basis="site")
        with pytest.raises(ValueError):
            Superoperator(np.zeros((4, 4)), basis="momentum")

    def test_transform_identity(self):
        rng = np.random.default_rng(29)
        l = Superoperator(rng.standard_normal((9, 9)) + 0j, basis="site")
        l2 = transform_superoperator(l, np.eye(3))
        assert np.allclose(l2.matrix, l.matrix)
        assert l2.basis == "eigen"  # tag flips even for the trivial unitary

    def test_transform_round_trip(self):
        rng = np.random.default_rng(31)
        eig = eigendecompose(SiteHamiltonian(random_hermitian(rng, 3)))
        l = Superoperator(rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9)),
                          basis="site")
        back = transform_superoperator(transform_superoperator(l, eig.vectors),
                                       eig.vectors.conj().T)
        assert np.max(np.abs(back.matrix - l.matrix)) <= 1e-12 * np.max(np.abs(l.matrix))

    def test_transform_matches_matrix_conjugation(self):
        rng = np.random.default_rng(37)
        eig = eigendecompose(SiteHamiltonian(random_hermitian(rng, 3)))
        u = eig.vectors
        l = Superoperator(rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9)),
                          basis="site")
        lt = transform_superoperator(l, u)
        rho_e = random_hermitian(rng, 3)
        # acting in the eigenbasis == rotate up, act, rotate back
        direct = u.conj().T @ l.apply(u @ rho_e @ u.conj().T) @ u
        assert np.allclose(lt.apply(rho_e), direct, atol=1e-12)

    def test_transform_dim_mismatch(self):
        l = Superoperator(np.zeros((9, 9)), basis="site")
        with pytest.raises(ValueError):
            transform_superoperator(l, np.eye(2))


class TestCheckDensityMatrix:
    def test_accepts_valid(self):
        rho = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
        check_density_matrix(rho, require_psd=True)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            check_density_matrix(np.array([[0.5, 0.2], [0.0, 0.5]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            check_density_matrix(np.eye(2))

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="positive"):
            check_density_matrix(np.diag([1.2, -0.2]), require_psd=True)
