"""Fiber-algebra tests: basis enumeration, Clifford generators, Hamiltonian,
projections, quadratic sp-action.  Expected values come from independent
oracles (Gauss-Hermite quadrature, brute-force enumeration, dense algebra)."""

import itertools
import math

import numpy as np
import pytest

from symdirac.fiber import (
    build_basis,
    clifford_generator,
    clifford_matrix,
    fiber_inner,
    frame_sigma_matrices,
    hamilton_operator,
    hamilton_via_clifford,
    level_projection,
    protected_projection,
    quadratic_action_matrix,
    vacuum_state,
    FiberVector,
)
from symdirac.symplectic import j_matrix, omega_matrix, omega_pair, random_sp_element

from hermite_oracle import derivative_element, overlap, position_element


def unit(m, i):
    u = np.zeros(m)
    u[i] = 1.0
    return u


class TestBasis:
    def test_single_variable_dim(self):
        basis = build_basis(1, 8)
        assert basis.dim == 9  # C(9, 8)

    def test_level_block_size_n2(self):
        # C(n+l-1, l) with n=2, l=3 gives 4
        basis = build_basis(2, 3)
        block = basis.level_block(3)
        assert block.stop - block.start == 4

    def test_dim_by_enumeration_oracle(self):
        # Oracle: enumerate all beta with |beta| <= 3 for n=2 directly.
        enum = [
            beta
            for beta in itertools.product(range(4), repeat=2)
            if sum(beta) <= 3
        ]
        assert len(enum) == 10
        basis = build_basis(2, 3)
        assert basis.dim == 10
        assert set(basis.indices) == set(enum)

    def test_graded_lex_order(self):
        basis = build_basis(2, 3)
        assert basis.indices[:6] == ((0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0))

    def test_block_sizes_match_binomials(self):
        for n, L in [(1, 8), (2, 5), (3, 4)]:
            basis = build_basis(n, L)
            for level in range(L + 1):
                block = basis.level_block(level)
                assert block.stop - block.start == math.comb(n + level - 1, level)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            build_basis(0, 4)
        with pytest.raises(ValueError):
            build_basis(1, 1)


class TestCliffordGenerator:
    def test_zero_vector(self):
        basis = build_basis(1, 4)
        assert np.all(clifford_matrix(basis, np.zeros(2)) == 0)

    def test_matrix_elements_against_quadrature(self):
        # sigma(e_1) = i x and sigma(e_2) = d/dx entrywise, n=1, levels <= 6.
        basis = build_basis(1, 6)
        sx = clifford_matrix(basis, unit(2, 0))
        sd = clifford_matrix(basis, unit(2, 1))
        for a in range(7):
            for b in range(7):
                assert sx[a, b] == pytest.approx(
                    1j * position_element(a, b), abs=1e-13
                )
                assert sd[a, b] == pytest.approx(
                    derivative_element(a, b), abs=1e-13
                )

    def test_vacuum_image_frozen_value(self):
        # Oracle value: integral of i x h0 h1 = i/sqrt(2).
        oracle = 1j * position_element(1, 0)
        assert oracle == pytest.approx(1j / math.sqrt(2), abs=1e-14)
        basis = build_basis(1, 8)
        out = clifford_generator(basis, unit(2, 0))(vacuum_state(basis))
        expected = np.zeros(9, dtype=complex)
        expected[1] = 0.7071067811865476j
        np.testing.assert_allclose(out.coeffs, expected, atol=1e-14)

    def test_skew_hermitian_exact(self):
        rng = np.random.default_rng(11)
        for n, L in [(1, 8), (2, 4)]:
            basis = build_basis(n, L)
            for _ in range(10):
                v = rng.standard_normal(2 * n)
                s = clifford_matrix(basis, v)
                assert np.array_equal(s.conj().T, -s)

    def test_canonical_commutation_on_protected_levels(self):
        rng = np.random.default_rng(7)
        for n, L in [(1, 8), (2, 5)]:
            basis = build_basis(n, L)
            pi = protected_projection(basis, 1).matrix
            for _ in range(20):
                v = rng.standard_normal(2 * n)
                w = rng.standard_normal(2 * n)
                sv = clifford_matrix(basis, v)
                sw = clifford_matrix(basis, w)
                comm = (sv @ sw - sw @ sv) @ pi
                expected = -1j * omega_pair(v, w) * pi
                assert np.max(np.abs(comm - expected)) < 1e-12

    def test_commutation_violated_on_top_level(self):
        basis = build_basis(1, 4)
        sv = clifford_matrix(basis, unit(2, 0))
        sw = clifford_matrix(basis, unit(2, 1))
        comm = sv @ sw - sw @ sv
        top = np.zeros(basis.dim, dtype=complex)
        top[-1] = 1.0  # level-L state
        assert np.linalg.norm(comm @ top - (-1j) * top) > 0.5

    def test_grading_shift_exact(self):
        basis = build_basis(2, 4)
        rng = np.random.default_rng(3)
        v = rng.standard_normal(4)
        s = clifford_matrix(basis, v)
        for level in range(basis.L + 1):
            block = level_projection(basis, level).matrix
            img = s @ block
            levels_hit = basis.levels[np.flatnonzero(np.abs(img).sum(axis=1) > 1e-14)]
            assert all(abs(l - level) == 1 for l in levels_hit)

    def test_dimension_mismatch_rejected(self):
        basis = build_basis(2, 3)
        with pytest.raises(ValueError):
            clifford_matrix(basis, np.zeros(2))


class TestHamiltonian:
    def test_eigenvalues_n1(self):
        basis = build_basis(1, 8)
        h = hamilton_operator(basis)
        assert h.matrix[0, 0] == pytest.approx(-0.5)

    def test_eigenvalue_n2_mixed_index(self):
        basis = build_basis(2, 5)
        h = hamilton_operator(basis)
        i = basis.index_of[(1, 2)]
        assert h.matrix[i, i] == pytest.approx(-4.0)

    def test_spectrum_multiplicities(self):
        for n, L in [(1, 8), (2, 6)]:
            basis = build_basis(n, L)
            eigs = np.diag(hamilton_operator(basis).matrix).real
            for level in range(L + 1):
                count = np.sum(np.isclose(eigs, -(level + n / 2.0)))
                assert count == math.comb(n + level - 1, level)

    def test_agreement_with_clifford_form(self):
        # Oracle: assemble (1/2) sum sigma^2 from generators; exact on
        # levels <= L - 2.
        for n, L in [(1, 8), (2, 5)]:
            basis = build_basis(n, L)
            pi = protected_projection(basis, 2).matrix
            lhs = hamilton_operator(basis).matrix @ pi
            rhs = hamilton_via_clifford(basis) @ pi
            assert np.max(np.abs(lhs - rhs)) < 1e-13

    def test_self_adjoint(self):
        basis = build_basis(2, 4)
        h = hamilton_operator(basis).matrix
        assert np.array_equal(h, h.conj().T)


class TestLevelProjection:
    def test_vacuum_block_rank_one(self):
        basis = build_basis(1, 5)
        p0 = level_projection(basis, 0).matrix
        assert np.trace(p0).real == pytest.approx(1.0)

    def test_rank_n2_level3(self):
        basis = build_basis(2, 5)
        p3 = level_projection(basis, 3).matrix
        assert np.trace(p3).real == pytest.approx(4.0)  # C(4, 3)

    def test_resolution_of_identity_and_orthogonality(self):
        basis = build_basis(2, 4)
        total = np.zeros((basis.dim, basis.dim), dtype=complex)
        for level in range(basis.L + 1):
            p = level_projection(basis, level).matrix
            total += p
            for other in range(level):
                q = level_projection(basis, other).matrix
                assert np.max(np.abs(p @ q)) == 0.0
        assert np.array_equal(total, np.eye(basis.dim))

    def test_commutes_with_hamiltonian(self):
        basis = build_basis(2, 4)
        h = hamilton_operator(basis).matrix
        for level in range(basis.L + 1):
            p = level_projection(basis, level).matrix
            np.testing.assert_allclose(p @ h, h @ p, atol=1e-14)
            np.testing.assert_allclose(
                h @ p, -(level + basis.n / 2.0) * p, atol=1e-14
            )

    def test_out_of_range_rejected(self):
        basis = build_basis(1, 4)
        with pytest.raises(ValueError):
            level_projection(basis, 5)


class TestInnerProduct:
    def test_orthonormality_against_quadrature(self):
        # Oracle: Gauss-Hermite quadrature Gram matrix for n=1, levels <= 4.
        for a in range(5):
            for b in range(5):
                assert overlap(a, b) == pytest.approx(
                    1.0 if a == b else 0.0, abs=1e-13
                )
        basis = build_basis(1, 4)
        eye = np.eye(basis.dim)
        for a in range(basis.dim):
            for b in range(basis.dim):
                fa = FiberVector(basis, eye[a].astype(complex))
                fb = FiberVector(basis, eye[b].astype(complex))
                assert fiber_inner(fa, fb) == pytest.approx(float(a == b))

    def test_positive_definite(self):
        basis = build_basis(2, 3)
        rng = np.random.default_rng(5)
        f = FiberVector(
            basis, rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
        )
        assert fiber_inner(f, f).real > 0
        assert abs(fiber_inner(f, f).imag) < 1e-15
        zero = FiberVector(basis, np.zeros(basis.dim, dtype=complex))
        assert fiber_inner(zero, zero) == 0

    def test_sesquilinearity(self):
        basis = build_basis(1, 3)
        rng = np.random.default_rng(6)
        f = FiberVector(basis, rng.standard_normal(basis.dim) + 0j)
        g = FiberVector(basis, rng.standard_normal(basis.dim) + 0j)
        zf = FiberVector(basis, (2 + 3j) * f.coeffs)
        zg = FiberVector(basis, (2 + 3j) * g.coeffs)
        assert fiber_inner(zf, g) == pytest.approx((2 + 3j) * fiber_inner(f, g))
        assert fiber_inner(f, zg) == pytest.approx(
            np.conj(2 + 3j) * fiber_inner(f, g)
        )

    def test_clifford_skewness_in_inner_product(self):
        rng = np.random.default_rng(9)
        basis = build_basis(2, 4)
        for _ in range(5):
            v = rng.standard_normal(4)
            s = clifford_matrix(basis, v)
            f = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
            g = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
            lhs = np.vdot(g, s @ f)
            rhs = -np.vdot(s @ g, f)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_basis_mismatch_rejected(self):
        f = FiberVector(build_basis(1, 3), np.zeros(4, dtype=complex))
        g = FiberVector(build_basis(1, 4), np.zeros(5, dtype=complex))
        with pytest.raises(ValueError):
            fiber_inner(f, g)


class TestVacuum:
    def test_normalized(self):
        basis = build_basis(2, 3)
        v = vacuum_state(basis)
        assert fiber_inner(v, v) == pytest.approx(1.0)

    def test_derivative_action_frozen_value(self):
        # Oracle: integral of h0'(x) h1(x) = -1/sqrt(2).
        oracle = derivative_element(1, 0)
        assert oracle == pytest.approx(-1.0 / math.sqrt(2), abs=1e-14)
        basis = build_basis(1, 8)
        out = clifford_generator(basis, unit(2, 1))(vacuum_state(basis))
        expected = np.zeros(9, dtype=complex)
        expected[1] = -0.7071067811865476
        np.testing.assert_allclose(out.coeffs, expected, atol=1e-14)

    def test_complex_structure_relation(self):
        # sigma(b_j) vac = i sigma(a_j) vac for each j.
        basis = build_basis(2, 4)
        vac = vacuum_state(basis)
        for j in range(2):
            lhs = clifford_generator(basis, unit(4, 2 + j))(vac).coeffs
            rhs = 1j * clifford_generator(basis, unit(4, j))(vac).coeffs
            np.testing.assert_allclose(lhs, rhs, atol=1e-15)

    def test_level_zero_complex_structure_general_sections(self):
        # sigma(J0 s) phi = i sigma(s) phi exactly on the level-0 block.
        rng = np.random.default_rng(21)
        for n in (1, 2):
            basis = build_basis(n, 4)
            j0 = j_matrix(n)
            vac = vacuum_state(basis).coeffs
            for _ in range(5):
                s = rng.standard_normal(2 * n)
                lhs = clifford_matrix(basis, j0 @ s) @ vac
                rhs = 1j * clifford_matrix(basis, s) @ vac
                np.testing.assert_allclose(lhs, rhs, atol=1e-14)


class TestQuadraticAction:
    def test_zero(self):
        basis = build_basis(1, 4)
        assert np.all(quadratic_action_matrix(basis, np.zeros((2, 2))) == 0)

    def test_rejects_non_sp(self):
        # For n=1, sp(1,R) = traceless matrices; the identity is not in it.
        basis = build_basis(1, 4)
        with pytest.raises(ValueError):
            quadratic_action_matrix(basis, np.eye(2))
        with pytest.raises(ValueError):
            quadratic_action_matrix(basis, np.array([[0.0, 1.0], [1e-6, 1e-6]]))

    def test_j0_case_against_clifford_oracle(self):
        # Oracle: (1/2) sum_X sigma_L(e_X)^2 on protected levels; the
        # quadratic action of J0 equals -i times that matrix (eigenvalues
        # +i(l + n/2) on level l).
        for n, L in [(1, 8), (2, 5)]:
            basis = build_basis(n, L)
            q = quadratic_action_matrix(basis, j_matrix(n))
            oracle = hamilton_via_clifford(basis)
            pi = protected_projection(basis, 2).matrix
            np.testing.assert_allclose(
                q @ pi, -1j * (oracle @ pi), atol=1e-13
            )
            # frozen spot value: vacuum eigenvalue +i n/2
            assert q[0, 0] == pytest.approx(1j * n / 2.0, abs=1e-14)

    def test_equivariance_commutator(self):
        # Oracle: dense matrix algebra at n=1, L=6:
        # [Q(A), sigma(v)] = sigma(A v) on protected levels.
        rng = np.random.default_rng(13)
        basis = build_basis(1, 6)
        pi = protected_projection(basis, 3).matrix
        for _ in range(10):
            a = random_sp_element(1, rng)
            v = rng.standard_normal(2)
            q = quadratic_action_matrix(basis, a)
            s = clifford_matrix(basis, v)
            lhs = (q @ s - s @ q) @ pi
            rhs = clifford_matrix(basis, a @ v) @ pi
            assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_level_preserving_for_unitary_elements(self):
        # Elements commuting with J0 act block-diagonally on protected levels.
        basis = build_basis(2, 6)
        rng = np.random.default_rng(17)
        x = rng.standard_normal((2, 2))
        x = (x - x.T) / 2
        y = rng.standard_normal((2, 2))
        y = (y + y.T) / 2
        a = np.block([[x, -y], [y, x]])  # u(n): sp and commutes with J0
        q = quadratic_action_matrix(basis, a)
        pi = protected_projection(basis, 2).matrix
        for l1 in range(basis.L + 1):
            for l2 in range(basis.L + 1):
                if l1 == l2:
                    continue
                p1 = level_projection(basis, l1).matrix
                p2 = level_projection(basis, l2).matrix
                assert np.max(np.abs(p1 @ q @ p2 @ pi)) < 1e-13

    def test_skew_hermitian_for_real_sp(self):
        basis = build_basis(2, 4)
        rng = np.random.default_rng(19)
        a = random_sp_element(2, rng)
        q = quadratic_action_matrix(basis, a)
        np.testing.assert_allclose(q.conj().T, -q, atol=1e-14)


class TestFrameIdentities:
    def test_pairing_trace_identity(self):
        # sum_X sigma(J e_X) sigma(e_X) = i n Id on levels <= L - 2.
        for n, L in [(1, 8), (2, 6)]:
            basis = build_basis(n, L)
            j0 = j_matrix(n)
            total = np.zeros((basis.dim, basis.dim), dtype=complex)
            for x in range(2 * n):
                ex = unit(2 * n, x)
                total += clifford_matrix(basis, j0 @ ex) @ clifford_matrix(basis, ex)
            pi = protected_projection(basis, 2).matrix
            np.testing.assert_allclose(
                total @ pi, 1j * n * pi, atol=1e-13
            )

    def test_hamilton_clifford_commutation(self):
        # H(sigma(s) f) = sigma(s) H(f) + i sigma(J0 s) f on protected levels.
        rng = np.random.default_rng(23)
        for n, L in [(1, 8), (2, 5)]:
            basis = build_basis(n, L)
            h = hamilton_operator(basis).matrix
            j0 = j_matrix(n)
            pi = protected_projection(basis, 1).matrix
            for _ in range(10):
                s = rng.standard_normal(2 * n)
                sig = clifford_matrix(basis, s)
                lhs = (h @ sig - sig @ h) @ pi
                rhs = 1j * clifford_matrix(basis, j0 @ s) @ pi
                assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_omega_and_j_conventions(self):
        n = 2
        om = omega_matrix(n)
        j0 = j_matrix(n)
        np.testing.assert_allclose(j0 @ j0, -np.eye(2 * n))
        np.testing.assert_allclose(om @ j0, np.eye(2 * n))
        np.testing.assert_allclose(j0.T @ om @ j0, om)
