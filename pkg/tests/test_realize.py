import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from tto_workbench import (BlaschkeProduct, InvalidInput, JordanSpec, Symbol,
                           block_bases, coanalytic_shift_block, coanalytic_similarity,
                           csym_defect, hermite_coefficients, make_space, pairing_unitary,
                           realize_2x2, realize_inflation, realize_jordan, realize_normal,
                           realize_rank_one, symmetrize_2x2, tto_from_samples,
                           tto_membership)

Z2 = BlaschkeProduct.power(2)
Z3 = BlaschkeProduct.power(3)

complex_entries = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def matrices(n):
    return st.lists(complex_entries, min_size=n * n, max_size=n * n).map(
        lambda xs: np.array(xs).reshape(n, n))


def unitary_error(U):
    return np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]))


class TestPairingUnitary:
    def test_identical_vectors(self):
        e1 = np.array([1, 0, 0], dtype=complex)
        U = pairing_unitary(e1, e1, e1, e1)
        assert unitary_error(U) < 1e-12
        assert np.linalg.norm(U @ e1 - e1) < 1e-12

    def test_orthogonal_pairs(self):
        e1, e2 = np.eye(2, dtype=complex)
        U = pairing_unitary(e1, e2, e2, e1)
        assert unitary_error(U) < 1e-12
        T1, T2 = np.outer(e1, e2.conj()), np.outer(e2, e1.conj())
        assert np.linalg.norm(U @ T1 @ U.conj().T - T2) < 1e-10

    def test_random_pairs_with_pairing_half(self, rng):
        def pair():
            f = rng.normal(size=3) + 1j * rng.normal(size=3)
            f /= np.linalg.norm(f)
            w = rng.normal(size=3) + 1j * rng.normal(size=3)
            w -= np.vdot(f, w) * f
            w /= np.linalg.norm(w)
            g = 0.5 * f + np.sqrt(0.75) * w
            return f, g

        f1, g1 = pair()
        f2, g2 = pair()
        U = pairing_unitary(f1, g1, f2, g2)
        assert unitary_error(U) < 1e-12
        assert np.linalg.norm(U @ f1 - f2) < 1e-10
        assert np.linalg.norm(U @ g1 - g2) < 1e-10

    def test_mismatched_pairings_rejected(self):
        e1, e2 = np.eye(2, dtype=complex)
        with pytest.raises(InvalidInput):
            pairing_unitary(e1, e1, e1, e2)


class TestRankOne:
    def test_parallel_branch(self):
        e1 = np.array([1, 0])
        R = realize_rank_one(2, e1, e1)
        assert R.extras["branch"] == "parallel"
        assert R.residual < 1e-9

    def test_orthogonal_branch(self):
        R = realize_rank_one(2, [1, 0], [0, 1])
        assert R.extras["branch"] == "orthogonal"
        assert R.theta.zeros == (0, 0)
        # 1 (x) z in the monomial basis {1, z}
        A = R.operator.matrix
        assert np.allclose(A / A[0, 1], [[0, 1], [0, 0]], atol=1e-12)
        assert abs(R.extras["kernel_pairing"]) < 1e-12

    def test_interior_branch(self):
        u = np.array([1, 0])
        v = np.array([0.5, np.sqrt(0.75)])
        R = realize_rank_one(2, u, v)
        assert R.extras["branch"] == "interior"
        assert np.allclose(sorted(R.theta.zeros, key=abs), [0, 0.5])
        assert abs(R.theta.constant + 1) < 1e-15
        assert abs(R.extras["kernel_pairing"] - 0.5) < 1e-10
        assert abs(R.theta.derivative(0) - 0.5) < 1e-10

    @given(st.integers(2, 5), st.data())
    def test_random_vectors(self, n, data):
        vec = st.lists(complex_entries, min_size=n, max_size=n).map(np.array)
        u, v = data.draw(vec), data.draw(vec)
        assume(np.linalg.norm(u) > 1e-3 and np.linalg.norm(v) > 1e-3)
        # the interior construction puts zeros at t^(1/(n-1)); beyond ~0.99
        # they exceed what the quadrature grid can resolve
        t = abs(np.vdot(v, u)) / (np.linalg.norm(u) * np.linalg.norm(v))
        assume(t < 1e-12 or t > 1 - 1e-12 or t ** (1 / (n - 1)) < 0.99)
        R = realize_rank_one(n, u, v)
        assert R.residual < 1e-7 * max(1, np.linalg.norm(np.outer(u, v)))
        # near-parallel inputs push the repeated zero toward the circle
        if max(abs(z) for z in R.theta.zeros) < 0.9:
            assert tto_membership(make_space(R.theta), R.operator.matrix) < 1e-8

    def test_zero_vector_rejected(self):
        with pytest.raises(InvalidInput):
            realize_rank_one(2, [0, 0], [1, 0])


class TestSymmetrize:
    def test_symmetric_input_untouched(self):
        T = np.array([[1, 2j], [2j, 3]])
        S, U = symmetrize_2x2(T)
        assert np.array_equal(S, T)
        assert np.array_equal(U, np.eye(2))

    def test_jordan_cell(self):
        T = np.array([[0, 1], [0, 0]], dtype=complex)
        S, U = symmetrize_2x2(T)
        assert np.linalg.norm(S - S.T) < 1e-9
        assert np.allclose(np.linalg.svd(S, compute_uv=False), [1, 0], atol=1e-9)
        assert np.linalg.norm(U @ T @ U.conj().T - S) < 1e-8

    def test_normal_matrix_spectrum(self):
        Q, _ = np.linalg.qr(np.array([[1, 2j], [3, 1 - 1j]]))
        T = Q @ np.diag([2, -1j]) @ Q.conj().T
        S, _ = symmetrize_2x2(T)
        assert np.linalg.norm(S - S.T) < 1e-9
        assert np.allclose(sorted(np.linalg.eigvals(S), key=np.angle),
                           sorted([2, -1j], key=np.angle), atol=1e-9)

    @given(matrices(2))
    def test_random(self, T):
        S, U = symmetrize_2x2(T)
        scale = max(1, np.linalg.norm(T))
        assert np.linalg.norm(S - S.T) < 1e-8 * scale
        assert unitary_error(U) < 1e-10
        assert np.linalg.norm(U @ T @ U.conj().T - S) < 1e-8 * scale


class TestRealize2x2:
    def test_identity(self):
        R = realize_2x2(np.eye(2))
        assert np.allclose(R.operator.matrix, np.eye(2), atol=1e-10)

    def test_jordan_cell_on_z_squared(self):
        R = realize_2x2(np.array([[0, 1], [0, 0]]), Z2)
        A = R.operator.matrix
        # members of T_{z^2} are the 2x2 Toeplitz matrices
        assert abs(A[0, 0] - A[1, 1]) < 1e-10
        assert R.residual < 1e-8

    def test_random_against_two_zeros(self, rng):
        T = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        B = BlaschkeProduct(1, (0.3, -0.4j))
        R = realize_2x2(T, B)
        got = np.sort_complex(np.linalg.eigvals(R.operator.matrix))
        want = np.sort_complex(np.linalg.eigvals(T))
        assert np.allclose(got, want, atol=1e-8)
        assert tto_membership(make_space(B), R.operator.matrix) < 1e-8

    def test_wrong_order_rejected(self):
        with pytest.raises(InvalidInput):
            realize_2x2(np.eye(2), Z3)


class TestRealizeNormal:
    def test_clark_points_give_clark_operator(self):
        pts = np.array([1, -1], dtype=complex)
        R = realize_normal(pts, Z2)
        assert np.allclose(R.extras["polynomial"], [0, 1], atol=1e-12)

    def test_two_point_interpolation(self):
        R = realize_normal([3, -1j], Z2, 1)
        want = [(3 - 1j) / 2, (3 + 1j) / 2]
        assert np.allclose(R.extras["polynomial"], want, atol=1e-12)
        eig = np.sort_complex(np.linalg.eigvals(R.operator.matrix))
        assert np.allclose(eig, np.sort_complex([3, -1j]), atol=1e-10)

    def test_repeated_eigenvalues(self):
        R = realize_normal([1, 1, 2], Z3)
        A = R.operator.matrix
        assert np.linalg.norm(A @ A.conj().T - A.conj().T @ A) < 1e-10
        assert np.allclose(np.sort(np.linalg.eigvals(A).real), [1, 1, 2], atol=1e-10)
        assert tto_membership(make_space(Z3), A) < 1e-8

    def test_wrong_count_rejected(self):
        with pytest.raises(InvalidInput):
            realize_normal([1, 2, 3], Z2)


class TestInflation:
    def test_constant_symbol(self):
        B = BlaschkeProduct(1, (0.2, -0.3))
        R = realize_inflation(Symbol({0: 2.5}), B)
        assert np.allclose(R.operator.matrix, 2.5 * np.eye(2), atol=1e-10)

    def test_shift_by_two(self):
        R = realize_inflation(Symbol.monomial(1), Z2)
        assert R.theta.zeros == (0,) * 4
        want = np.kron([[0, 0], [1, 0]], np.eye(2))
        assert np.allclose(R.operator.matrix, want, atol=1e-10)
        assert R.residual < 1e-10

    def test_random_symbol(self, rng):
        coeffs = rng.normal(size=5) + 1j * rng.normal(size=5)
        psi = Symbol({m: c for m, c in zip(range(-2, 3), coeffs)})
        R = realize_inflation(psi, BlaschkeProduct(1, (0.2, -0.3)))
        assert R.extras["n"] == 3 and R.extras["k"] == 2
        assert R.extras["kron_residual"] < 1e-8


class TestJordan:
    def test_single_block_at_origin(self):
        R = realize_jordan(JordanSpec(((2, 2),)), zeros=[0])
        assert R.theta.zeros == (0, 0)
        assert np.allclose(R.extras["hermite"], [2, 1], atol=1e-14)
        assert np.allclose(R.operator.matrix, [[2, 1], [0, 2]], atol=1e-10)
        assert np.allclose(R.witness, np.eye(2), atol=1e-10)

    def test_zero_operator(self):
        R = realize_jordan(JordanSpec(((0, 1),)), zeros=[0])
        assert np.allclose(R.operator.matrix, 0, atol=1e-12)

    def test_repeated_eigenvalue(self):
        spec = JordanSpec(((1, 2), (1, 3)))
        R = realize_jordan(spec)
        assert R.extras["jordan_residual"] < 1e-7
        assert R.residual < 1e-7
        assert tto_membership(make_space(R.theta), R.operator.matrix) < 1e-8

    @given(st.lists(st.tuples(complex_entries, st.integers(1, 3)), min_size=1, max_size=3))
    def test_random_specs(self, blocks):
        R = realize_jordan(JordanSpec(tuple(blocks)))
        assert R.extras["jordan_residual"] < 1e-7 * max(1, R.extras["cond"])

    def test_coincident_zeros_rejected(self):
        with pytest.raises(InvalidInput):
            realize_jordan(JordanSpec(((1, 1), (2, 1))), zeros=[0.1, 0.1])

    def test_hermite_conditions(self):
        q = hermite_coefficients([0.3, -0.2j], [1 + 1j, 2], [3, 2])
        p = np.polynomial.Polynomial(q)
        for w, mu, m in [(0.3, 1 + 1j, 3), (-0.2j, 2, 2)]:
            assert abs(p(w) - mu) < 1e-12
            assert abs(p.deriv(1)(w) - 1) < 1e-12
            if m > 2:
                assert abs(p.deriv(2)(w)) < 1e-11

    def test_shift_block_matches_compression(self):
        a = 0.3 - 0.2j
        space = make_space(BlaschkeProduct(1, (a,) * 3))
        X = block_bases(space, [a], [3])[0]
        Ab = np.conj(space.nodes)
        got = X.conj().T @ tto_from_samples(space, Ab) @ X
        assert np.allclose(got, coanalytic_shift_block(a, 3), atol=1e-10)


class TestCoanalyticSimilarity:
    def test_two_blocks(self):
        Y, worst = coanalytic_similarity([0.3, -0.5j], [2, 1])
        assert np.linalg.cond(Y) < 1e8
        assert worst < 1e-8

    def test_symmetric_defect_of_realised_operators(self):
        R = realize_jordan(JordanSpec(((1, 2),)), zeros=[0.25])
        assert csym_defect(make_space(R.theta), R.operator.matrix) < 1e-9
