import numpy as np
import pytest
import scipy.sparse as sp

from shrunkclust.exceptions import DimensionError, NumericalError
from shrunkclust.linalg import spd_solve, sym_eigs_smallest


def dense_eig_oracle(m, k):
    """Full dense eigendecomposition, independent of the solver under test."""
    vals, vecs = np.linalg.eigh(np.asarray(m))
    return vals[:k], vecs[:, :k]


class TestSymEigsSmallest:
    def test_zero_matrix(self):
        res = sym_eigs_smallest(np.zeros((2, 2)), 2)
        assert np.allclose(res.eigenvalues, [0.0, 0.0])
        # any orthonormal basis qualifies; sign convention forces identity here
        assert np.allclose(np.abs(res.eigenvectors), np.eye(2))

    def test_path_graph_laplacian(self):
        m = np.array([[1.0, -1.0], [-1.0, 1.0]])
        res = sym_eigs_smallest(m, 2)
        assert np.allclose(res.eigenvalues, [0.0, 2.0], atol=1e-12)
        s = 1.0 / np.sqrt(2.0)
        assert np.allclose(np.abs(res.eigenvectors[:, 0]), [s, s])
        assert np.allclose(np.abs(res.eigenvectors[:, 1]), [s, s])
        # sign rule: the largest-magnitude entry (first, on ties) is nonnegative
        assert res.eigenvectors[0, 0] >= 0
        assert res.eigenvectors[0, 1] >= 0

    def test_matches_dense_oracle_8x8(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((8, 8))
        m = 0.5 * (a + a.T)
        want_vals, _ = dense_eig_oracle(m, 3)
        res = sym_eigs_smallest(m, 3)
        assert np.allclose(res.eigenvalues, want_vals, atol=1e-8)

    def test_matches_dense_oracle_corpus(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            n = int(rng.integers(2, 17))
            k = int(rng.integers(1, n + 1))
            a = rng.standard_normal((n, n))
            m = 0.5 * (a + a.T)
            want_vals, _ = dense_eig_oracle(m, k)
            res = sym_eigs_smallest(m, k)
            assert np.allclose(res.eigenvalues, want_vals, atol=1e-8)

    def test_orthonormal_columns(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(3, 20))
            k = int(rng.integers(1, n + 1))
            a = rng.standard_normal((n, n))
            res = sym_eigs_smallest(0.5 * (a + a.T), k)
            gram = res.eigenvectors.T @ res.eigenvectors
            assert np.max(np.abs(gram - np.eye(k))) <= 1e-8

    def test_sparse_lanczos_path_matches_dense(self):
        rng = np.random.default_rng(5)
        n = 60
        a = sp.random(n, n, density=0.1, random_state=42, format="csr")
        m = (a + a.T).tocsr()
        m.setdiag(m.diagonal() + 2.0)
        want_vals, _ = dense_eig_oracle(m.toarray(), 4)
        res = sym_eigs_smallest(m, 4, dense_cutoff=8)
        assert np.allclose(res.eigenvalues, want_vals, atol=1e-7)
        gram = res.eigenvectors.T @ res.eigenvectors
        assert np.max(np.abs(gram - np.eye(4))) <= 1e-7

    def test_too_many_pairs_rejected(self):
        with pytest.raises(DimensionError):
            sym_eigs_smallest(np.eye(3), 4)

    def test_sign_determinism(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((12, 12))
        m = 0.5 * (a + a.T)
        r1 = sym_eigs_smallest(m, 5)
        r2 = sym_eigs_smallest(m.copy(), 5)
        assert np.array_equal(r1.eigenvectors, r2.eigenvectors)
        for j in range(5):
            col = r1.eigenvectors[:, j]
            assert col[np.argmax(np.abs(col))] >= 0


class TestSpdSolve:
    def test_identity_system(self):
        rng = np.random.default_rng(0)
        b = rng.standard_normal((6, 3))
        z = spd_solve(np.eye(6), b)
        assert np.allclose(z, b, atol=1e-12)

    def test_diagonal_system(self):
        k = np.diag([2.0, 4.0])
        b = np.array([2.0, 4.0])
        z = spd_solve(k, b)
        assert np.allclose(z, [1.0, 1.0], atol=1e-14)

    def test_random_spd_residual(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((6, 6))
        k = m.T @ m + np.eye(6)
        b = rng.standard_normal((6, 2))
        z = spd_solve(k, b, tol=1e-10)
        assert np.linalg.norm(k @ z - b) <= 1e-10 * max(1.0, np.linalg.norm(b))

    def test_residual_bound_corpus(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            n = int(rng.integers(1, 33))
            m = rng.standard_normal((n, n))
            k = m.T @ m + np.eye(n)
            b = rng.standard_normal((n, int(rng.integers(1, 4))))
            z = spd_solve(k, b, tol=1e-10)
            assert np.linalg.norm(k @ z - b) <= 1e-10 * max(1.0, np.linalg.norm(b))

    def test_indefinite_rejected_with_index(self):
        k = np.diag([1.0, -1.0, 2.0])
        with pytest.raises(NumericalError) as err:
            spd_solve(k, np.ones(3))
        assert err.value.index == 1

    def test_cg_path_sparse(self):
        rng = np.random.default_rng(4)
        n = 50
        m = sp.random(n, n, density=0.08, random_state=1, format="csr")
        k = (m @ m.T + 5.0 * sp.eye(n)).tocsr()
        b = rng.standard_normal((n, 3))
        z = spd_solve(k, b, tol=1e-10, dense_cutoff=8)
        assert np.linalg.norm(k @ z - b) <= 1e-10 * max(1.0, np.linalg.norm(b))

    def test_cg_detects_indefiniteness(self):
        k = sp.diags([1.0, 1.0, -3.0, 1.0]).tocsr()
        with pytest.raises(NumericalError):
            spd_solve(k, np.ones(4), dense_cutoff=2)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            spd_solve(np.eye(3), np.ones((4, 2)))
