import numpy as np
import pytest
from hypothesis import given, strategies as st

from jointspec.errors import ShapeError
from jointspec.matrix_core import (as_cmatrix, det, eigenvalues,
                                   match_multisets, matrix_from_json,
                                   matrix_to_json, numerical_radius,
                                   random_unitary, schur, spectral_radius,
                                   svd_rank)


def ginibre(seed, n):
    r = np.random.default_rng(seed)
    return r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))


class TestExamples:
    def test_eigenvalues_diagonal(self):
        assert match_multisets(eigenvalues(np.diag([1.0, 2.0])), [1, 2]) < 1e-14

    def test_eigenvalues_nilpotent(self):
        assert np.allclose(eigenvalues([[0, 1], [0, 0]]), 0)

    def test_eigenvalues_companion(self):
        assert match_multisets(eigenvalues([[0, 1], [1, 0]]), [1, -1]) < 1e-14

    def test_det_examples(self):
        w = 2 + 1j
        assert det(np.eye(3)) == pytest.approx(1)
        assert det([[0, w], [1, 0]]) == pytest.approx(-w)
        assert det([[1, 2, 3], [0, 0, 0], [4, 5, 6]]) == 0

    def test_rank_examples(self):
        u, v = np.array([1, 2j, 3]), np.array([1, 1, -1])
        assert svd_rank(np.zeros((4, 4))) == 0
        assert svd_rank(np.eye(5)) == 5
        assert svd_rank(np.outer(u, v.conj())) == 1

    def test_numerical_radius_examples(self):
        assert numerical_radius(np.eye(3)) == pytest.approx(1, abs=1e-10)
        lam = np.array([0.3, -2j, 1 + 1j])
        assert numerical_radius(np.diag(lam)) == pytest.approx(2, abs=1e-10)
        assert numerical_radius([[0, 0], [1, 0]]) == pytest.approx(0.5, abs=1e-9)

    def test_numerical_radius_dense_grid_oracle(self):
        a = ginibre(3, 4)
        th = np.linspace(0, 2 * np.pi, 100000, endpoint=False)
        # lambda_max of Re(e^{i th} A) over a dense grid is a lower bound
        vals = [np.linalg.eigvalsh((np.exp(1j * t) * a
                                    + np.exp(-1j * t) * a.conj().T) / 2)[-1]
                for t in th[::50]]
        nu = numerical_radius(a)
        assert max(vals) <= nu + 1e-9
        assert nu - max(vals) < 1e-3


class TestProperties:
    @given(st.integers(0, 10**6), st.integers(1, 7))
    def test_schur_factorization(self, seed, n):
        a = ginibre(seed, n)
        f = schur(a)
        assert np.linalg.norm(f.q.conj().T @ f.q - np.eye(n)) < 1e-12
        assert np.linalg.norm(f.q @ f.t @ f.q.conj().T - a) < 1e-12 * (
            1 + np.linalg.norm(a))
        assert np.abs(np.tril(f.t, -1)).max(initial=0) == 0

    @given(st.integers(0, 10**6), st.integers(1, 7))
    def test_eigenvalues_unitary_invariant(self, seed, n):
        a = ginibre(seed, n)
        q = random_unitary(n, np.random.default_rng(seed + 1))
        d = match_multisets(eigenvalues(q @ a @ q.conj().T), eigenvalues(a))
        assert d <= 1e-8 * (1 + np.linalg.norm(a))

    @given(st.integers(0, 10**6), st.integers(1, 6))
    def test_det_multiplicative(self, seed, n):
        a, b = ginibre(seed, n), ginibre(seed + 7, n)
        assert abs(det(a @ b) - det(a) * det(b)) <= 1e-10 * abs(det(a)) * abs(
            det(b)) * 10 ** n

    @given(st.integers(0, 10**6), st.integers(1, 6))
    def test_radius_sandwich(self, seed, n):
        a = ginibre(seed, n)
        nu = numerical_radius(a)
        norm = np.linalg.norm(a, 2)
        assert spectral_radius(a) - 1e-8 <= nu <= norm + 1e-8
        assert nu >= norm / 2 - 1e-8

    @given(st.integers(0, 10**6), st.integers(1, 5))
    def test_json_roundtrip(self, seed, n):
        a = ginibre(seed, n)
        assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)


class TestErrors:
    def test_non_square(self):
        with pytest.raises(ShapeError):
            as_cmatrix(np.zeros((2, 3)))

    def test_non_finite(self):
        with pytest.raises(ShapeError):
            as_cmatrix([[np.nan]])

    def test_bad_json(self):
        with pytest.raises(ShapeError):
            matrix_from_json({'n': 2, 're': [[1, 2]], 'im': [[0, 0]]})
