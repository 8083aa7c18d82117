import numpy as np
import pytest
from hypothesis import given, strategies as st

from jointspec import fixtures
from jointspec.errors import NotCommutingError, ShapeError
from jointspec.matrix_core import eigenvalues, match_multisets
from jointspec.tuple_spectrum import (CommutingTuple, joint_eigenvalues,
                                      joint_eigenvalues_batch, koszul_build,
                                      simultaneous_triangularize,
                                      taylor_singular_at, tuple_from_json,
                                      tuple_to_json)
from jointspec.cayley_hamilton import draw_probes

N = np.array([[0, 1], [0, 0]], dtype=complex)


def poly_tuple(seed, n, d=2):
    """``(p_1(M), ..., p_d(M))`` together with the oracle spectrum."""
    r = np.random.default_rng(seed)
    m = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    coefs = r.standard_normal((d, 3)) + 1j * r.standard_normal((d, 3))
    mats = [c[0] * np.eye(n) + c[1] * m + c[2] * m @ m for c in coefs]
    mu = np.linalg.eigvals(m)
    oracle = np.stack([c[0] + c[1] * mu + c[2] * mu ** 2 for c in coefs], 1)
    return CommutingTuple.from_mats(mats), oracle


class TestExamples:
    def test_diagonal_pair(self):
        t = fixtures.diagonal_pair()
        q, tris = simultaneous_triangularize(t)
        # Q is a permutation up to phases, so the triangular forms stay diagonal
        assert np.allclose(np.abs(q), np.abs(q).round())
        for a in tris:
            assert np.allclose(a, np.diag(np.diag(a)))
        pts = joint_eigenvalues(t).points
        assert match_multisets(pts, [[1, 3], [2, 4]]) < 1e-12

    def test_nilpotent_pair(self):
        pts = joint_eigenvalues(CommutingTuple.from_mats([N, N])).points
        assert np.allclose(pts, 0)

    def test_a_and_identity(self, rng):
        a = rng.standard_normal((5, 5))
        js = joint_eigenvalues(CommutingTuple.from_mats([a, np.eye(5)]))
        assert np.allclose(js.points[:, 1], 1)
        assert match_multisets(js.points[:, 0], eigenvalues(a)) < 1e-10

    @pytest.mark.parametrize('seed', range(20))
    def test_a_and_a_squared(self, seed):
        r = np.random.default_rng(seed)
        a = r.standard_normal((6, 6)) + 1j * r.standard_normal((6, 6))
        t = CommutingTuple.from_mats([a, a @ a])
        q, tris = simultaneous_triangularize(t)
        for tri, m in zip(tris, t.mats):
            assert np.abs(np.tril(tri, -1)).max() < 1e-8 * (1 + np.linalg.norm(m))
            assert np.linalg.norm(q @ tri @ q.conj().T - m) < 1e-8 * (
                1 + np.linalg.norm(m))

    def test_spectral_mapping_5x5(self):
        t, oracle = poly_tuple(7, 5)
        assert match_multisets(joint_eigenvalues(t).points, oracle) < 1e-8

    def test_koszul_scalar(self):
        e = koszul_build(CommutingTuple.from_mats([[[1.0]]])).e
        assert e.shape == (2, 2)
        assert np.count_nonzero(np.abs(e) > 0) == 1
        assert abs(np.abs(e).max() - 1) < 1e-15

    @pytest.mark.parametrize('a,b,rank', [(0, 0, 0), (1, 0, 2), (0, 2j, 2),
                                          (1.5, -1, 2)])
    def test_koszul_rank_d2_n1(self, a, b, rank):
        e = koszul_build(CommutingTuple.from_mats([[[a]], [[b]]])).e
        assert e.shape == (4, 4)
        assert np.linalg.matrix_rank(e) == rank

    def test_taylor_examples(self):
        one = CommutingTuple.from_mats([[[1.0]]])
        assert taylor_singular_at(one, [1.0])
        assert not taylor_singular_at(one, [0.0])
        t = fixtures.diagonal_pair()
        assert taylor_singular_at(t, [1, 3])
        assert not taylor_singular_at(t, [1, 4])


class TestProperties:
    @given(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 3))
    def test_coordinate_multisets(self, seed, n, d):
        t, oracle = poly_tuple(seed, n, d)
        pts = joint_eigenvalues(t).points
        assert pts.shape == (n, d)
        for j in range(d):
            assert match_multisets(pts[:, j], eigenvalues(t.mats[j])) <= \
                1e-6 * (1 + t.norm())

    @given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 3))
    def test_koszul_squares_to_zero(self, seed, n, d):
        t, _ = poly_tuple(seed, n, d)
        e = koszul_build(t).e
        assert np.linalg.norm(e @ e) <= 1e-12 * np.linalg.norm(e) ** 2

    @given(st.integers(0, 10**6))
    def test_koszul_agrees_with_membership(self, seed):
        r = np.random.default_rng(seed)
        t = fixtures.random_commuting_tuple(r, 4, 2)
        spec = joint_eigenvalues(t).points
        assert all(taylor_singular_at(t, lam) for lam in spec)
        assert not any(taylor_singular_at(t, lam)
                       for lam in draw_probes(r, spec, 50))

    @given(st.integers(0, 10**6), st.integers(1, 5))
    def test_unitary_conjugation_invariance(self, seed, n):
        r = np.random.default_rng(seed)
        t, _ = poly_tuple(seed, n)
        from jointspec.matrix_core import random_unitary
        u = random_unitary(n, r)
        a = joint_eigenvalues(t).points
        b = joint_eigenvalues(t.conjugated(u)).points
        assert match_multisets(a, b) <= 1e-6 * (1 + t.norm())

    @given(st.integers(0, 10**6))
    def test_batch_matches_single(self, seed):
        r = np.random.default_rng(seed)
        ts = [fixtures.random_commuting_tuple(r, 3, 2) for _ in range(4)]
        pts, res = joint_eigenvalues_batch(np.stack([np.stack(t.mats)
                                                     for t in ts]))
        for p, t in zip(pts, ts):
            assert match_multisets(p, joint_eigenvalues(t).points) < 1e-8


class TestErrors:
    def test_not_commuting(self):
        with pytest.raises(NotCommutingError):
            CommutingTuple.from_mats([N, N.T])

    def test_mixed_sizes(self):
        with pytest.raises(ShapeError):
            CommutingTuple.from_mats([np.eye(2), np.eye(3)])

    def test_wrong_point_length(self):
        with pytest.raises(ShapeError):
            taylor_singular_at(fixtures.diagonal_pair(), [1, 2, 3])

    def test_json_roundtrip(self):
        t = fixtures.diagonal_pair()
        back = tuple_from_json(tuple_to_json(t))
        assert all(np.array_equal(a, b) for a, b in zip(t.mats, back.mats))
        with pytest.raises(ShapeError):
            tuple_from_json({'d': 3, 'mats': tuple_to_json(t)['mats']})
