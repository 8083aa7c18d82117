import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import poly_close
from jointspec import fixtures
from jointspec.bcl_model import (BCLData, annihilator_check_isometric,
                                 annihilator_polys, bcl_from_json,
                                 bcl_pair_from, bcl_to_json,
                                 direct_sum_variety, distinguished_check,
                                 pair_defining_polys, product_law_residual,
                                 purity_check, sample_variety, xi_vanishing)
from jointspec.cayley_hamilton import AlphaSet, moment_curve_alphas
from jointspec.errors import CertificationError
from jointspec.mpoly import MPoly
from jointspec.sampling import DiskGrid, VarietySample
from jointspec.tuple_spectrum import joint_eigenvalues

z1, z2 = MPoly.var(0, 2), MPoly.var(1, 2)
SMALL = DiskGrid(16, 64)
W = np.exp(1j * np.array([0.7, 2.9]))


def hausdorff_to_diagonal(pts):
    return float(np.abs(pts[:, 0] - pts[:, 1]).max()) / np.sqrt(2)


class TestConstruction:
    def test_unimodular_1x1(self):
        w = np.exp(0.4j)
        b = bcl_pair_from(np.eye(1), np.array([[w]]))
        phi = b.symbols(np.array([0.5]))[0]
        assert np.allclose(phi[0], 0.5 * w) and np.allclose(phi[1], np.conj(w))

    def test_swap_symbols(self):
        b = fixtures.swap_pair()
        z = 0.3 - 0.2j
        phi = b.symbols(np.array([z]))[0]
        target = np.array([[0, z], [1, 0]])
        assert np.allclose(phi[0], target) and np.allclose(phi[1], target)
        assert np.allclose(phi[0] @ phi[1], z * np.eye(2))

    def test_zero_projection(self):
        b = bcl_pair_from(np.zeros((2, 2)), np.eye(2))
        phi = b.symbols(np.array([0.6j]))[0]
        assert np.allclose(phi[0], np.eye(2))
        assert np.allclose(phi[1], 0.6j * np.eye(2))

    def test_rejects_non_projection(self):
        with pytest.raises(CertificationError):
            bcl_pair_from(np.diag([1.0, 0.5]), np.eye(2))

    def test_rejects_non_unitary(self):
        with pytest.raises(CertificationError):
            bcl_pair_from(np.eye(2), 2 * np.eye(2))

    def test_rejects_broken_product_law(self):
        p = np.diag([1.0, 0.0])
        u = np.array([[0, 1], [1, 0.0]])
        with pytest.raises(CertificationError):
            BCLData.from_lists([p, p], [u, np.eye(2)])

    def test_json_roundtrip(self):
        b = fixtures.swap_pair()
        back = bcl_from_json(bcl_to_json(b))
        assert all(np.array_equal(x, y)
                   for x, y in zip(b.unitaries, back.unitaries))


class TestPurity:
    def test_swap(self):
        r = purity_check(fixtures.swap_pair(), 0)
        assert r.pure and abs(r.nu - 0.5) < 1e-8

    def test_zero_projection(self):
        r = purity_check(bcl_pair_from(np.zeros((2, 2)), np.eye(2)), 0)
        assert not r.pure and abs(r.nu - 1) < 1e-8

    def test_identity_projection(self):
        r = purity_check(fixtures.identity_pair(W), 0)
        assert r.pure and r.nu < 1e-12


class TestVariety:
    def test_swap_is_diagonal(self):
        s = sample_variety(fixtures.swap_pair(), SMALL)
        assert hausdorff_to_diagonal(s.points) < 1e-12
        assert np.allclose(s.points[:, 0] ** 2, s.sources[:, 0])

    def test_swap_brute_force(self):
        # direct eigen-solve of lambda^2 = z on a 100 x 100 grid
        z = (np.linspace(0, 1, 100)[:, None]
             * np.exp(2j * np.pi * np.arange(100) / 100)).ravel()
        m = np.zeros((z.size, 2, 2), complex)
        m[:, 0, 1], m[:, 1, 0] = z, 1
        lam = np.linalg.eigvals(m)
        assert np.allclose(lam ** 2, z[:, None])

    def test_identity_pair_is_flat(self):
        s = sample_variety(fixtures.identity_pair(W), SMALL)
        wbar = np.conj(W)
        d = np.abs(s.points[:, 1][:, None] - wbar[None]).min(axis=1)
        assert d.max() < 1e-12
        assert np.abs(s.points.prod(axis=1) - s.sources[:, 0]).max() < 1e-12

    def test_zero_projection_variety(self):
        s = sample_variety(bcl_pair_from(np.zeros((2, 2)), np.eye(2)), SMALL)
        assert np.allclose(s.points[:, 0], 1)

    def test_distinguished_examples(self):
        assert distinguished_check(
            sample_variety(fixtures.swap_pair(), SMALL)).is_distinguished
        res = distinguished_check(
            sample_variety(fixtures.identity_pair(W[:1]), SMALL))
        assert not res.is_distinguished
        assert res.witnesses
        flat = bcl_pair_from(np.zeros((2, 2)), np.diag(W))
        assert not distinguished_check(sample_variety(flat, SMALL)) \
            .is_distinguished

    def test_no_interior_point(self):
        z = np.exp(2j * np.pi * np.arange(8) / 8)
        pts = np.column_stack([z, np.ones(8)])
        s = VarietySample(z[:, None], pts, np.zeros(8))
        res = distinguished_check(s)
        assert not res.is_distinguished
        assert res.witnesses[0]['kind'] == 'no_interior_point'


class TestPolys:
    def test_swap(self):
        b = fixtures.swap_pair()
        pp = pair_defining_polys(b)
        assert poly_close(pp.p1, z1 * (z1 - z2), 1e-10)
        # with the second pencil minus z_2 I the determinant is z_2 (z_2 - z_1)
        assert poly_close(pp.p2, z2 * (z2 - z1), 1e-10)
        assert poly_close(pp.xi, z1 - z2, 1e-8)
        assert xi_vanishing(pp.xi, sample_variety(b, SMALL)) < 1e-10

    @pytest.mark.parametrize('method', ['auto', 'gcd'])
    def test_identity_projection(self, method):
        b = fixtures.identity_pair(W)
        pp = pair_defining_polys(b, method=method)
        target = (z2 - np.conj(W[0])) * (z2 - np.conj(W[1]))
        assert poly_close(pp.xi, target, 1e-6)
        assert not pp.contradiction

    def test_zero_projection(self):
        pp = pair_defining_polys(bcl_pair_from(np.zeros((2, 2)), np.eye(2)))
        assert poly_close(pp.xi, (z1 - 1) ** 2, 1e-8)

    def test_swap_isometric_annihilator(self):
        b = fixtures.swap_pair()
        p = annihilator_polys(b, AlphaSet(2, np.array([[1.0, -1.0]])))[0]
        assert poly_close(p, (z2 - z1) ** 2, 1e-10)
        rep = annihilator_check_isometric(b, moment_curve_alphas(2, 2))
        assert rep.passes

    def test_zero_alpha(self):
        b = fixtures.swap_pair()
        p = annihilator_polys(b, AlphaSet(2, np.zeros((1, 2))))[0]
        assert p.is_zero()
        assert annihilator_check_isometric(
            b, AlphaSet(2, np.zeros((1, 2)))).passes


class TestDirectSum:
    def test_add_flat_piece(self):
        base = sample_variety(fixtures.swap_pair(), SMALL)
        out = direct_sum_variety(base, alphas_u=[1], grid=SMALL)
        f = (out.points[:, 0] - out.points[:, 1]) * (out.points[:, 0] - 1)
        assert np.abs(f).max() < 1e-12
        assert len(out) == len(base) + len(SMALL.points())

    def test_only_beta(self):
        out = direct_sum_variety(VarietySample.empty(2), betas_u=[-1],
                                 grid=SMALL)
        assert np.allclose(out.points[:, 1], -1)

    def test_unchanged(self):
        base = sample_variety(fixtures.swap_pair(), SMALL)
        out = direct_sum_variety(base, grid=SMALL)
        assert np.array_equal(out.points, base.points)

    def test_rejects_non_unimodular(self):
        with pytest.raises(CertificationError):
            direct_sum_variety(VarietySample.empty(2), alphas_u=[0.5])


class TestProperties:
    @given(st.integers(0, 10**6))
    def test_product_law_and_coordinates(self, seed):
        b = fixtures.random_bcl_pair(np.random.default_rng(seed))
        assert product_law_residual(b, SMALL) <= 1e-10
        s = sample_variety(b, DiskGrid(6, 24), seed=seed)
        assert np.abs(s.points.prod(axis=1) - s.sources[:, 0]).max() <= 1e-8

    @given(st.integers(0, 10**6))
    def test_distinguished_iff_pure(self, seed):
        b = fixtures.random_bcl_pair(np.random.default_rng(seed))
        pur = [purity_check(b, j) for j in range(2)]
        if any(p.inconclusive for p in pur):
            return
        s = sample_variety(b, DiskGrid(16, 64), seed=seed)
        assert distinguished_check(s).is_distinguished == all(
            p.pure for p in pur)

    @given(st.integers(0, 10**6))
    def test_xi_vanishes_on_cloud(self, seed):
        r = np.random.default_rng(seed)
        b = fixtures.random_bcl_pair(r)
        if b.n > 4:
            return
        pp = pair_defining_polys(b, seed=seed)
        assert xi_vanishing(pp.xi, sample_variety(b, DiskGrid(6, 24))) < 1e-6


@given(st.integers(0, 10**6))
def test_no_isolated_points(seed):
    # refining the grid 4x around a source z yields another variety point
    # within 0.1 of each sampled point
    r = np.random.default_rng(seed)
    b = fixtures.random_bcl_pair(r)
    grid = DiskGrid(8, 32)
    s = sample_variety(b, grid)
    step = 1 / (4 * (grid.radii - 1) ** 2)
    for i in r.choice(len(s), size=min(10, len(s)), replace=False):
        z = s.sources[i, 0]
        zr = z + step * np.exp(2j * np.pi * r.random())
        if abs(zr) > 1:
            zr = z - (zr - z)
        pts = joint_eigenvalues(list(b.symbols(np.array([zr]))[0])).points
        assert np.linalg.norm(pts - s.points[i], axis=1).min() <= 0.1
