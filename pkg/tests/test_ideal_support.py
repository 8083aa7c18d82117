import numpy as np
import pytest
from hypothesis import given, strategies as st

from jointspec import fixtures
from jointspec.cayley_hamilton import (build_annihilators, draw_probes,
                                       moment_curve_alphas)
from jointspec.errors import ShapeError
from jointspec.ideal_support import (PolyIdeal, ideal_from_json,
                                     ideal_to_json, support_membership,
                                     support_ratio,
                                     support_spectrum_identity_check)
from jointspec.mpoly import MPoly
from jointspec.tuple_spectrum import CommutingTuple, joint_eigenvalues

z1, z2 = MPoly.var(0, 2), MPoly.var(1, 2)


class TestMembership:
    @pytest.mark.parametrize('c', [0, 0.5, 1j, -0.3 + 0.2j])
    def test_diagonal_on(self, c):
        assert support_membership(PolyIdeal.of([z1 - z2]), [c, c])

    def test_diagonal_off(self):
        assert not support_membership(PolyIdeal.of([z1 - z2]), [0, 1])

    def test_unit_ideal_is_empty(self, rng):
        j = PolyIdeal.of([MPoly.const(1, 2)])
        for lam in rng.standard_normal((20, 2)):
            assert not support_membership(j, lam)

    def test_annihilator_ideal_of_diagonal_pair(self):
        t = fixtures.diagonal_pair()
        j = PolyIdeal.of(build_annihilators(t, moment_curve_alphas(2, 2)).polys)
        probes = [[1, 3], [2, 4], [1, 4], [2, 3], [0, 0], [1.5, 3.5]]
        got = [support_membership(j, p) for p in probes]
        assert got == [True, True, False, False, False, False]

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            support_ratio(PolyIdeal.of([z1]), [1, 2, 3])
        with pytest.raises(ShapeError):
            PolyIdeal.of([])
        with pytest.raises(ShapeError):
            PolyIdeal(2, [z1, MPoly.var(0, 3)])

    def test_json_roundtrip(self):
        j = PolyIdeal.of([z1 - z2, z1 * z2])
        back = ideal_from_json(ideal_to_json(j))
        assert back.nvars == 2 and list(back.generators) == list(j.generators)
        with pytest.raises(ShapeError):
            ideal_from_json({'generators': []})


class TestIdentity:
    def test_contractive_diagonal_pair(self, rng):
        t = CommutingTuple.from_mats([np.diag([0.2, -0.5]),
                                      np.diag([0.1j, 0.6])])
        fam = build_annihilators(t, moment_curve_alphas(2, 2))
        probes = draw_probes(rng, joint_eigenvalues(t).points, 50, radius=1.0)
        rep = support_spectrum_identity_check(t, fam, probes)
        assert rep.agree and rep.checked == 52 and rep.inconclusive == 0

    def test_outside_polydisk_is_dropped(self):
        t = fixtures.diagonal_pair()
        fam = build_annihilators(t, moment_curve_alphas(2, 2))
        rep = support_spectrum_identity_check(t, fam, [[0.1, 0.2]])
        assert rep.agree and rep.checked == 1

    def test_swap_symbols_at_fixed_point(self):
        b = fixtures.swap_pair()
        z0 = 0.36
        t = CommutingTuple.from_mats(list(b.symbols(np.array([z0]))[0]))
        fam = build_annihilators(t, moment_curve_alphas(2, 2))
        spec = joint_eigenvalues(t).points
        assert np.allclose(sorted(spec[:, 0].real), [-0.6, 0.6])
        rep = support_spectrum_identity_check(t, fam, [[0.6, -0.6], [0, 0]])
        assert rep.agree and rep.checked == 4


@given(st.integers(0, 10**6), st.integers(2, 5))
def test_identity_on_random_contractions(seed, n):
    r = np.random.default_rng(seed)
    t = fixtures.random_commuting_tuple(r, n, 2, contractive=True)
    fam = build_annihilators(t, moment_curve_alphas(2, n))
    probes = draw_probes(r, joint_eigenvalues(t).points, 20, radius=1.0)
    rep = support_spectrum_identity_check(t, fam, probes)
    assert rep.agree, rep.disagreements
