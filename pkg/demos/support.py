"""Support of the annihilating ideal against joint eigenvalues and the
Koszul test, at a few points of the closed bidisk."""

import numpy as np

from jointspec import fixtures
from jointspec.cayley_hamilton import build_annihilators, moment_curve_alphas
from jointspec.ideal_support import PolyIdeal, support_ratio
from jointspec.tuple_spectrum import joint_eigenvalues, taylor_singular_at


def main():
    t = fixtures.random_commuting_tuple(np.random.default_rng(2), 3, 2,
                                        contractive=True)
    ideal = PolyIdeal.of(build_annihilators(t, moment_curve_alphas(2, 3)).polys)
    spec = joint_eigenvalues(t).points
    cands = list(spec) + [np.array([0.1, -0.2j]), spec[0] + 0.05]
    print('point                          support ratio   Koszul singular')
    for lam in cands:
        print(f'{np.round(lam, 3)!s:30} {support_ratio(ideal, lam):13.2e}'
              f'   {taylor_singular_at(t, lam)}')


if __name__ == '__main__':
    main()
