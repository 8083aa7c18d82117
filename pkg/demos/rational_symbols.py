"""Commuting rational symbols and their joint spectra.

A seeded family of Blaschke-type symbols is sampled over the disk; the
cleared determinant family vanishes on the symbol values, and the product
of branch resultants evaluated on the symbols is nilpotent.  The Jordan
family shows a nilpotency index equal to the matrix size.
"""

import numpy as np

from jointspec import fixtures
from jointspec.cayley_hamilton import moment_curve_alphas
from jointspec.mpoly import MPoly
from jointspec.rational_symbols import (nilpotency_annihilation_check,
                                        spectrum_union_sample,
                                        symbol_level_pa_check)


def main():
    fam, xi = fixtures.blaschke_family(np.random.default_rng(4), n=2)
    s = spectrum_union_sample(fam)
    print(f'{len(s)} points, max modulus {np.abs(s.points).max():.6f}')
    rep = symbol_level_pa_check(fam, moment_curve_alphas(2, fam.n))
    print(f'symbol-level determinant check: max ratio {rep.max_ratio:.1e}')
    nil = nilpotency_annihilation_check(fam, xi)
    print(f'xi on the symbols: nilpotent = {nil.passes}, index {nil.r_used}')

    w1, w2 = MPoly.var(0, 2), MPoly.var(1, 2)
    jr = nilpotency_annihilation_check(fixtures.jordan_family(), w1 - w2)
    print(f'Jordan family: index {jr.r_used} for n = 2')


if __name__ == '__main__':
    main()
