"""Varieties of pencil isometry models.

Samples the swap model (a distinguished variety, the diagonal of the
bidisk) and the model with P = I (a flat piece, not distinguished), prints
the extracted defining polynomial of each and writes the clouds as CSV and
SVG next to this script.
"""

from pathlib import Path

import numpy as np

from jointspec import fixtures
from jointspec.bcl_model import (distinguished_check, pair_defining_polys,
                                 purity_check, sample_variety, xi_vanishing)
from jointspec.sampling import DiskGrid, write_cloud_csv, write_svg

OUT = Path(__file__).parent / 'out'


def show(name, b, grid):
    s = sample_variety(b, grid)
    pp = pair_defining_polys(b)
    nu = [purity_check(b, j).nu for j in range(2)]
    res = distinguished_check(s)
    print(f'{name}: {len(s)} points, numerical radii {np.round(nu, 4)}, '
          f'distinguished = {res.is_distinguished}')
    print(f'  xi = {pp.xi} via {pp.method}, '
          f'max |xi| on cloud {xi_vanishing(pp.xi, s):.1e}')
    OUT.mkdir(exist_ok=True)
    write_cloud_csv(s, OUT / f'{name}.csv')
    write_svg(s, OUT / f'{name}.svg')


def main():
    grid = DiskGrid(16, 64)
    show('swap', fixtures.swap_pair(), grid)
    show('identity', fixtures.identity_pair(np.exp([0.5j, 2j])), grid)


if __name__ == '__main__':
    main()
