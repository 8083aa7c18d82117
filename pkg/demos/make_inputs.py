"""Write example input files for every CLI command into demos/inputs/."""

import json
from pathlib import Path

import numpy as np

from jointspec import fixtures
from jointspec.bcl_model import bcl_to_json
from jointspec.ideal_support import PolyIdeal, ideal_to_json
from jointspec.mpoly import MPoly
from jointspec.rational_symbols import family_to_json
from jointspec.tuple_spectrum import tuple_to_json

OUT = Path(__file__).parent / 'inputs'


def dump(name, obj):
    OUT.mkdir(exist_ok=True)
    (OUT / name).write_text(json.dumps(obj, indent=1) + '\n')
    print('wrote', OUT / name)


def main():
    rng = np.random.default_rng(0)
    dump('diagonal_pair.json', tuple_to_json(fixtures.diagonal_pair()))
    dump('random_tuple.json',
         tuple_to_json(fixtures.random_commuting_tuple(rng, 4, 3)))
    dump('contractive_tuple.json', tuple_to_json(
        fixtures.random_commuting_tuple(rng, 3, 2, contractive=True)))
    dump('swap.json', bcl_to_json(fixtures.swap_pair()))
    dump('identity_pair.json', bcl_to_json(
        fixtures.identity_pair(np.exp(1j * np.array([0.4, 2.5])))))
    dump('generic_pair.json',
         bcl_to_json(fixtures.random_bcl_pair(rng, 'generic')))
    fam, xi = fixtures.blaschke_family(rng, n=2)
    dump('blaschke_family.json', {**family_to_json(fam), 'xi': xi.to_json()})
    z1, z2 = MPoly.var(0, 2), MPoly.var(1, 2)
    dump('diagonal_ideal.json', ideal_to_json(PolyIdeal.of([z1 - z2])))
    pts = [[0.3, 0.3], [0.5j, 0.5j], [0, 1], [0.2, -0.2]]
    dump('diagonal_probes.json', {'points': [
        [{'re': float(np.real(c)), 'im': float(np.imag(c))} for c in p]
        for p in pts]})


if __name__ == '__main__':
    main()
