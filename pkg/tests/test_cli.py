import csv
import json

import numpy as np
import pytest

from jointspec import fixtures
from jointspec.bcl_model import bcl_to_json
from jointspec.cli import TOLERANCES, build_parser, main, pmap
from jointspec.ideal_support import PolyIdeal, ideal_to_json
from jointspec.mpoly import MPoly
from jointspec.rational_symbols import family_to_json
from jointspec.tuple_spectrum import tuple_to_json


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(tmp_path, *argv):
    out = tmp_path / 'out'
    code = main([*argv, '--out', str(out)])
    report = out / 'report.json'
    return code, (json.loads(report.read_text()) if report.exists() else None)


def test_annihilate_diagonal_pair(tmp_path):
    inp = write(tmp_path / 't.json', tuple_to_json(fixtures.diagonal_pair()))
    code, rep = run(tmp_path, 'annihilate', '--input', inp)
    assert code == 0 and rep['status'] == 'pass'
    assert rep['results']['max_residual'] < 1e-8
    assert rep['results']['zero_set_pass'] is True


def test_bcl_variety_swap(tmp_path):
    inp = write(tmp_path / 'b.json', bcl_to_json(fixtures.swap_pair()))
    code, rep = run(tmp_path, 'bcl-variety', '--input', inp,
                    '--grid-radii', '8', '--grid-angles', '32')
    assert code == 0 and rep['results']['distinguished'] is True
    rows = list(csv.DictReader(open(tmp_path / 'out' / 'cloud.csv')))
    assert len(rows) == 2 * (1 + 7 * 32)
    for r in rows:
        assert float(r['re_l1']) == float(r['re_l2'])
        assert float(r['im_l1']) == float(r['im_l2'])
    assert (tmp_path / 'out' / 'plot.svg').read_text().count('<circle') > 0


def test_no_svg(tmp_path):
    inp = write(tmp_path / 'b.json', bcl_to_json(fixtures.swap_pair()))
    run(tmp_path, 'bcl-variety', '--input', inp, '--grid-radii', '4',
        '--grid-angles', '8', '--no-svg')
    assert not (tmp_path / 'out' / 'plot.svg').exists()


def test_support_check_probe_file(tmp_path):
    z1, z2 = MPoly.var(0, 2), MPoly.var(1, 2)
    inp = write(tmp_path / 'i.json', ideal_to_json(PolyIdeal.of([z1 - z2])))
    pts = [[0.3, 0.3], [0.2j, 0.2j], [0, 1]]
    probes = write(tmp_path / 'p.json', {'points': [
        [{'re': float(np.real(c)), 'im': float(np.imag(c))} for c in p]
        for p in pts]})
    code, rep = run(tmp_path, 'support-check', '--input', inp,
                    '--probes', probes)
    assert code == 0
    assert [r['member'] for r in rep['results']['membership']] == \
        [True, True, False]


def test_pair_xi_identity(tmp_path):
    w = np.exp(1j * np.array([0.4, 2.5]))
    inp = write(tmp_path / 'b.json', bcl_to_json(fixtures.identity_pair(w)))
    code, rep = run(tmp_path, 'pair-xi', '--input', inp, '--grid-radii', '4',
                    '--grid-angles', '16')
    assert code == 0 and rep['results']['xi_vanishing'] <= 1e-6


def test_toeplitz_union_with_xi(tmp_path):
    fam, xi = fixtures.blaschke_family(np.random.default_rng(1))
    inp = write(tmp_path / 'f.json', {**family_to_json(fam),
                                      'xi': xi.to_json()})
    code, rep = run(tmp_path, 'toeplitz-union', '--input', inp,
                    '--grid-radii', '6', '--grid-angles', '12')
    assert code == 0 and rep['results']['nilpotency']['passes']


@pytest.mark.parametrize('cmd', ['joint-spectrum', 'koszul-check'])
def test_tuple_commands(tmp_path, cmd):
    t = fixtures.random_commuting_tuple(np.random.default_rng(0), 3, 2)
    inp = write(tmp_path / 't.json', tuple_to_json(t))
    code, rep = run(tmp_path, cmd, '--input', inp)
    assert code == 0 and rep['command'] == cmd


def test_check_failure_exit_1(tmp_path):
    # xi = 1 never vanishes, so the nilpotency check fails
    fam = fixtures.jordan_family()
    inp = write(tmp_path / 'f.json', {**family_to_json(fam),
                                      'xi': MPoly.const(1, 2).to_json()})
    code, rep = run(tmp_path, 'toeplitz-union', '--input', inp,
                    '--grid-radii', '3', '--grid-angles', '4')
    assert code == 1 and rep['status'] == 'fail'


def test_tolerance_override(tmp_path):
    inp = write(tmp_path / 't.json', tuple_to_json(fixtures.diagonal_pair()))
    code, rep = run(tmp_path, 'joint-spectrum', '--input', inp,
                    '--tol.triangular=1e-6')
    assert code == 0 and rep['tolerances']['triangular'] == 1e-6


@pytest.mark.parametrize('argv', [
    ['annihilate'],
    ['annihilate', '--input', 'missing.json'],
    ['joint-spectrum', '--input', '{bad}', '--tol.nope=1'],
    ['joint-spectrum', '--input', '{bad}', '--tol.koszul=abc'],
    ['joint-spectrum', '--input', '{bad}'],
    ['bcl-variety', '--input', '{tuple}'],
    ['pair-xi', '--input', '{tuple}'],
])
def test_input_errors_exit_2(tmp_path, argv, capsys):
    bad = tmp_path / 'bad.json'
    bad.write_text('{"d": 2, "mats": [}')
    tup = write(tmp_path / 't.json', tuple_to_json(fixtures.diagonal_pair()))
    argv = [a.replace('{bad}', str(bad)).replace('{tuple}', tup) for a in argv]
    assert main([*argv, '--out', str(tmp_path / 'o')]) == 2
    assert 'input error' in capsys.readouterr().err


def test_json_diagnostic_names_line(tmp_path, capsys):
    bad = tmp_path / 'bad.json'
    bad.write_text('{\n "d": 2,\n "mats": [}\n')
    main(['joint-spectrum', '--input', str(bad), '--out', str(tmp_path)])
    assert 'line 3' in capsys.readouterr().err


def test_verify_all_deterministic(tmp_path, monkeypatch):
    assert main(['verify-all', '--out', str(tmp_path / 'a')]) == 0
    monkeypatch.setenv('JOINTSPEC_THREADS', '4')
    assert main(['verify-all', '--out', str(tmp_path / 'b')]) == 0
    assert (tmp_path / 'a' / 'report.json').read_bytes() == \
        (tmp_path / 'b' / 'report.json').read_bytes()


def test_pmap_preserves_order(monkeypatch):
    monkeypatch.setenv('JOINTSPEC_THREADS', '3')
    assert pmap(lambda x: x * x, range(10)) == [x * x for x in range(10)]


def test_parser_lists_tolerances():
    assert all(name in build_parser().epilog for name in TOLERANCES)
