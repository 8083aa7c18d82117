"""Command-line front end.

Every command reads JSON input, writes ``report.json`` (plus ``cloud.csv``
and ``plot.svg`` for point clouds) into the output directory, and exits with
0 when all checks pass, 1 on a failed or inconclusive check and 2 on bad
input.  Reports are deterministic for a fixed seed.
"""

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import bcl_model as bcl
from . import cayley_hamilton as ch
from . import fixtures
from . import ideal_support as isup
from . import rational_symbols as rs
from . import tuple_spectrum as ts
from .errors import InconclusiveError, JointSpecError
from .matrix_core import (det, eigenvalues, match_multisets, numerical_radius,
                          random_unitary, spectral_radius, svd_rank)
from .mpoly import (MPoly, PolyMatrix, approx_gcd_bivariate, det_poly_matrix,
                    eval_matrix_tuple, eval_scalar, poly_divide)
from .sampling import DiskGrid, write_cloud_csv, write_svg

__all__ = ['main', 'build_parser', 'COMMANDS', 'TOLERANCES']

log = logging.getLogger('jointspec')

COMMANDS = ('joint-spectrum', 'annihilate', 'koszul-check', 'bcl-variety',
            'pair-xi', 'toeplitz-union', 'support-check', 'verify-all')

TOLERANCES = {
    'triangular': 1e-8,
    'annihilate': 1e-6,
    'koszul': 1e-8,
    'product': 1e-10,
    'coordinate': 1e-8,
    'boundary': 1e-6,
    'gcd': 1e-8,
    'xi': 1e-6,
    'symbol': 1e-7,
    'nilpotent': 1e-8,
    'support': 1e-8,
}


class InputError(Exception):
    """Raised for unreadable or schema-violating input (exit status 2)."""


def _threads():
    try:
        return max(1, int(os.environ.get('JOINTSPEC_THREADS', '1')))
    except ValueError:
        return 1


def pmap(fn, items):
    """Order-preserving map, threaded up to ``JOINTSPEC_THREADS``."""
    items = list(items)
    k = _threads()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))


def _num(x):
    """Round floats so reports are stable across platforms."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not np.isfinite(x):
            return str(x)
        return float(f'{x:.10g}')
    if isinstance(x, complex):
        return {'re': _num(x.real), 'im': _num(x.imag)}
    if isinstance(x, dict):
        return {str(k): _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    if isinstance(x, np.ndarray):
        return _num(x.tolist())
    return x


def _points_json(pts):
    return [[{'re': _num(c.real), 'im': _num(c.imag)} for c in row]
            for row in np.asarray(pts, dtype=complex)]


def _points_from_json(obj, d):
    try:
        pts = np.array([[complex(c['re'], c.get('im', 0.0)) for c in row]
                        for row in obj], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f'malformed point list: {exc}')
    if pts.size == 0:
        return pts.reshape(0, d)
    if pts.ndim != 2 or pts.shape[1] != d:
        raise InputError(f'points must have {d} coordinates')
    return pts


def _load(path):
    if path is None:
        raise InputError('--input is required for this command')
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f'cannot read {path}: {exc}')
    except json.JSONDecodeError as exc:
        raise InputError(f'{path}: line {exc.lineno}, column {exc.colno}: '
                         f'{exc.msg}')


def _parse_tols(extra):
    tols = dict(TOLERANCES)
    for item in extra:
        if not item.startswith('--tol.') or '=' not in item:
            raise InputError(f'unrecognized argument {item!r}')
        name, _, val = item[len('--tol.'):].partition('=')
        if name not in tols:
            raise InputError(f'unknown tolerance {name!r}; known: '
                             f'{", ".join(sorted(tols))}')
        try:
            tols[name] = float(val)
        except ValueError:
            raise InputError(f'tolerance {name} needs a float, got {val!r}')
        if not tols[name] > 0:
            raise InputError(f'tolerance {name} must be positive')
    return tols


def _grid(args, default):
    return DiskGrid(radii=args.grid_radii or default.radii,
                    angles=args.grid_angles or default.angles)


def _status(ok):
    return 'pass' if ok else 'fail'


def _probes(args, rng, spec, d, count=100, radius=2.0):
    if args.probes:
        return _points_from_json(_load(args.probes).get('points', []), d)
    return ch.draw_probes(rng, spec, count, radius=radius)


def _joint_norm(t):
    return float(np.linalg.norm(np.stack(t.mats)))


def _tuple(obj):
    try:
        return ts.tuple_from_json(obj)
    except (JointSpecError, ValueError, KeyError, TypeError) as exc:
        raise InputError(str(exc))


# -- commands ----------------------------------------------------------------

def cmd_joint_spectrum(args, tols, rng, out):
    t = _tuple(_load(args.input))
    js = ts.joint_eigenvalues(t, seed=args.seed, tol=tols['triangular'])
    ok = js.residual <= tols['triangular']
    return _status(ok), {'spectrum': ts.spectrum_to_json(js),
                         'comm_residual': t.comm_residual}


def cmd_annihilate(args, tols, rng, out):
    t = _tuple(_load(args.input))
    fam = ch.build_annihilators(t, ch.moment_curve_alphas(t.d, t.n))
    spec = ts.joint_eigenvalues(t, seed=args.seed).points
    probes = _probes(args, rng, spec, t.d)
    rep = ch.spectrum_as_variety_check(t, fam, probes, tol=tols['annihilate'],
                                       seed=args.seed)
    bound = tols['annihilate'] * (1 + _joint_norm(t)) ** t.n
    ok = fam.max_residual <= bound and rep.zero_set_pass
    return _status(ok), {'alphas': int(fam.alphas.count),
                         'max_residual': fam.max_residual,
                         'residual_bound': bound,
                         'polys': [p.to_json() for p in fam.polys],
                         **rep.to_json()}


def cmd_koszul_check(args, tols, rng, out):
    t = _tuple(_load(args.input))
    spec = ts.joint_eigenvalues(t, seed=args.seed).points
    probes = _probes(args, rng, spec, t.d, count=50)
    rows = []
    inconclusive = 0
    ok = True
    for lam, member in [(x, True) for x in spec] + \
            [(x, bool(np.min(np.linalg.norm(spec - x, axis=1)) <= 1e-6))
             for x in probes]:
        try:
            sing = ts.taylor_singular_at(t, lam, tol=tols['koszul'])
        except InconclusiveError:
            inconclusive += 1
            rows.append({'point': _points_json([lam])[0],
                         'status': 'inconclusive'})
            continue
        ok &= sing == member
        rows.append({'point': _points_json([lam])[0], 'singular': sing,
                     'joint_eigenvalue': member})
    status = _status(ok) if not inconclusive or not ok else 'inconclusive'
    return status, {'checks': rows, 'inconclusive': inconclusive}


def _load_bcl(args):
    try:
        return bcl.bcl_from_json(_load(args.input))
    except JointSpecError as exc:
        raise InputError(str(exc))


def _emit_cloud(sample, out, svg):
    write_cloud_csv(sample, out / 'cloud.csv')
    if svg:
        write_svg(sample, out / 'plot.svg')


def cmd_bcl_variety(args, tols, rng, out):
    b = _load_bcl(args)
    grid = _grid(args, DiskGrid())
    sample = bcl.sample_variety(b, grid, seed=args.seed)
    _emit_cloud(sample, out, args.svg)
    prod = bcl.product_law_residual(b, grid)
    coord = float(np.abs(sample.points.prod(axis=1)
                         - sample.sources[:, 0]).max()) if len(sample) else 0.0
    purity = [bcl.purity_check(b, j) for j in range(b.d)]
    dist = bcl.distinguished_check(sample, tols['boundary'])
    all_pure = all(p.pure for p in purity)
    inconclusive = any(p.inconclusive for p in purity)
    ok = (prod <= tols['product'] and coord <= tols['coordinate']
          and dist.is_distinguished == all_pure)
    status = 'inconclusive' if inconclusive and ok else _status(ok)
    return status, {
        'points': len(sample), 'skipped': len(sample.skipped),
        'product_law_residual': prod, 'coordinate_product_defect': coord,
        'purity': [{'j': j, 'pure': p.pure, 'nu': p.nu,
                    'power_norm': p.power_norm,
                    'inconclusive': p.inconclusive}
                   for j, p in enumerate(purity)],
        'distinguished': dist.is_distinguished,
        'witnesses': dist.witnesses[:10], 'grid': grid.to_json()}


def cmd_pair_xi(args, tols, rng, out):
    b = _load_bcl(args)
    if b.d != 2:
        raise InputError('pair-xi needs a model with d = 2')
    grid = _grid(args, DiskGrid(16, 64))
    pp = bcl.pair_defining_polys(b, tol=tols['gcd'], seed=args.seed)
    sample = bcl.sample_variety(b, grid, seed=args.seed)
    _emit_cloud(sample, out, args.svg)
    van = bcl.xi_vanishing(pp.xi, sample)
    ok = van <= tols['xi'] and not pp.contradiction
    return _status(ok), {'p1': pp.p1.to_json(), 'p2': pp.p2.to_json(),
                         'xi': pp.xi.to_json(), 'xi_text': repr(pp.xi),
                         'method': pp.method, 'xi_vanishing': van,
                         'contradiction': pp.contradiction}


def cmd_toeplitz_union(args, tols, rng, out):
    obj = _load(args.input)
    try:
        fam = rs.family_from_json(obj)
        xi = MPoly.from_json(obj['xi']) if 'xi' in obj else None
    except (JointSpecError, KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc))
    grid = _grid(args, rs.DEFAULT_GRID)
    sample = rs.spectrum_union_sample(fam, grid, seed=args.seed)
    _emit_cloud(sample, out, args.svg)
    contr = float(np.abs(sample.points).max()) if len(sample) else 0.0
    pa = rs.symbol_level_pa_check(fam, ch.moment_curve_alphas(fam.k, fam.n),
                                  grid, tol=tols['symbol'])
    res = {'points': len(sample), 'max_modulus': contr,
           'symbol_check': pa.to_json()}
    ok = contr <= 1 + 1e-8 and pa.passes
    if xi is not None:
        nil = rs.nilpotency_annihilation_check(fam, xi, grid,
                                               tol=tols['nilpotent'])
        res['nilpotency'] = nil.to_json()
        ok &= nil.passes
    return _status(ok), res


def cmd_support_check(args, tols, rng, out):
    obj = _load(args.input)
    try:
        ideal = isup.ideal_from_json(obj['ideal'] if 'ideal' in obj else obj)
    except (JointSpecError, KeyError, TypeError) as exc:
        raise InputError(str(exc))
    pts = obj.get('points', [])
    if args.probes:
        pts = _load(args.probes).get('points', [])
    pts = _points_from_json(pts, ideal.nvars)
    rows = [{'point': _points_json([p])[0],
             'ratio': isup.support_ratio(ideal, p),
             'member': isup.support_membership(ideal, p, tols['support'])}
            for p in pts]
    res = {'membership': rows}
    ok = True
    if 'tuple' in obj:
        t = _tuple(obj['tuple'])
        fam = ch.build_annihilators(t, ch.moment_curve_alphas(t.d, t.n))
        rep = isup.support_spectrum_identity_check(t, fam, pts,
                                                   tol=tols['support'],
                                                   seed=args.seed)
        res['identity'] = rep.to_json()
        ok = rep.agree
    return _status(ok), res


# -- verify-all ------------------------------------------------------------

def _check(name, ok, **values):
    return {'name': name, 'pass': bool(ok), **values}


def _suite_matrix_core(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    b = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    q = random_unitary(5, rng)
    ev = match_multisets(eigenvalues(q @ a @ q.conj().T), eigenvalues(a))
    rel = abs(det(a @ b) - det(a) * det(b)) / abs(det(a) * det(b))
    nu = numerical_radius(a)
    jordan = numerical_radius(np.array([[0, 0], [1, 0]]))
    return [
        _check('unitary_invariance', ev <= 1e-8 * (1 + np.linalg.norm(a)),
               distance=ev),
        _check('det_multiplicative', rel <= 1e-9, rel_error=rel),
        _check('radius_bounds', spectral_radius(a) - 1e-8 <= nu
               <= np.linalg.norm(a, 2) + 1e-8, nu=nu),
        _check('radius_jordan', abs(jordan - 0.5) <= 1e-8, nu=jordan),
        _check('rank_outer', svd_rank(np.outer(a[0], b[0])) == 1),
    ]


def _suite_mpoly(seed):
    z1, z2 = MPoly.var(0, 2), MPoly.var(1, 2)
    g = approx_gcd_bivariate((z1 - z2) * (z1 + 1), (z1 - z2) * (z2 + 1))
    _, res = poly_divide((z1 - z2) * (z1 + 1), g)
    w = 2 + 1j
    m = PolyMatrix([[-z1, MPoly.const(w, 2)], [MPoly.const(1, 2), -z1]])
    dp = det_poly_matrix(m)
    a = np.random.default_rng(seed).standard_normal((3, 3))
    cp = MPoly.from_univariate(np.poly(a)[::-1], 0, 1)
    cay = float(np.linalg.norm(eval_matrix_tuple(cp, [a])))
    return [
        _check('gcd_degree', g.total_degree() == 1, gcd=repr(g)),
        _check('gcd_divides', res <= 1e-6, residual=res),
        _check('det_2x2', abs(eval_scalar(dp, [1.5, 0]) - (2.25 - w)) <= 1e-10),
        _check('cayley_hamilton_1d', cay <= 1e-10, residual=cay),
    ]


def _suite_tuple_spectrum(seed):
    rng = np.random.default_rng(seed)
    t = fixtures.diagonal_pair()
    pts = ts.joint_eigenvalues(t).points
    out = [_check('diagonal_pair', match_multisets(
        pts, np.array([[1, 3], [2, 4]])) <= 1e-12)]
    agree = True
    for _ in range(3):
        tt = fixtures.random_commuting_tuple(rng, 4, 2)
        spec = ts.joint_eigenvalues(tt).points
        for lam in spec:
            agree &= ts.taylor_singular_at(tt, lam)
        for lam in ch.draw_probes(rng, spec, 10):
            agree &= not ts.taylor_singular_at(tt, lam)
    out.append(_check('koszul_oracle', agree))
    return out


def _suite_cayley_hamilton(seed):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(3):
        t = fixtures.random_commuting_tuple(rng, 3, 2)
        fam = ch.build_annihilators(t, ch.moment_curve_alphas(2, 3))
        bound = 1e-6 * (1 + _joint_norm(t)) ** 3
        out.append(_check(f'annihilation_{i}', fam.max_residual <= bound,
                          residual=fam.max_residual))
    t = fixtures.diagonal_pair()
    fam = ch.build_annihilators(t, ch.moment_curve_alphas(2, 2))
    rep = ch.spectrum_as_variety_check(t, fam, [[1, 4], [2, 3], [0, 0]])
    out.append(_check('zero_set_diagonal', rep.zero_set_pass))
    return out


def _suite_bcl(seed):
    b = fixtures.swap_pair()
    grid = DiskGrid(16, 64)
    s = bcl.sample_variety(b, grid)
    pp = bcl.pair_defining_polys(b)
    ident = fixtures.identity_pair(np.exp(1j * np.array([0.3, 2.0])))
    si = bcl.sample_variety(ident, grid)
    return [
        _check('swap_product_law',
               bcl.product_law_residual(b, grid) <= 1e-10),
        _check('swap_diagonal', float(np.abs(s.points[:, 0]
                                             - s.points[:, 1]).max()) <= 1e-8),
        _check('swap_pure', all(bcl.purity_check(b, j).pure
                                for j in range(2))),
        _check('swap_distinguished', bcl.distinguished_check(s)
               .is_distinguished),
        _check('swap_xi', pp.xi.total_degree() == 1
               and bcl.xi_vanishing(pp.xi, s) <= 1e-6, xi=repr(pp.xi)),
        _check('identity_not_distinguished',
               not bcl.distinguished_check(si).is_distinguished),
    ]


def _suite_rational(seed):
    fam = fixtures.jordan_family()
    z1, z2 = MPoly.var(0, 2), MPoly.var(1, 2)
    nil = rs.nilpotency_annihilation_check(fam, z1 - z2)
    bf, xi = fixtures.blaschke_family(np.random.default_rng(seed))
    pa = rs.symbol_level_pa_check(bf, ch.moment_curve_alphas(2, bf.n))
    nb = rs.nilpotency_annihilation_check(bf, xi)
    return [
        _check('jordan_index', nil.passes and nil.r_used == 2,
               r_used=nil.r_used),
        _check('blaschke_symbol_level', pa.passes, max_ratio=pa.max_ratio),
        _check('blaschke_nilpotency', nb.passes and nb.r_used <= bf.n,
               r_used=nb.r_used),
    ]


def _suite_ideal(seed):
    rng = np.random.default_rng(seed)
    z1, z2 = MPoly.var(0, 2), MPoly.var(1, 2)
    diag = isup.PolyIdeal.of([z1 - z2])
    t = fixtures.random_commuting_tuple(rng, 3, 2, contractive=True)
    fam = ch.build_annihilators(t, ch.moment_curve_alphas(2, 3))
    probes = ch.draw_probes(rng, ts.joint_eigenvalues(t).points, 20,
                            radius=1.0)
    rep = isup.support_spectrum_identity_check(t, fam, probes)
    return [
        _check('diagonal_member', isup.support_membership(diag, [0.3, 0.3])),
        _check('diagonal_nonmember',
               not isup.support_membership(diag, [0, 1])),
        _check('three_way_identity', rep.agree, checked=rep.checked),
    ]


SUITES = (('matrix_core', _suite_matrix_core), ('mpoly', _suite_mpoly),
          ('tuple_spectrum', _suite_tuple_spectrum),
          ('cayley_hamilton', _suite_cayley_hamilton),
          ('bcl_model', _suite_bcl), ('rational_symbols', _suite_rational),
          ('ideal_support', _suite_ideal))


def cmd_verify_all(args, tols, rng, out):
    def run(item):
        name, fn = item
        try:
            return name, fn(args.seed)
        except JointSpecError as exc:
            return name, [_check('error', False,
                                 error=f'{type(exc).__name__}: {exc}')]
    results = dict(pmap(run, SUITES))
    ok = all(c['pass'] for checks in results.values() for c in checks)
    return _status(ok), {'suites': results}


HANDLERS = {'joint-spectrum': cmd_joint_spectrum, 'annihilate': cmd_annihilate,
            'koszul-check': cmd_koszul_check, 'bcl-variety': cmd_bcl_variety,
            'pair-xi': cmd_pair_xi, 'toeplitz-union': cmd_toeplitz_union,
            'support-check': cmd_support_check,
            'verify-all': cmd_verify_all}


def build_parser():
    p = argparse.ArgumentParser(
        prog='jointspec',
        description='Joint spectra of commuting matrix tuples and pencil '
                    'models.',
        epilog='Tolerances are overridden with --tol.<name>=<float>; known '
               'names: ' + ', '.join(sorted(TOLERANCES)) + '.')
    p.add_argument('command', choices=COMMANDS)
    p.add_argument('--input', help='input JSON file')
    p.add_argument('--out', default='jointspec-out',
                   help='output directory (created if missing)')
    p.add_argument('--probes', help='JSON file with {"points": [...]}')
    p.add_argument('--grid-radii', type=int, default=None)
    p.add_argument('--grid-angles', type=int, default=None)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--svg', dest='svg', action='store_true', default=True)
    p.add_argument('--no-svg', dest='svg', action='store_false')
    p.add_argument('-v', '--verbose', action='store_true')
    return p


def main(argv=None):
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else
                        logging.WARNING, format='%(levelname)s: %(message)s')
    out = Path(args.out)
    try:
        tols = _parse_tols(extra)
        if args.seed < 0:
            raise InputError('--seed must be nonnegative')
        for name in ('grid_radii', 'grid_angles'):
            v = getattr(args, name)
            if v is not None and v < 2:
                raise InputError(f'--{name.replace("_", "-")} must be >= 2')
        out.mkdir(parents=True, exist_ok=True)
        rng = np.random.default_rng(args.seed)
        status, results = HANDLERS[args.command](args, tols, rng, out)
    except InputError as exc:
        print(f'jointspec: input error: {exc}', file=sys.stderr)
        return 2
    except InconclusiveError as exc:
        status, results = 'inconclusive', {'error': str(exc)}
    except JointSpecError as exc:
        status, results = 'fail', {'error': f'{type(exc).__name__}: {exc}'}
    report = {'command': args.command, 'seed': args.seed, 'status': status,
              'tolerances': tols, 'results': results}
    text = json.dumps(_num(report), sort_keys=True, indent=2)
    (out / 'report.json').write_text(text + '\n')
    print(f'{args.command}: {status} (report in {out / "report.json"})')
    return 0 if status == 'pass' else 1


if __name__ == '__main__':
    sys.exit(main())
