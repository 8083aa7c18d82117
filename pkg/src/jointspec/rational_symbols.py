"""Matrix-valued rational symbols on the closed polydisk.

A symbol is ``phi(z) = F(z) / q(z)`` with a polynomial matrix F and a
scalar polynomial q free of zeros on the closed polydisk.  Statements about
the (infinite-dimensional) multiplication tuples reduce to pointwise
statements about the symbol values.  This module samples unions of joint
spectra over the disk and checks annihilation by polynomials evaluated on
the symbols.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificationError, ShapeError
from .mpoly import (MPoly, PolyMatrix, det_poly_matrix, eval_matrix_batch,
                    eval_points, term_scale)
from .sampling import DiskGrid, VarietySample
from .tuple_spectrum import joint_eigenvalues_batch

__all__ = ['RationalMatrixFunction', 'SymbolFamily', 'eval_symbol',
           'spectrum_union_sample', 'full_tuple_union_sample',
           'nilpotency_annihilation_check', 'NilpotencyReport',
           'cleared_pa_polys', 'symbol_level_pa_check', 'SymbolCheckReport',
           'symbol_to_json', 'symbol_from_json', 'family_from_json',
           'family_to_json', 'DEFAULT_GRID']

log = logging.getLogger(__name__)

DEFAULT_GRID = DiskGrid(radii=24, angles=48)


@dataclass(frozen=True, eq=False)
class RationalMatrixFunction:
    """``F(z) / q(z)`` with certified denominator and contractivity.

    ``q_min`` is the smallest ``|q|`` and ``norm_max`` the largest
    ``||F/q||_2`` seen on the certification grid.
    """
    numerator: PolyMatrix
    denominator: MPoly
    q_min: float
    norm_max: float

    @property
    def n(self):
        return self.numerator.n

    @property
    def d(self):
        return self.numerator.nvars

    @classmethod
    def certify(cls, numerator, denominator, grid=DEFAULT_GRID, tol=1e-8,
                contractive=True):
        if numerator.nvars != denominator.nvars:
            raise ShapeError('numerator and denominator variable counts '
                             'differ')
        pts = grid.points(numerator.nvars)
        qv = np.abs(eval_points(denominator, pts))
        q_min = float(qv.min())
        if not q_min > tol:
            raise CertificationError(f'denominator nearly vanishes on the '
                                     f'closed polydisk (min |q| = {q_min:.3g})')
        vals = numerator.evaluate(pts) / eval_points(denominator, pts)[:, None,
                                                                       None]
        norm_max = float(np.linalg.norm(vals, ord=2, axis=(1, 2)).max())
        if contractive and norm_max > 1 + tol:
            raise CertificationError(f'symbol is not contractive '
                                     f'(max norm {norm_max:.6g})')
        return cls(numerator, denominator, q_min, norm_max)

    def evaluate(self, points):
        """Values at an (m, d) array of points; shape (m, n, n)."""
        pts = np.asarray(points, dtype=complex).reshape(-1, self.d)
        q = eval_points(self.denominator, pts)
        if np.any(np.abs(q) < self.q_min / 2):
            raise CertificationError('evaluation too close to a pole')
        return self.numerator.evaluate(pts) / q[:, None, None]


def eval_symbol(f, z):
    """``F(z) / q(z)`` at a single point of C^d.

    Points outside the closed polydisk are evaluated with a logged warning;
    contractivity is not asserted there.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(np.abs(z) > 1 + 1e-12):
        log.warning('evaluating a symbol outside the closed polydisk at %s', z)
    return f.evaluate(z[None, :])[0]


@dataclass(frozen=True, eq=False)
class SymbolFamily:
    symbols: tuple
    commutativity_residual: float

    @property
    def k(self):
        return len(self.symbols)

    @property
    def n(self):
        return self.symbols[0].n

    @property
    def d(self):
        return self.symbols[0].d

    @classmethod
    def certify(cls, symbols, grid=DEFAULT_GRID, tol=1e-8):
        symbols = tuple(symbols)
        if not symbols:
            raise ShapeError('a symbol family needs at least one member')
        n, d = symbols[0].n, symbols[0].d
        if any(s.n != n or s.d != d for s in symbols):
            raise ShapeError('symbols must share n and d')
        vals = [s.evaluate(grid.points(d)) for s in symbols]
        worst = 0.0
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                c = vals[i] @ vals[j] - vals[j] @ vals[i]
                worst = max(worst, float(np.linalg.norm(c, axis=(1, 2)).max()))
        if worst > tol:
            raise CertificationError(f'symbols do not commute on the grid '
                                     f'(residual {worst:.3g})')
        return cls(symbols, worst)

    def stack(self, points):
        """Symbol values as an (m, k, n, n) array."""
        return np.stack([s.evaluate(points) for s in self.symbols], axis=1)

    def adjoint(self):
        """Family of ``conj(phi(conj z))^T``, i.e. the adjoint symbols."""
        out = []
        for s in self.symbols:
            num = PolyMatrix([[s.numerator[c, r].conj() for c in range(s.n)]
                              for r in range(s.n)])
            out.append(RationalMatrixFunction(num, s.denominator.conj(),
                                              s.q_min, s.norm_max))
        return SymbolFamily(tuple(out), self.commutativity_residual)


def spectrum_union_sample(fam, grid=DEFAULT_GRID, seed=0):
    """Joint spectra of ``(phi_1(z), ..., phi_k(z))`` over the grid."""
    z = grid.points(fam.d)
    pts, res = joint_eigenvalues_batch(fam.stack(z), seed=seed,
                                       skip_failures=True)
    bad = np.isnan(pts).any(axis=(1, 2))
    skipped = [[complex(x) for x in row] for row in z[bad]]
    for row in skipped:
        log.warning('eigen-solve failed at z=%s; point skipped', row)
    z, pts, res = z[~bad], pts[~bad], res[~bad]
    sample = VarietySample(np.repeat(z, fam.n, axis=0),
                           pts.reshape(-1, fam.k), res.ravel(),
                           grid.to_json(), skipped)
    return sample.sorted()


def full_tuple_union_sample(fam, grid=DEFAULT_GRID, seed=0):
    """As `spectrum_union_sample` with the source prepended to each point.

    The coordinate multipliers ``z_j I`` have the single joint eigenvalue
    ``z``, so the points are ``(z, lambda)`` in C^(d+k).
    """
    s = spectrum_union_sample(fam, grid, seed)
    return VarietySample(s.sources, np.hstack([s.sources, s.points]),
                         s.residuals, s.grid_spec, s.skipped).sorted()


@dataclass
class NilpotencyReport:
    passes: bool
    r_used: int
    max_eig: float
    witnesses: list = field(default_factory=list)

    def to_json(self):
        return {'passes': bool(self.passes), 'r_used': int(self.r_used),
                'max_eig': float(self.max_eig), 'witnesses': self.witnesses}


def nilpotency_annihilation_check(fam, xi, grid=DEFAULT_GRID, tol=1e-8):
    """Test that ``M(z) = xi(phi_1(z), ..., phi_k(z))`` is nilpotent.

    For each grid point the smallest ``r <= n`` with
    ``||M^r||_F <= tol * (1 + ||M||_F)^r`` is found; ``r_used`` is the
    largest over the grid.  A grid point with no such r is a witness that
    xi does not vanish on the sampled spectrum; its largest eigenvalue
    modulus is reported alongside.
    """
    if xi.nvars != fam.k:
        raise ShapeError(f'xi has {xi.nvars} variables, family has '
                         f'k={fam.k}')
    z = grid.points(fam.d)
    m = eval_matrix_batch(xi, fam.stack(z))
    n = fam.n
    nrm = np.linalg.norm(m, axis=(1, 2))
    r_at = np.zeros(len(z), dtype=int)
    pw = m.copy()
    for r in range(1, n + 1):
        ok = (r_at == 0) & (np.linalg.norm(pw, axis=(1, 2))
                            <= tol * (1 + nrm) ** r)
        r_at[ok] = r
        pw = pw @ m
    eig = np.abs(np.linalg.eigvals(m)).max(axis=1)
    bad = np.nonzero(r_at == 0)[0]
    witnesses = [{'z': [[float(x.real), float(x.imag)] for x in z[i]],
                  'max_eig': float(eig[i])} for i in bad[:20]]
    return NilpotencyReport(passes=bad.size == 0,
                            r_used=int(r_at.max()) if bad.size == 0 else n + 1,
                            max_eig=float(eig.max()), witnesses=witnesses)


def cleared_pa_polys(fam, alphas):
    """Determinant family in the d + k variables ``(z, w)``.

    ``det(sum_i alpha_i p_i(z) (F_i(z) - w_i q_i(z) I))`` with
    ``p_i = prod_{j != i} q_j``.  Each member vanishes when the symbol
    values are substituted for w.
    """
    if alphas.d != fam.k:
        raise ShapeError(f'alphas have d={alphas.d}, family has k={fam.k}')
    d, k, n = fam.d, fam.k, fam.n
    nv = d + k

    def lift(p):
        return MPoly(nv, {e + (0,) * k: c for e, c in p.terms.items()})

    qs = [lift(s.denominator) for s in fam.symbols]
    ps = []
    for i in range(k):
        pi = MPoly.const(1, nv)
        for j in range(k):
            if j != i:
                pi = pi * qs[j]
        ps.append(pi)
    out = []
    for alpha in alphas.vectors:
        rows = []
        for r in range(n):
            row = [MPoly.zero(nv) for _ in range(n)]
            for i, s in enumerate(fam.symbols):
                if alpha[i] == 0:
                    continue
                for c in range(n):
                    e = lift(s.numerator[r, c])
                    if r == c:
                        e = e - MPoly.var(d + i, nv) * qs[i]
                    row[c] = row[c] + alpha[i] * ps[i] * e
            rows.append(row)
        out.append(det_poly_matrix(PolyMatrix(rows)))
    return out


@dataclass
class SymbolCheckReport:
    max_ratio: float
    passes: bool
    violations: list = field(default_factory=list)

    def to_json(self):
        return {'max_ratio': float(self.max_ratio),
                'passes': bool(self.passes), 'violations': self.violations}


def symbol_level_pa_check(fam, alphas, grid=DEFAULT_GRID, tol=1e-7):
    """Substitute ``(z_1 I, ..., z_d I, phi_1(z), ..., phi_k(z))`` into each
    cleared determinant and test for the zero matrix.

    The residual is compared to ``tol * term_scale`` at the spectral norms
    of the substituted matrices.
    """
    polys = cleared_pa_polys(fam, alphas)
    z = grid.points(fam.d)
    n = fam.n
    coords = np.einsum('mv,ab->mvab', z, np.eye(n))
    stack = np.concatenate([coords, fam.stack(z)], axis=1)
    sizes = np.linalg.norm(stack, ord=2, axis=(2, 3))
    worst = 0.0
    violations = []
    for alpha, p in zip(alphas.vectors, polys):
        res = np.linalg.norm(eval_matrix_batch(p, stack), axis=(1, 2))
        ratio = res / term_scale(p, sizes)
        worst = max(worst, float(ratio.max()))
        for i in np.nonzero(ratio > tol)[0][:20]:
            violations.append({'z': [[float(x.real), float(x.imag)]
                                     for x in z[i]],
                               'alpha': [[float(a.real), float(a.imag)]
                                         for a in alpha],
                               'ratio': float(ratio[i])})
    return SymbolCheckReport(max_ratio=worst, passes=not violations,
                             violations=violations)


def symbol_to_json(f):
    return {'n': f.n, 'd': f.d,
            'numerator': [[f.numerator[r, c].to_json() for c in range(f.n)]
                          for r in range(f.n)],
            'denominator': f.denominator.to_json()}


def symbol_from_json(obj, grid=DEFAULT_GRID, tol=1e-8):
    """Parse ``{"n", "d", "numerator": [[poly]], "denominator": poly}``."""
    try:
        n, d = int(obj['n']), int(obj['d'])
        num = PolyMatrix([[MPoly.from_json(e) for e in row]
                          for row in obj['numerator']])
        den = MPoly.from_json(obj['denominator'])
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f'malformed symbol object: {exc}')
    if num.n != n or num.nvars != d or den.nvars != d:
        raise ShapeError('symbol object fields disagree with n and d')
    return RationalMatrixFunction.certify(num, den, grid=grid, tol=tol)


def family_to_json(fam):
    return {'symbols': [symbol_to_json(s) for s in fam.symbols]}


def family_from_json(obj, grid=DEFAULT_GRID, tol=1e-8):
    """Parse ``{"symbols": [symbol, ...]}`` and certify commutativity."""
    try:
        items = obj['symbols']
    except (KeyError, TypeError) as exc:
        raise ShapeError(f'malformed family object: {exc}')
    return SymbolFamily.certify([symbol_from_json(s, grid, tol)
                                 for s in items], grid=grid, tol=tol)
