"""Sparse multivariate polynomials with complex coefficients.

`MPoly` stores a mapping from exponent tuples to coefficients.  Besides the
usual ring operations the module evaluates polynomials at points and at
commuting matrix tuples, computes determinants of polynomial matrices by
evaluation and interpolation on a torus grid, and extracts an approximate
greatest common divisor of two bivariate polynomials.
"""

from itertools import product
from types import MappingProxyType

import numpy as np
import scipy.linalg

from .errors import DegreeOverflowError, InconclusiveError, ShapeError
from .tuple_spectrum import CommutingTuple

__all__ = ['MPoly', 'PolyMatrix', 'eval_scalar', 'eval_points',
           'eval_matrix_tuple', 'eval_matrix_batch', 'det_poly_matrix', 'approx_gcd_bivariate',
           'poly_divide', 'poly_scale', 'DROP_REL', 'DEGREE_CAP']

DROP_REL = 1e-12
DEGREE_CAP = 64
GRID_CAP = 1 << 21


class MPoly:
    """Polynomial in `nvars` variables, stored sparsely.

    >>> z1, z2 = MPoly.var(0, 2), MPoly.var(1, 2)
    >>> p = z1 * z1 - z2
    >>> p((1 + 1j, 2j))
    0j
    """

    __slots__ = ('nvars', '_terms')

    def __init__(self, nvars, terms=None, drop=0.0):
        if nvars < 1:
            raise ShapeError('a polynomial needs at least one variable')
        self.nvars = int(nvars)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars or min(exp) < 0:
                raise ShapeError(f'bad exponent {exp} for nvars={self.nvars}')
            c = complex(c)
            if not np.isfinite(c):
                raise ShapeError('non-finite coefficient')
            if abs(c) > drop and c != 0:
                clean[exp] = clean.get(exp, 0) + c
        self._terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, c, nvars):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i, nvars):
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1.0})

    @classmethod
    def from_univariate(cls, coeffs, var, nvars):
        """Polynomial ``sum_k coeffs[k] z_var^k``."""
        terms = {}
        for k, c in enumerate(coeffs):
            exp = [0] * nvars
            exp[var] = k
            terms[tuple(exp)] = c
        return cls(nvars, terms)

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def is_zero(self):
        return not self._terms

    def total_degree(self):
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    def degree(self, i):
        if not self._terms:
            return 0
        return max(e[i] for e in self._terms)

    def degrees(self):
        return tuple(self.degree(i) for i in range(self.nvars))

    def coeff(self, exp):
        return self._terms.get(tuple(exp), 0j)

    def coeff_norm(self, ord=1):
        if not self._terms:
            return 0.0
        return float(np.linalg.norm(np.fromiter(self._terms.values(), complex),
                                    ord))

    def sorted_terms(self):
        return sorted(self._terms.items())

    def chop(self, rel=DROP_REL, abs_tol=0.0):
        """Drop coefficients below ``max(rel * max|c|, abs_tol)``."""
        if not self._terms:
            return self
        cut = max(rel * max(abs(c) for c in self._terms.values()), abs_tol)
        return MPoly(self.nvars, {e: c for e, c in self._terms.items()
                                  if abs(c) > cut})

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ShapeError(f'nvars mismatch: {self.nvars} vs {other.nvars}')
            return other
        return MPoly.const(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return MPoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return MPoly(self.nvars,
                         {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MPoly(self.nvars, terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / complex(scalar))

    def __pow__(self, k):
        if int(k) != k or k < 0:
            raise ValueError('only nonnegative integer powers are supported')
        out = MPoly.const(1.0, self.nvars)
        base = self
        k = int(k)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.sorted_terms())))

    def __call__(self, point):
        return eval_scalar(self, point)

    def __repr__(self):
        if not self._terms:
            return f'MPoly({self.nvars}, 0)'
        parts = []
        for e, c in self.sorted_terms():
            mono = '*'.join(f'z{i + 1}^{k}' if k > 1 else f'z{i + 1}'
                            for i, k in enumerate(e) if k)
            parts.append(f'({c:.6g})' + (f'*{mono}' if mono else ''))
        return f'MPoly({self.nvars}, ' + ' + '.join(parts) + ')'

    def conj(self):
        """Polynomial with conjugated coefficients."""
        return MPoly(self.nvars, {e: c.conjugate() for e, c in self._terms.items()})

    def leading_term(self, order=None):
        """Leading (exponent, coefficient) in lex order of `order` variables.

        `order` lists variable indices from most to least significant; the
        default ranks the last variable highest.
        """
        if not self._terms:
            raise ValueError('the zero polynomial has no leading term')
        if order is None:
            order = list(range(self.nvars))[::-1]
        e = max(self._terms, key=lambda ex: tuple(ex[i] for i in order))
        return e, self._terms[e]

    def monic(self, order=None):
        _, c = self.leading_term(order)
        return self / c

    def to_json(self):
        return {'nvars': self.nvars,
                'terms': [{'exp': list(e), 're': float(c.real),
                           'im': float(c.imag)} for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, obj):
        try:
            nvars = int(obj['nvars'])
            terms = {}
            for t in obj['terms']:
                e = tuple(int(x) for x in t['exp'])
                terms[e] = terms.get(e, 0) + complex(float(t.get('re', 0.0)),
                                                     float(t.get('im', 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeError(f'malformed polynomial object: {exc}')
        return cls(nvars, terms)


def poly_scale(p, point):
    """Size of ``|p(point)|`` expected from the coefficients alone.

    ``1 + sum|c| * (1 + ||point||)^deg``; used to make vanishing tests
    scale-aware.
    """
    r = 1.0 + float(np.linalg.norm(np.asarray(point, dtype=complex)))
    return 1.0 + p.coeff_norm(1) * r ** p.total_degree()


def term_scale(p, sizes):
    """``1 + sum_e |c_e| prod_v sizes[v]^e_v`` for rows of `sizes`.

    `sizes` has shape (m, nvars) and holds the magnitudes (or norms)
    substituted for each variable; the result bounds the rounding floor of
    an evaluation.
    """
    sizes = np.atleast_2d(np.asarray(sizes, dtype=float))
    out = np.ones(sizes.shape[0])
    for e, c in p.sorted_terms():
        out += abs(c) * np.prod(sizes ** np.asarray(e), axis=1)
    return out


def eval_scalar(p, point):
    """Evaluate `p` at a point of C^nvars.

    Powers of every coordinate are tabulated by repeated multiplication and
    terms are summed in sorted exponent order.
    """
    x = np.asarray(point, dtype=complex).ravel()
    if x.size != p.nvars:
        raise ShapeError(f'point has length {x.size}, polynomial has '
                         f'nvars={p.nvars}')
    if p.is_zero():
        return 0j
    pows = []
    for i in range(p.nvars):
        row = [1 + 0j]
        for _ in range(p.degree(i)):
            row.append(row[-1] * x[i])
        pows.append(row)
    total = 0j
    for e, c in p.sorted_terms():
        term = c
        for i, k in enumerate(e):
            if k:
                term *= pows[i][k]
        total += term
    return complex(total)


def eval_points(p, points, chunk=4096):
    """Vectorized evaluation at an (m, nvars) array of points."""
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[:, None] if p.nvars == 1 else pts[None, :]
    if pts.shape[1] != p.nvars:
        raise ShapeError(f'points have {pts.shape[1]} coordinates, polynomial '
                         f'has nvars={p.nvars}')
    out = np.zeros(pts.shape[0], dtype=complex)
    if p.is_zero():
        return out
    items = p.sorted_terms()
    exps = np.array([e for e, _ in items])
    coef = np.array([c for _, c in items])
    degs = exps.max(axis=0)
    for lo in range(0, pts.shape[0], chunk):
        blk = pts[lo:lo + chunk]
        mono = np.ones((blk.shape[0], len(items)), dtype=complex)
        for i in range(p.nvars):
            if degs[i] == 0:
                continue
            pw = np.cumprod(np.concatenate(
                [np.ones((blk.shape[0], 1), complex),
                 np.repeat(blk[:, i:i + 1], degs[i], axis=1)], axis=1), axis=1)
            mono *= pw[:, exps[:, i]]
        out[lo:lo + chunk] = mono @ coef
    return out


def eval_matrix_tuple(p, t):
    """Substitute the commuting matrices of `t` for the variables of `p`.

    The constant term multiplies the identity.  Accepts a `CommutingTuple`
    or a plain sequence of matrices (certified on entry).
    """
    if not isinstance(t, CommutingTuple):
        t = CommutingTuple.from_mats(t)
    if t.d != p.nvars:
        raise ShapeError(f'tuple has d={t.d}, polynomial has nvars={p.nvars}')
    n = t.n
    out = np.zeros((n, n), dtype=complex)
    if p.is_zero():
        return out
    pows = []
    for i, m in enumerate(t.mats):
        row = [np.eye(n, dtype=complex)]
        for _ in range(p.degree(i)):
            row.append(row[-1] @ m)
        pows.append(row)
    for e, c in p.sorted_terms():
        term = None
        for i, k in enumerate(e):
            if k:
                term = pows[i][k] if term is None else term @ pows[i][k]
        out += c * (np.eye(n) if term is None else term)
    return out


def eval_matrix_batch(p, stack):
    """`eval_matrix_tuple` over a stack of tuples.

    `stack` has shape (m, nvars, n, n); commutativity of each tuple is the
    caller's responsibility.  Returns shape (m, n, n).
    """
    stack = np.asarray(stack, dtype=complex)
    if stack.ndim != 4 or stack.shape[1] != p.nvars:
        raise ShapeError(f'expected a (m, {p.nvars}, n, n) stack, got '
                         f'{stack.shape}')
    m, _, n, _ = stack.shape
    out = np.zeros((m, n, n), dtype=complex)
    if p.is_zero():
        return out
    eye = np.broadcast_to(np.eye(n, dtype=complex), (m, n, n))
    pows = []
    for i in range(p.nvars):
        row = [eye]
        for _ in range(p.degree(i)):
            row.append(row[-1] @ stack[:, i])
        pows.append(row)
    for e, c in p.sorted_terms():
        term = eye
        for i, k in enumerate(e):
            if k:
                term = term @ pows[i][k]
        out += c * term
    return out


class PolyMatrix:
    """Square matrix of `MPoly` entries sharing one variable count."""

    def __init__(self, entries):
        rows = [list(r) for r in entries]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ShapeError('a PolyMatrix must be square and nonempty')
        nvars = rows[0][0].nvars
        if any(e.nvars != nvars for r in rows for e in r):
            raise ShapeError('PolyMatrix entries must share nvars')
        self.n = n
        self.nvars = nvars
        self.entries = rows

    @classmethod
    def from_pencil(cls, coefficients, nvars):
        """Matrix ``sum_k coefficients[k][1] * monomial(coefficients[k][0])``.

        `coefficients` is a list of (exponent tuple, constant matrix) pairs.
        """
        mats = [(tuple(e), np.asarray(m, dtype=complex)) for e, m in coefficients]
        n = mats[0][1].shape[0]
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                row.append(MPoly(nvars, _accumulate(
                    (e, m[r, c]) for e, m in mats)))
            rows.append(row)
        return cls(rows)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def evaluate(self, points):
        """Entrywise evaluation; returns an array of shape (m, n, n)."""
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[None, :]
        out = np.empty((pts.shape[0], self.n, self.n), dtype=complex)
        for r in range(self.n):
            for c in range(self.n):
                out[:, r, c] = eval_points(self.entries[r][c], pts)
        return out

    def degree_bounds(self):
        """Per-variable and total degree bounds for the determinant."""
        def bound(deg):
            dm = np.array([[deg(e) if not e.is_zero() else -1
                            for e in row] for row in self.entries])
            rows = dm.max(axis=1)
            cols = dm.max(axis=0)
            if rows.min() < 0 or cols.min() < 0:
                return -1
            return int(min(rows.sum(), cols.sum()))
        per = [bound(lambda e, i=i: e.degree(i)) for i in range(self.nvars)]
        total = bound(lambda e: e.total_degree())
        return per, total


def _accumulate(pairs):
    terms = {}
    for e, c in pairs:
        terms[e] = terms.get(e, 0) + c
    return terms


def det_poly_matrix(m, degree_cap=DEGREE_CAP, drop_rel=DROP_REL):
    """Determinant of a polynomial matrix as an `MPoly`.

    Evaluates the matrix on the tensor grid of ``(b_v + 1)``-th roots of
    unity, where ``b_v`` bounds the determinant's degree in variable v, takes
    batched LU determinants and recovers the coefficients with an
    n-dimensional FFT.  Coefficients below ``drop_rel * max|c|`` (or below
    1e-13 of the Hadamard bound, to clear pure rounding noise) are dropped
    once at the end.

    Raises
    ------
    DegreeOverflowError
        If the total degree bound exceeds `degree_cap` or the grid is too
        large.
    """
    per, total = m.degree_bounds()
    if total < 0:
        return MPoly.zero(m.nvars)
    if total > degree_cap:
        raise DegreeOverflowError(
            f'determinant degree bound {total} exceeds cap {degree_cap}')
    sizes = [b + 1 for b in per]
    gsize = int(np.prod(sizes))
    if gsize > GRID_CAP:
        raise DegreeOverflowError(f'interpolation grid of {gsize} points '
                                  f'exceeds cap {GRID_CAP}')
    axes = [np.exp(2j * np.pi * np.arange(k) / k) for k in sizes]
    mesh = np.meshgrid(*axes, indexing='ij')
    pts = np.stack([g.ravel() for g in mesh], axis=1)
    vals = m.evaluate(pts)
    dets = np.linalg.det(vals)
    hadamard = float(np.max(np.prod(np.linalg.norm(vals, axis=2), axis=1)))
    coef = np.fft.fftn(dets.reshape(sizes)) / gsize
    cmax = float(np.max(np.abs(coef)))
    cut = max(drop_rel * cmax, 1e-13 * hadamard)
    terms = {}
    for idx in zip(*np.nonzero(np.abs(coef) > cut)):
        terms[tuple(int(i) for i in idx)] = coef[idx]
    return MPoly(m.nvars, terms)


# -- approximate bivariate gcd ---------------------------------------------

def _dense2(p):
    d1, d2 = p.degree(0), p.degree(1)
    a = np.zeros((d1 + 1, d2 + 1), dtype=complex)
    for (i, j), c in p.terms.items():
        a[i, j] = c
    return a


def _conv_matrix(a, shape):
    """Matrix of ``x -> a * x`` for x of box shape `shape` (2-d convolution)."""
    s1, s2 = shape
    o1, o2 = a.shape[0] + s1 - 1, a.shape[1] + s2 - 1
    mat = np.zeros((o1 * o2, s1 * s2), dtype=complex)
    nz = np.argwhere(a != 0)
    for i in range(s1):
        for j in range(s2):
            col = i * s2 + j
            for (k, l) in nz:
                mat[(i + k) * o2 + (j + l), col] = a[k, l]
    return mat


def _sylvester_nullity(a, b, tol):
    """Degree of the numerical gcd of two univariate coefficient vectors."""
    a = np.trim_zeros(a, 'b')
    b = np.trim_zeros(b, 'b')
    m, n = len(a) - 1, len(b) - 1
    if m <= 0 or n <= 0:
        return 0
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    s = np.hstack([_conv_matrix(a[:, None], (n, 1)),
                   _conv_matrix(b[:, None], (m, 1))])
    sv = scipy.linalg.svdvals(s)
    cut = tol * sv[0]
    if np.any((sv > cut) & (sv <= 10 * cut)):
        raise InconclusiveError(
            'gcd degree ambiguous at this tolerance (Sylvester singular '
            'value gap below 10 x tol)')
    return int(np.count_nonzero(sv <= cut))


def _specialized_degree(p, q, var, tol, rng, tries=3):
    """Generic gcd degree in variable `var` after fixing the other one."""
    other = 1 - var
    if p.degree(var) == 0 or q.degree(var) == 0:
        return 0
    best = None
    for _ in range(tries):
        c = np.exp(2j * np.pi * rng.random()) * (0.5 + 0.5 * rng.random())
        ua = np.zeros(p.degree(var) + 1, dtype=complex)
        ub = np.zeros(q.degree(var) + 1, dtype=complex)
        for e, coef in p.terms.items():
            ua[e[var]] += coef * c ** e[other]
        for e, coef in q.terms.items():
            ub[e[var]] += coef * c ** e[other]
        k = _sylvester_nullity(ua, ub, tol)
        best = k if best is None else min(best, k)
    return best


def poly_divide(p, g):
    """Least-squares quotient of bivariate `p` by `g`.

    Returns ``(quotient, relative_residual)`` where the residual is
    ``||p - g * quotient|| / ||p||`` in coefficient 2-norm.
    """
    if p.nvars != 2 or g.nvars != 2:
        raise ShapeError('poly_divide works on bivariate polynomials')
    pd, gd = _dense2(p), _dense2(g)
    s1 = pd.shape[0] - gd.shape[0] + 1
    s2 = pd.shape[1] - gd.shape[1] + 1
    if s1 < 1 or s2 < 1:
        return MPoly.zero(2), 1.0
    a = _conv_matrix(gd, (s1, s2))
    x, *_ = np.linalg.lstsq(a, pd.ravel(), rcond=None)
    resid = np.linalg.norm(a @ x - pd.ravel()) / max(np.linalg.norm(pd), 1e-300)
    quot = x.reshape(s1, s2)
    terms = {(i, j): quot[i, j] for i in range(s1) for j in range(s2)
             if quot[i, j] != 0}
    return MPoly(2, terms).chop(), float(resid)


def approx_gcd_bivariate(p, q, tol=1e-8, seed=0):
    """Approximate gcd of two bivariate polynomials.

    The gcd's degree in each variable is read off the numerical nullity of
    Sylvester matrices of the polynomials specialized at random values of
    the other variable.  The cofactors ``u = p/g`` and ``v = q/g`` then span
    the one-dimensional null space of ``(u, v) -> q u - p v`` over the
    corresponding degree boxes, and g is recovered by least-squares division
    of ``[p; q]`` by ``[u; v]``.

    The result is monic in the lex order ranking z2 above z1.  The constant
    1 is returned when both specialized degrees are zero.

    Raises
    ------
    InconclusiveError
        If a rank decision falls within a factor 10 of `tol`.
    """
    if p.nvars != 2 or q.nvars != 2:
        raise ShapeError('approx_gcd_bivariate needs bivariate polynomials')
    if p.is_zero() or q.is_zero():
        raise ValueError('gcd inputs must be nonzero')
    p = p / p.coeff_norm(2)
    q = q / q.coeff_norm(2)
    rng = np.random.default_rng(seed)
    k2 = _specialized_degree(p, q, 1, tol, rng)
    k1 = _specialized_degree(p, q, 0, tol, rng)
    if k1 == 0 and k2 == 0:
        return MPoly.const(1.0, 2)
    pd, qd = _dense2(p), _dense2(q)
    ushape = (pd.shape[0] - k1, pd.shape[1] - k2)
    vshape = (qd.shape[0] - k1, qd.shape[1] - k2)
    if min(ushape + vshape) < 1:
        raise InconclusiveError('gcd degree estimate exceeds input degrees')
    lin = np.hstack([_conv_matrix(qd, ushape), -_conv_matrix(pd, vshape)])
    if lin.shape[0] < lin.shape[1]:
        raise InconclusiveError('cofactor system is underdetermined')
    _, sv, vh = np.linalg.svd(lin)
    cut = tol * sv[0]
    null = vh[-1].conj()
    smallest, second = sv[-1], sv[-2]
    if smallest > cut or second <= 10 * cut:
        raise InconclusiveError(
            f'cofactor null space not one-dimensional at tol={tol:g} '
            f'(smallest {smallest:.2e}, next {second:.2e}, cut {cut:.2e})')
    nu = ushape[0] * ushape[1]
    u = null[:nu].reshape(ushape)
    v = null[nu:].reshape(vshape)
    gshape = (k1 + 1, k2 + 1)
    a = np.vstack([_conv_matrix(u, gshape), _conv_matrix(v, gshape)])
    rhs = np.concatenate([pd.ravel(), qd.ravel()])
    g, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    g = g.reshape(gshape)
    gp = MPoly(2, {(i, j): g[i, j] for i in range(gshape[0])
                   for j in range(gshape[1])}).chop(rel=tol)
    return gp.monic(order=[1, 0])
