"""Seeded generators for test inputs and the bundled examples.

Every function takes an explicit ``numpy.random.Generator`` (or a seed) so
runs are reproducible.
"""

import numpy as np

from .bcl_model import bcl_pair_from
from .matrix_core import random_unitary
from .mpoly import MPoly, PolyMatrix, det_poly_matrix
from .rational_symbols import RationalMatrixFunction, SymbolFamily
from .tuple_spectrum import CommutingTuple

__all__ = ['random_commuting_tuple', 'random_projection', 'random_bcl_pair',
           'swap_pair', 'identity_pair', 'blaschke_family',
           'jordan_family', 'diagonal_pair']


def random_commuting_tuple(rng, n, d, degree=2, radius=1.0, contractive=False):
    """Tuple of random polynomials of degree `degree` in one random matrix.

    The generator matrix is a complex Ginibre matrix scaled to spectral
    radius about `radius`.  With `contractive` every member is rescaled to
    spectral norm 1/2 when larger.
    """
    m = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    m *= radius / np.sqrt(2 * n)
    coefs = (rng.standard_normal((d, degree + 1))
             + 1j * rng.standard_normal((d, degree + 1))) / 2
    mats = []
    for c in coefs:
        acc = np.zeros((n, n), dtype=complex)
        pw = np.eye(n, dtype=complex)
        for ck in c:
            acc += ck * pw
            pw = pw @ m
        if contractive:
            acc /= max(1.0, 2 * np.linalg.norm(acc, 2))
        mats.append(acc)
    return CommutingTuple.from_mats(mats)


def diagonal_pair():
    """``(diag(1, 2), diag(3, 4))``."""
    return CommutingTuple.from_mats([np.diag([1.0, 2.0]), np.diag([3.0, 4.0])])


def random_projection(rng, n, rank):
    q = random_unitary(n, rng)[:, :rank]
    return q @ q.conj().T


def random_bcl_pair(rng, kind=None):
    """Random pair model of size 2..8.

    ``kind`` is ``'generic'`` (random projection of random rank and random
    unitary) or ``'unitary_block'`` (a block with ``P = I`` or ``P = 0``
    beside a generic block, so one constant term has a unimodular
    eigenvalue), conjugated by a random unitary.  Chosen at random if
    None.
    """
    n = int(rng.integers(2, 9))
    if kind is None:
        kind = 'generic' if rng.random() < 0.5 else 'unitary_block'
    if kind == 'generic':
        p = random_projection(rng, n, int(rng.integers(0, n + 1)))
        u = random_unitary(n, rng)
    elif kind == 'unitary_block':
        k = int(rng.integers(1, n))
        g = n - k
        p = np.zeros((n, n), dtype=complex)
        u = np.zeros((n, n), dtype=complex)
        p[:g, :g] = random_projection(rng, g, int(rng.integers(0, g + 1)))
        u[:g, :g] = random_unitary(g, rng)
        p[g:, g:] = np.eye(k) if rng.random() < 0.5 else 0
        u[g:, g:] = random_unitary(k, rng)
        w = random_unitary(n, rng)
        p = w @ p @ w.conj().T
        u = w @ u @ w.conj().T
    else:
        raise ValueError(f'unknown kind {kind!r}')
    return bcl_pair_from(p, u)


def swap_pair():
    """``P = diag(1, 0)``, ``U`` the swap; both pencils equal
    ``[[0, z], [1, 0]]``."""
    return bcl_pair_from(np.diag([1.0, 0.0]), np.array([[0.0, 1.0],
                                                        [1.0, 0.0]]))


def identity_pair(w):
    """``P = I`` and ``U = diag(w)`` for unimodular `w`."""
    w = np.asarray(w, dtype=complex)
    return bcl_pair_from(np.eye(w.size), np.diag(w))


def _mobius_numer(a):
    return MPoly.from_univariate([-a, 1], 0, 1)


def _mobius_denom(a):
    return MPoly.from_univariate([1, -np.conj(a)], 0, 1)


def _resultant_z(a, b):
    """Resultant in z of two polynomials in ``(z, w_1, ..., w_k)``."""
    def coeffs(p):
        out = {}
        for e, c in p.terms.items():
            out.setdefault(e[0], {})[e[1:]] = c
        return [MPoly(p.nvars - 1, out.get(k, {}))
                for k in range(max(out) + 1)]
    ca, cb = coeffs(a), coeffs(b)
    da, db = len(ca) - 1, len(cb) - 1
    if da + db == 0:
        return ca[0] * cb[0]
    zero = MPoly.zero(a.nvars - 1)
    rows = []
    for src, count in ((ca, db), (cb, da)):
        for r in range(count):
            row = [zero] * (da + db)
            for k, c in enumerate(reversed(src)):
                row[r + k] = c
            rows.append(row)
    return det_poly_matrix(PolyMatrix(rows))


def blaschke_family(rng, n=None, k=2):
    """Commuting contractive rational family in one variable.

    Each symbol is ``S diag(c_i B_i(z)) S^*`` for a shared unitary S, where
    every ``B_i`` is a sub-product of the two Moebius factors owned by that
    symbol and ``|c_i| <= 1``.  Numerators have degree at most two and the
    denominator is the product of the two Moebius denominators.

    Returns the family and, for ``k == 2``, a polynomial in ``(w_1, w_2)``
    vanishing on the union of joint spectra: the product over branches i
    of the resultant in z of ``c_i N_1i(z) - w_1 q_1(z)`` and
    ``c'_i N_2i(z) - w_2 q_2(z)`` (None for other k).
    """
    if n is None:
        n = int(rng.integers(1, 4))
    s = random_unitary(n, rng)
    symbols = []
    branches = []
    for _ in range(k):
        a = 0.8 * np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2))
        q = _mobius_denom(a[0]) * _mobius_denom(a[1])
        diag = []
        for _ in range(n):
            mask = rng.random(2) < 0.5
            c = np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
            e = MPoly.const(c, 1)
            for t in range(2):
                e = e * (_mobius_numer(a[t]) if mask[t] else _mobius_denom(a[t]))
            diag.append(e)
        branches.append((diag, q))
        rows = []
        for r in range(n):
            row = []
            for col in range(n):
                acc = MPoly.zero(1)
                for i in range(n):
                    acc = acc + diag[i] * (s[r, i] * np.conj(s[col, i]))
                row.append(acc.chop(rel=1e-14))
            rows.append(row)
        symbols.append(RationalMatrixFunction.certify(PolyMatrix(rows), q))
    fam = SymbolFamily.certify(symbols)
    if k != 2:
        return fam, None

    def lift(p):
        return MPoly(3, {(e[0], 0, 0): c for e, c in p.terms.items()})
    w1, w2 = MPoly.var(1, 3), MPoly.var(2, 3)
    xi = MPoly.const(1, 2)
    (d1, q1), (d2, q2) = branches
    for i in range(n):
        rho = _resultant_z(lift(d1[i]) - w1 * lift(q1),
                           lift(d2[i]) - w2 * lift(q2))
        xi = xi * (rho / rho.coeff_norm(np.inf))
    return fam, xi.chop()


def jordan_family():
    """``phi_1 = [[z/2, 1/2], [0, z/2]]`` and ``phi_2 = (z/2) I``.

    With ``xi = w_1 - w_2`` the matrix ``xi(phi(z))`` is a fixed nonzero
    nilpotent of index 2.
    """
    z = MPoly.var(0, 1)
    half = MPoly.const(0.5, 1)
    zero = MPoly.zero(1)
    one = MPoly.const(1, 1)
    f1 = PolyMatrix([[z * 0.5, half], [zero, z * 0.5]])
    f2 = PolyMatrix([[z * 0.5, zero], [zero, z * 0.5]])
    return SymbolFamily.certify([RationalMatrixFunction.certify(f1, one),
                                 RationalMatrixFunction.certify(f2, one)])
