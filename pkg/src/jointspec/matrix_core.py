"""Dense complex matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; the
functions here validate them and provide the handful of factorizations the
rest of the package is built on (Schur form, determinant, numerical rank and
numerical radius).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, ShapeError

__all__ = ['SchurForm', 'as_cmatrix', 'schur', 'eigenvalues', 'det',
           'svd_rank', 'numerical_radius', 'spectral_radius',
           'matrix_to_json', 'matrix_from_json', 'match_multisets',
           'random_unitary', 'tol_eig']


def as_cmatrix(a, square=True):
    """Return `a` as a finite complex128 2-d array.

    Raises ShapeError for non 2-d (or non-square, when `square` is set)
    input and ValueError for NaN/Inf entries.
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise ShapeError(f'expected a 2-d matrix, got shape {m.shape}')
    if square and m.shape[0] != m.shape[1]:
        raise ShapeError(f'expected a square matrix, got shape {m.shape}')
    if m.size == 0:
        raise ShapeError('empty matrix')
    if not np.all(np.isfinite(m)):
        raise ShapeError('matrix has non-finite entries')
    return m


def tol_eig(a):
    """Default eigenvalue comparison tolerance 1e-8 * (1 + ||a||_F)."""
    return 1e-8 * (1.0 + np.linalg.norm(a))


@dataclass(frozen=True)
class SchurForm:
    """Complex Schur factorization ``a = q @ t @ q^H``."""
    q: np.ndarray
    t: np.ndarray
    unitarity_residual: float

    @property
    def eigenvalues(self):
        return np.diag(self.t).copy()


def schur(a):
    """Complex Schur form of a square matrix.

    Backed by LAPACK (Hessenberg reduction followed by shifted QR sweeps).

    Raises
    ------
    ConvergenceError
        If the QR iteration fails to converge.
    """
    a = as_cmatrix(a)
    try:
        t, q = scipy.linalg.schur(a, output='complex')
    except scipy.linalg.LinAlgError as exc:
        raise ConvergenceError(f'Schur iteration did not converge: {exc}')
    n = a.shape[0]
    res = float(np.linalg.norm(q.conj().T @ q - np.eye(n)))
    return SchurForm(q=q, t=np.triu(t), unitarity_residual=res)


def eigenvalues(a):
    """Eigenvalues of `a` with algebraic multiplicity (diagonal of Schur)."""
    return schur(a).eigenvalues


def det(a):
    """Determinant through pivoted LU."""
    a = as_cmatrix(a)
    return complex(scipy.linalg.det(a, check_finite=False))


def svd_rank(a, tol=1e-10):
    """Number of singular values above ``tol * max(1, sigma_max)``."""
    if tol < 0:
        raise ValueError('tol must be nonnegative')
    s = scipy.linalg.svdvals(as_cmatrix(a, square=False))
    if s.size == 0:
        return 0
    return int(np.count_nonzero(s > tol * max(1.0, s[0])))


def spectral_radius(a):
    return float(np.max(np.abs(eigenvalues(a))))


def _top_hermitian_eig(a, theta):
    h = np.exp(1j * theta) * a
    h = 0.5 * (h + h.conj().T)
    return float(np.linalg.eigvalsh(h)[-1])


def numerical_radius(a, tol=1e-8, n_grid=None, max_iter=500):
    """Numerical radius ``max |<a x, x>|`` over unit vectors x.

    Maximizes ``theta -> lambda_max(Re(e^{i theta} a))`` over a coarse
    angular grid and polishes the best few local maxima with a bounded
    scalar search.

    Parameters
    ----------
    a : array_like, shape (n, n)
    tol : float
        Absolute accuracy target for the returned value.
    n_grid : int, optional
        Number of coarse angles, default ``max(256, 32 n)``.
    max_iter : int
        Iteration budget of each local refinement.

    Raises
    ------
    ConvergenceError
        If a refinement exhausts its iteration budget.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    if n == 1:
        return float(abs(a[0, 0]))
    if n_grid is None:
        n_grid = max(256, 32 * n)
    thetas = 2 * np.pi * np.arange(n_grid) / n_grid
    vals = np.array([_top_hermitian_eig(a, th) for th in thetas])
    step = 2 * np.pi / n_grid
    peaks = [i for i in range(n_grid)
             if vals[i] >= vals[i - 1] and vals[i] >= vals[(i + 1) % n_grid]]
    peaks = sorted(peaks, key=lambda i: -vals[i])[:4]
    best = float(vals.max())
    xatol = max(tol / (1.0 + np.linalg.norm(a, 2)), 1e-14)
    for i in peaks:
        lo, hi = thetas[i] - step, thetas[i] + step
        res = minimize_scalar(lambda th: -_top_hermitian_eig(a, th),
                              bounds=(lo, hi), method='bounded',
                              options={'xatol': xatol, 'maxiter': max_iter})
        if not res.success:
            raise ConvergenceError(
                f'numerical radius refinement failed near theta={thetas[i]}')
        best = max(best, -float(res.fun))
    return max(best, 0.0)


def random_unitary(n, rng):
    """Haar-distributed unitary (QR of a complex Ginibre matrix)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def match_multisets(a, b):
    """Greedy minimal-distance matching of two equal-size point multisets.

    `a` and `b` are arrays of shape (m,) or (m, d).  Repeatedly pairs the
    globally closest remaining pair.  Returns the largest matched distance.
    """
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.shape != b.shape:
        raise ShapeError(f'multiset shapes differ: {a.shape} vs {b.shape}')
    dist = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    worst = 0.0
    for _ in range(a.shape[0]):
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        worst = max(worst, float(dist[i, j]))
        dist[i, :] = np.inf
        dist[:, j] = np.inf
    return worst


def matrix_to_json(a):
    a = as_cmatrix(a)
    return {'n': int(a.shape[0]),
            're': a.real.tolist(),
            'im': a.imag.tolist()}


def matrix_from_json(obj):
    """Parse ``{"n": int, "re": [[...]], "im": [[...]]}``."""
    try:
        n = int(obj['n'])
        re = np.asarray(obj['re'], dtype=float)
        im = np.asarray(obj.get('im', np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f'malformed matrix object: {exc}')
    if re.shape != (n, n) or im.shape != (n, n):
        raise ShapeError(f'matrix field shapes {re.shape}/{im.shape} do not '
                         f'match n={n}')
    return as_cmatrix(re + 1j * im)
