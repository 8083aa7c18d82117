"""Joint eigenvalues of commuting matrix tuples.

Two independent routes are provided.  `joint_eigenvalues` reads the joint
spectrum off the diagonals of a simultaneous unitary triangularization;
`taylor_singular_at` decides membership of a single point through the rank
of the Koszul operator ``E = sum_i (T_i - lambda_i) (x) C_i`` on the exterior
algebra.  For matrices both describe the same finite set.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import (ConvergenceError, InconclusiveError, NotCommutingError,
                     ShapeError)
from .matrix_core import as_cmatrix, matrix_from_json, matrix_to_json

__all__ = ['CommutingTuple', 'JointSpectrum', 'KoszulOperator',
           'simultaneous_triangularize', 'joint_eigenvalues',
           'joint_eigenvalues_batch', 'koszul_build', 'taylor_singular_at',
           'wedge_basis', 'creation_operator', 'tuple_from_json',
           'tuple_to_json', 'spectrum_to_json', 'KOSZUL_SIZE_CAP']

KOSZUL_SIZE_CAP = 4096
TOL_TRI = 1e-8


def _comm_residual(mats):
    res = 0.0
    for a, b in combinations(mats, 2):
        res = max(res, float(np.linalg.norm(a @ b - b @ a)))
    return res


@dataclass(frozen=True, eq=False)
class CommutingTuple:
    """A d-tuple of pairwise commuting n x n matrices.

    Build instances with :meth:`from_mats`, which certifies commutativity.
    """
    mats: tuple
    comm_residual: float

    @classmethod
    def from_mats(cls, mats, tol=None):
        mats = tuple(as_cmatrix(m) for m in mats)
        if not mats:
            raise ShapeError('a commuting tuple needs at least one matrix')
        n = mats[0].shape[0]
        if any(m.shape != (n, n) for m in mats):
            raise ShapeError('all matrices of a tuple must share one size')
        for m in mats:
            m.setflags(write=False)
        res = _comm_residual(mats)
        if tol is None:
            tol = 1e-8 * (1.0 + max(np.linalg.norm(m) for m in mats))
        if res > tol:
            raise NotCommutingError(
                f'commutator residual {res:.3e} exceeds tolerance {tol:.3e}')
        return cls(mats=mats, comm_residual=res)

    @property
    def d(self):
        return len(self.mats)

    @property
    def n(self):
        return self.mats[0].shape[0]

    def norm(self):
        """Largest Frobenius norm among the members."""
        return max(float(np.linalg.norm(m)) for m in self.mats)

    def shifted(self, lam):
        lam = np.asarray(lam, dtype=complex).ravel()
        if lam.size != self.d:
            raise ShapeError(f'point has length {lam.size}, tuple has d={self.d}')
        eye = np.eye(self.n)
        return CommutingTuple(
            mats=tuple(m - l * eye for m, l in zip(self.mats, lam)),
            comm_residual=self.comm_residual)

    def adjoint(self):
        return CommutingTuple(mats=tuple(m.conj().T for m in self.mats),
                              comm_residual=self.comm_residual)

    def conjugated(self, u):
        """Joint unitary similarity ``u^H T_j u``."""
        return CommutingTuple.from_mats([u.conj().T @ m @ u for m in self.mats])


@dataclass(frozen=True, eq=False)
class JointSpectrum:
    """Joint eigenvalues with multiplicity, one row per point."""
    points: np.ndarray
    triangularizer: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class KoszulOperator:
    d: int
    n: int
    e: np.ndarray


def _as_tuple(t):
    if isinstance(t, CommutingTuple):
        return t
    return CommutingTuple.from_mats(t)


def _lower_mass(b):
    return float(np.linalg.norm(np.tril(b, -1)))


def _is_triangular(blocks, norms, tol):
    return all(_lower_mass(b) <= tol * nrm for b, nrm in zip(blocks, norms))


def _clusters(ev, tau):
    """Single-linkage clusters of complex values at threshold `tau`."""
    n = len(ev)
    label = -np.ones(n, dtype=int)
    cur = 0
    for i in range(n):
        if label[i] >= 0:
            continue
        label[i] = cur
        stack = [i]
        while stack:
            k = stack.pop()
            near = np.nonzero((np.abs(ev - ev[k]) <= tau) & (label < 0))[0]
            label[near] = cur
            stack.extend(near.tolist())
        cur += 1
    return label


def _common_eigvec(mats, x):
    """Common eigenvector near the joint eigenvalue seen by the vector `x`."""
    n = mats[0].shape[0]
    eye = np.eye(n)
    k = np.vstack([m - (x.conj() @ m @ x) * eye for m in mats])
    _, _, vh = np.linalg.svd(k)
    return vh[-1].conj()


def _complete_unitary(v):
    q, _ = np.linalg.qr(np.column_stack([v, np.eye(len(v))]))
    return q


def _triangularize(mats, rng, tol, depth=0):
    n = mats[0].shape[0]
    if n == 1:
        return np.eye(1, dtype=complex)
    if depth > 4 * n + 8:
        raise ConvergenceError('triangularization recursion budget exceeded')
    norms = [float(np.linalg.norm(m)) for m in mats]
    scale = 1.0 + max(norms)
    for attempt in range(3):
        c = rng.standard_normal(len(mats)) + 1j * rng.standard_normal(len(mats))
        comb = sum(ci * m for ci, m in zip(c, mats))
        t, q = scipy.linalg.schur(comb, output='complex')
        blocks = [q.conj().T @ m @ q for m in mats]
        if _is_triangular(blocks, norms, tol):
            return q
        ev = np.diag(t)
        tau = 1e-7 * scale * (1.0 + np.linalg.norm(c))
        while tau < 0.5 * scale * (1.0 + np.linalg.norm(c)):
            label = _clusters(ev, tau)
            if label.max() == 0:
                break
            select = (label == label[0]).astype(np.int32)
            ts, qs, _, m, _, _, info = lapack.ztrsen(select, t, q)
            if info != 0:
                raise ConvergenceError(f'Schur reordering failed (info={info})')
            blocks = [qs.conj().T @ mm @ qs for mm in mats]
            leak = max(float(np.linalg.norm(b[m:, :m])) for b in blocks)
            if leak <= tol * scale:
                qa = _triangularize([b[:m, :m] for b in blocks], rng, tol,
                                    depth + 1)
                qb = _triangularize([b[m:, m:] for b in blocks], rng, tol,
                                    depth + 1)
                return qs @ scipy.linalg.block_diag(qa, qb)
            tau *= 100.0
    # no clean split: deflate one common eigenvector and recurse
    v = _common_eigvec(mats, q[:, 0])
    q1 = _complete_unitary(v)
    blocks = [q1.conj().T @ m @ q1 for m in mats]
    q2 = _triangularize([b[1:, 1:] for b in blocks], rng, tol, depth + 1)
    return q1 @ scipy.linalg.block_diag(np.eye(1), q2)


def simultaneous_triangularize(t, seed=0, tol=TOL_TRI):
    """Unitary Q making every ``Q^H T_j Q`` upper triangular.

    A random linear combination of the tuple is Schur-decomposed.  When its
    Schur basis does not triangularize every member, eigenvalue clusters are
    split off as common invariant subspaces and treated recursively; a block
    with a single joint eigenvalue is deflated one common eigenvector at a
    time.

    Parameters
    ----------
    t : CommutingTuple or sequence of matrices
    seed : int
        Seed of the generator drawing the combination coefficients.
    tol : float
        Relative bound on the strictly lower triangular mass.

    Returns
    -------
    q : ndarray
        The shared unitary.
    tris : list of ndarray
        ``Q^H T_j Q`` for each j.

    Raises
    ------
    ConvergenceError
        When the recursion budget is exhausted.
    """
    t = _as_tuple(t)
    rng = np.random.default_rng(seed)
    q = _triangularize(list(t.mats), rng, tol)
    tris = [q.conj().T @ m @ q for m in t.mats]
    return q, tris


def joint_eigenvalues(t, seed=0, tol=TOL_TRI):
    """Joint spectrum from the diagonals of a simultaneous triangularization.

    Returns a :class:`JointSpectrum` whose ``points`` has shape (n, d); the
    ``residual`` is the largest strictly-lower mass relative to the member
    norms.
    """
    t = _as_tuple(t)
    q, tris = simultaneous_triangularize(t, seed=seed, tol=tol)
    points = np.column_stack([np.diag(b) for b in tris])
    res = max(_lower_mass(b) / (1.0 + np.linalg.norm(m))
              for b, m in zip(tris, t.mats))
    return JointSpectrum(points=points, triangularizer=q, residual=res)


def _chain_residuals(tris):
    """Per-column eigen-chain residual of triangular factors."""
    n = tris[0].shape[0]
    res = np.zeros(n)
    for b in tris:
        col = np.linalg.norm(np.tril(b, -1), axis=0)
        res = np.maximum(res, col)
    return res


def joint_eigenvalues_batch(stack, seed=0, tol=TOL_TRI, fast_tol=1e-9,
                            skip_failures=False):
    """Joint eigenvalues for many commuting tuples at once.

    Parameters
    ----------
    stack : ndarray, shape (m, d, n, n)
        ``stack[i]`` is the i-th tuple.  Commutativity is the caller's
        responsibility.

    Returns
    -------
    points : ndarray, shape (m, n, d)
    residuals : ndarray, shape (m, n)
        ``max_j ||(T_j - lambda_j) v||`` for the eigenvector v of each point
        (chain residual of the triangularization on the fallback path).

    Diagonalizes a shared random combination in one batched call; tuples
    whose eigenvectors are ill-conditioned or whose residuals exceed
    `fast_tol` are redone one at a time through `joint_eigenvalues`.
    With `skip_failures`, tuples whose triangularization fails get NaN
    points instead of raising.
    """
    stack = np.asarray(stack, dtype=complex)
    m, d, n, _ = stack.shape
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    comb = np.einsum('j,mjab->mab', c, stack)
    points = np.empty((m, n, d), dtype=complex)
    residuals = np.empty((m, n))
    redo = np.ones(m, dtype=bool)
    try:
        w, v = np.linalg.eig(comb)
        v = v / np.linalg.norm(v, axis=1, keepdims=True)
        tv = np.einsum('mjab,mbk->mjak', stack, v)
        lam = np.einsum('mak,mjak->mkj', v.conj(), tv)
        r = tv - np.einsum('mak,mkj->mjak', v, lam)
        res = np.linalg.norm(r, axis=2).max(axis=1)
        cond = np.linalg.cond(v)
        scale = 1.0 + np.linalg.norm(stack, axis=(2, 3)).max(axis=1)
        ok = (np.isfinite(cond) & (cond < 1e6)
              & (res.max(axis=1) <= fast_tol * scale))
        points[ok] = lam[ok]
        residuals[ok] = res[ok]
        redo = ~ok
    except np.linalg.LinAlgError:
        pass
    for i in np.nonzero(redo)[0]:
        tup = CommutingTuple(mats=tuple(stack[i]), comm_residual=0.0)
        try:
            q, tris = simultaneous_triangularize(tup, seed=seed, tol=tol)
        except ConvergenceError:
            if not skip_failures:
                raise
            points[i] = np.nan
            residuals[i] = np.nan
            continue
        points[i] = np.column_stack([np.diag(b) for b in tris])
        residuals[i] = _chain_residuals(tris)
    return points, residuals


def wedge_basis(d):
    """Subsets of {0..d-1} ordered by size, then lexicographically."""
    basis = []
    for k in range(d + 1):
        basis.extend(combinations(range(d), k))
    return basis


def creation_operator(i, d):
    """Matrix of ``C_i: e_S -> e_i ^ e_S`` in the `wedge_basis` ordering.

    The sign is ``(-1)^{#{k in S : k < i}}``; ``C_i e_S = 0`` when i is in S.
    """
    basis = wedge_basis(d)
    index = {s: r for r, s in enumerate(basis)}
    c = np.zeros((len(basis), len(basis)))
    for col, s in enumerate(basis):
        if i in s:
            continue
        sign = (-1) ** sum(1 for k in s if k < i)
        row = index[tuple(sorted(s + (i,)))]
        c[row, col] = sign
    return c


def koszul_build(t, size_cap=KOSZUL_SIZE_CAP):
    """Koszul operator ``E = sum_i T_i (x) C_i`` of size n 2^d."""
    t = _as_tuple(t)
    dim = t.n * 2 ** t.d
    if dim > size_cap:
        raise ShapeError(f'Koszul operator of size {dim} exceeds cap {size_cap}')
    e = np.zeros((dim, dim), dtype=complex)
    for i, m in enumerate(t.mats):
        e += np.kron(m, creation_operator(i, t.d))
    return KoszulOperator(d=t.d, n=t.n, e=e)


def taylor_singular_at(t, lam, tol=1e-8, size_cap=KOSZUL_SIZE_CAP):
    """True when `lam` lies in the Taylor spectrum of the tuple.

    Since ``Ran E`` is always inside ``Ker E``, exactness of the Koszul
    complex of the shifted tuple is equivalent to ``2 rank E = n 2^d``.

    Raises
    ------
    InconclusiveError
        If a singular value falls within a factor 10 of the rank cutoff
        ``tol * max(1, sigma_max)``.
    """
    t = _as_tuple(t)
    op = koszul_build(t.shifted(lam), size_cap=size_cap)
    s = scipy.linalg.svdvals(op.e)
    cut = tol * max(1.0, s[0])
    if np.any((s > cut / 10) & (s <= cut * 10)):
        raise InconclusiveError(
            f'Koszul rank ambiguous at tolerance {tol:g} '
            f'(singular values near {cut:.2e})')
    rank = int(np.count_nonzero(s > cut))
    return 2 * rank != op.e.shape[0]


def tuple_to_json(t):
    t = _as_tuple(t)
    return {'d': t.d, 'mats': [matrix_to_json(m) for m in t.mats]}


def tuple_from_json(obj, tol=None):
    try:
        d = int(obj['d'])
        mats = [matrix_from_json(m) for m in obj['mats']]
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f'malformed tuple object: {exc}')
    if len(mats) != d:
        raise ShapeError(f'tuple declares d={d} but lists {len(mats)} matrices')
    return CommutingTuple.from_mats(mats, tol=tol)


def spectrum_to_json(js):
    return {'points': [[{'re': float(x.real), 'im': float(x.imag)} for x in p]
                       for p in js.points],
            'residual': float(js.residual)}
