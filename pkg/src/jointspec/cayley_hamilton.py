"""Annihilating determinant polynomials of commuting matrix tuples.

For a commuting tuple ``A`` of N x N matrices and a vector alpha in C^d,

    p_alpha(z) = det(alpha_1 (A_1 - z_1 I) + ... + alpha_d (A_d - z_d I))

annihilates ``A``, and the common zeros of the family over a set of
N(d-1)+1 alphas in general position are exactly the joint eigenvalues.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ShapeError
from .mpoly import MPoly, PolyMatrix, det_poly_matrix, eval_matrix_tuple
from .mpoly import eval_points
from .tuple_spectrum import CommutingTuple, joint_eigenvalues

__all__ = ['AlphaSet', 'AnnihilatorFamily', 'moment_curve_alphas',
           'certify_alphas', 'random_alphas', 'pencil_poly_matrix',
           'build_annihilators', 'spectrum_as_variety_check',
           'VarietyCheckReport', 'residual_scale', 'draw_probes']


@dataclass(frozen=True, eq=False)
class AlphaSet:
    d: int
    vectors: np.ndarray

    @property
    def count(self):
        return self.vectors.shape[0]


@dataclass(frozen=True, eq=False)
class AnnihilatorFamily:
    polys: list
    alphas: AlphaSet
    max_residual: float
    residuals: np.ndarray


def moment_curve_alphas(d, n, normalize=True):
    """The N(d-1)+1 vectors ``(1, t, ..., t^{d-1})`` at ``t = 1, 2, ...``.

    Any d of them form a Vandermonde system with distinct nodes and are
    therefore linearly independent.  With `normalize` each vector is
    scaled to unit 2-norm; p_alpha is homogeneous of degree N in alpha,
    so this changes each polynomial by a positive factor only, but it
    keeps the coefficients (and the rounding floor of p_alpha(A)) from
    growing like t^{N(d-1)}.
    """
    if d < 1 or n < 1:
        raise ValueError('d and n must be positive')
    count = n * (d - 1) + 1
    t = np.arange(1, count + 1, dtype=float)
    vecs = np.vander(t, d, increasing=True).astype(complex)
    if normalize:
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return AlphaSet(d=d, vectors=vecs)


def certify_alphas(alphas, tol=1e-12):
    """Smallest |det| over all d-subsets, relative to the row norms.

    Enumerates every subset; positive output means each subset is
    independent at the given tolerance.
    """
    v = alphas.vectors
    worst = np.inf
    for idx in combinations(range(alphas.count), alphas.d):
        sub = v[list(idx)]
        rel = abs(np.linalg.det(sub)) / np.prod(np.linalg.norm(sub, axis=1))
        worst = min(worst, rel)
    return worst if worst > tol else 0.0


def random_alphas(d, count, rng):
    """Complex Gaussian alphas scaled to unit length."""
    v = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return AlphaSet(d=d, vectors=v / np.linalg.norm(v, axis=1, keepdims=True))


def pencil_poly_matrix(mats, alpha):
    """PolyMatrix of ``sum_j alpha_j (A_j - z_j I)`` in d variables."""
    d = len(mats)
    n = mats[0].shape[0]
    const = sum(a * m for a, m in zip(alpha, mats))
    diag = {}
    for j, a in enumerate(alpha):
        e = [0] * d
        e[j] = 1
        diag[tuple(e)] = -a
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            terms = {(0,) * d: const[r, c]}
            if r == c:
                terms.update(diag)
            row.append(MPoly(d, terms))
        rows.append(row)
    return PolyMatrix(rows)


def build_annihilators(t, alphas, degree_cap=64):
    """Determinant polynomials p_alpha for every alpha of `alphas`.

    Each polynomial comes from `det_poly_matrix`; the residual
    ``||p_alpha(A)||_F`` is recorded through `eval_matrix_tuple`.
    """
    if not isinstance(t, CommutingTuple):
        t = CommutingTuple.from_mats(t)
    if alphas.d != t.d:
        raise ShapeError(f'alphas have d={alphas.d}, tuple has d={t.d}')
    polys = []
    res = np.empty(alphas.count)
    for k, alpha in enumerate(alphas.vectors):
        p = det_poly_matrix(pencil_poly_matrix(t.mats, alpha),
                            degree_cap=degree_cap)
        polys.append(p)
        res[k] = np.linalg.norm(eval_matrix_tuple(p, t))
    return AnnihilatorFamily(polys=polys, alphas=alphas,
                             max_residual=float(res.max()) if res.size else 0.0,
                             residuals=res)


def residual_scale(t, point):
    """``(1 + ||point|| + max_j ||A_j||_F)^N``."""
    point = np.asarray(point, dtype=complex)
    return (1.0 + float(np.linalg.norm(point)) + t.norm()) ** t.n


def draw_probes(rng, spectrum_points, count, radius=2.0, min_dist=0.05):
    """Uniform points of the polydisk of `radius` away from the spectrum."""
    pts = np.asarray(spectrum_points, dtype=complex)
    d = pts.shape[1]
    out = []
    while len(out) < count:
        r = radius * np.sqrt(rng.random(d))
        lam = r * np.exp(2j * np.pi * rng.random(d))
        if np.min(np.linalg.norm(pts - lam, axis=1)) >= min_dist:
            out.append(lam)
    return np.array(out).reshape(count, d)


@dataclass
class VarietyCheckReport:
    max_residual: float
    zero_set_pass: bool
    spectrum_max_ratio: float
    probe_min_ratio: float
    violations: list = field(default_factory=list)
    filtered_probes: int = 0

    def to_json(self):
        return {'max_residual': float(self.max_residual),
                'zero_set_pass': bool(self.zero_set_pass),
                'spectrum_max_ratio': float(self.spectrum_max_ratio),
                'probe_min_ratio': float(self.probe_min_ratio),
                'filtered_probes': int(self.filtered_probes),
                'violations': self.violations}


def _family_values(fam, points):
    """|p_alpha(point)| for each point (rows) and alpha (columns)."""
    return np.column_stack([np.abs(eval_points(p, points)) for p in fam.polys])


def spectrum_as_variety_check(t, fam, probes, tol=1e-6, min_dist=0.05,
                              probe_factor=10.0, seed=0):
    """Check that the family's common zeros are exactly the joint spectrum.

    (a) every joint eigenvalue has ``max_alpha |p_alpha| <= tol * scale``;
    (b) every probe at distance at least `min_dist` from the spectrum has
    ``max_alpha |p_alpha| > probe_factor * tol * scale``.  Probes closer
    than `min_dist` are discarded and counted.
    """
    if not isinstance(t, CommutingTuple):
        t = CommutingTuple.from_mats(t)
    spec = joint_eigenvalues(t, seed=seed).points
    probes = np.asarray(probes, dtype=complex).reshape(-1, t.d)
    violations = []
    sval = _family_values(fam, spec).max(axis=1)
    sscale = np.array([residual_scale(t, lam) for lam in spec])
    sratio = sval / sscale
    for lam, r in zip(spec, sratio):
        if r > tol:
            violations.append({'kind': 'spectrum_not_zero',
                               'point': _pt(lam), 'ratio': float(r)})
    keep = np.array([np.min(np.linalg.norm(spec - lam, axis=1)) >= min_dist
                     for lam in probes], dtype=bool) if len(probes) else \
        np.zeros(0, dtype=bool)
    kept = probes[keep]
    pmin = np.inf
    if len(kept):
        pval = _family_values(fam, kept).max(axis=1)
        pscale = np.array([residual_scale(t, lam) for lam in kept])
        pratio = pval / pscale
        pmin = float(pratio.min())
        for lam, r in zip(kept, pratio):
            if r <= probe_factor * tol:
                violations.append({'kind': 'probe_is_zero',
                                   'point': _pt(lam), 'ratio': float(r)})
    return VarietyCheckReport(
        max_residual=fam.max_residual, zero_set_pass=not violations,
        spectrum_max_ratio=float(sratio.max()), probe_min_ratio=pmin,
        violations=violations, filtered_probes=int((~keep).sum()))


def _pt(lam):
    return [[float(x.real), float(x.imag)] for x in lam]
