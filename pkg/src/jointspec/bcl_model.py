"""Linear-pencil symbols of commuting isometries with finite defect.

A model is a list of orthogonal projections ``P_j`` and unitaries ``U_j``
on C^n.  Each pair defines the pencil

    phi_j(z) = (I - P_j) U_j + z P_j U_j,

and a valid model has commuting pencils whose product is ``z I``.  The
joint spectrum of the multiplication tuple is the union over the closed
disk of the joint spectra of ``(phi_1(z), ..., phi_d(z))``; this module
samples that union, tests purity of each constant term, and for pairs
extracts the bivariate polynomial cutting out the variety.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificationError, ConvergenceError, ShapeError
from .matrix_core import as_cmatrix, matrix_from_json, matrix_to_json
from .matrix_core import numerical_radius
from .mpoly import (MPoly, PolyMatrix, approx_gcd_bivariate, det_poly_matrix,
                    eval_matrix_batch, eval_points, poly_scale,
                    term_scale)
from .sampling import DiskGrid, VarietySample
from .tuple_spectrum import joint_eigenvalues_batch

__all__ = ['BCLData', 'bcl_pair_from', 'PurityResult', 'purity_check',
           'sample_variety', 'PairPolys', 'pair_defining_polys',
           'xi_vanishing', 'annihilator_polys', 'annihilator_check_isometric',
           'distinguished_check', 'direct_sum_variety', 'product_law_residual',
           'bcl_to_json', 'bcl_from_json']

log = logging.getLogger(__name__)

TOL_STRUCT = 1e-8
TOL_MARGIN = 1e-4
N_POWERS = 512
VALIDATION_GRID = DiskGrid(radii=8, angles=32)


@dataclass(frozen=True, eq=False)
class BCLData:
    """Certified projections and unitaries of a pencil model.

    Build with `BCLData.from_lists` or `bcl_pair_from`, which run the
    structural checks; ``product_residual`` and ``comm_residual`` are the
    worst values seen on the validation grid.
    """
    n: int
    d: int
    projections: tuple
    unitaries: tuple
    product_residual: float = 0.0
    comm_residual: float = 0.0

    @classmethod
    def from_lists(cls, projections, unitaries, tol=TOL_STRUCT,
                   grid=VALIDATION_GRID):
        ps = [as_cmatrix(p) for p in projections]
        us = [as_cmatrix(u) for u in unitaries]
        if not ps or len(ps) != len(us):
            raise ShapeError('need equally many projections and unitaries')
        n = ps[0].shape[0]
        if any(m.shape != (n, n) for m in ps + us):
            raise ShapeError('all model matrices must be n x n')
        eye = np.eye(n)
        for j, (p, u) in enumerate(zip(ps, us)):
            if np.linalg.norm(p @ p - p) > tol or \
                    np.linalg.norm(p - p.conj().T) > tol:
                raise CertificationError(f'P_{j + 1} is not an orthogonal '
                                         'projection')
            if np.linalg.norm(u.conj().T @ u - eye) > tol:
                raise CertificationError(f'U_{j + 1} is not unitary')
        for m in ps + us:
            m.setflags(write=False)
        b = cls(n=n, d=len(ps), projections=tuple(ps), unitaries=tuple(us))
        stack = b.symbols(grid.points()[:, 0])
        prod = product_law_residual(b, grid, stack=stack)
        comm = _comm_residual_batch(stack)
        if prod > tol:
            raise CertificationError(f'product law fails on the validation '
                                     f'grid (residual {prod:.3g})')
        if comm > tol:
            raise CertificationError(f'pencils do not commute on the '
                                     f'validation grid (residual {comm:.3g})')
        return cls(n=n, d=b.d, projections=b.projections,
                   unitaries=b.unitaries, product_residual=prod,
                   comm_residual=comm)

    def constant_terms(self):
        """The matrices ``(I - P_j) U_j``."""
        eye = np.eye(self.n)
        return [(eye - p) @ u for p, u in zip(self.projections,
                                              self.unitaries)]

    def linear_terms(self):
        """The matrices ``P_j U_j``."""
        return [p @ u for p, u in zip(self.projections, self.unitaries)]

    def symbols(self, z):
        """Pencil values at the points `z`; returns shape (m, d, n, n)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        c = np.stack(self.constant_terms())
        lin = np.stack(self.linear_terms())
        return c[None] + z[:, None, None, None] * lin[None]


def _comm_residual_batch(stack):
    worst = 0.0
    d = stack.shape[1]
    for i in range(d):
        for j in range(i + 1, d):
            a, b = stack[:, i], stack[:, j]
            worst = max(worst, float(np.linalg.norm(a @ b - b @ a,
                                                    axis=(1, 2)).max()))
    return worst


def product_law_residual(b, grid, stack=None):
    """Largest ``||phi_1(z) ... phi_d(z) - z I||_F`` over the grid."""
    z = grid.points()[:, 0]
    if stack is None:
        stack = b.symbols(z)
    prod = stack[:, 0]
    for j in range(1, b.d):
        prod = prod @ stack[:, j]
    prod = prod - z[:, None, None] * np.eye(b.n)
    return float(np.linalg.norm(prod, axis=(1, 2)).max())


def bcl_pair_from(p, u, tol=TOL_STRUCT):
    """Pair model with ``U_2 = U_1^*`` and ``P_2 = U_1^* (I - P_1) U_1``.

    The pencils are ``(I-P)U + zPU`` and ``U^*P + zU^*(I-P)``.
    """
    p = as_cmatrix(p)
    u = as_cmatrix(u)
    if p.shape != u.shape:
        raise ShapeError('P and U must have the same size')
    us = u.conj().T
    p2 = us @ (np.eye(p.shape[0]) - p) @ u
    p2 = 0.5 * (p2 + p2.conj().T)
    return BCLData.from_lists([p, p2], [u, us], tol=tol)


@dataclass(frozen=True)
class PurityResult:
    pure: bool
    nu: float
    power_norm: float
    inconclusive: bool = False


def _decays(c, n_powers, max_doublings=12):
    m = np.linalg.matrix_power(c, n_powers)
    for _ in range(max_doublings + 1):
        if np.linalg.norm(m, 2) <= 0.5:
            return True
        m = m @ m
    return False


def purity_check(b, j, n_powers=N_POWERS, tol_margin=TOL_MARGIN):
    """Purity of the constant term ``C = (I - P_j) U_j``.

    Two indicators are computed: the numerical radius ``nu(C)`` and
    decay of the powers of C (the norm is first taken at `n_powers`, then
    the power is squared up to twelve times looking for norm <= 1/2; since
    ``||C^k|| <= 2 nu(C)^k`` a radius below ``1 - tol_margin`` always
    decays within that budget).  The pencil is pure when
    ``nu < 1 - tol_margin``.  A radius in ``[1 - tol_margin, 1]`` whose
    powers still decay is borderline and flagged inconclusive.

    Raises
    ------
    ConvergenceError
        If the indicators disagree outside the margin band.
    """
    if not 0 <= j < b.d:
        raise ShapeError(f'index {j} out of range for d={b.d}')
    c = b.constant_terms()[j]
    nu = numerical_radius(c)
    power_norm = float(np.linalg.norm(np.linalg.matrix_power(c, n_powers), 2))
    decays = _decays(c, n_powers)
    pure = nu < 1 - tol_margin
    if not pure and decays and nu <= 1 + tol_margin:
        return PurityResult(pure=False, nu=nu, power_norm=power_norm,
                            inconclusive=True)
    if pure != decays:
        raise ConvergenceError(f'numerical radius {nu:.6g} and power decay '
                               f'disagree for j={j}')
    return PurityResult(pure=pure, nu=nu, power_norm=power_norm)


def sample_variety(b, grid=DiskGrid(), seed=0, tol_product=1e-8):
    """Joint eigenvalues of the pencils at every grid point.

    Points whose eigen-solve fails are skipped and listed in
    ``sample.skipped``; points violating ``lambda_1 ... lambda_d = z`` by
    more than `tol_product` are logged.
    """
    z = grid.points()[:, 0]
    pts, res = joint_eigenvalues_batch(b.symbols(z), seed=seed,
                                       skip_failures=True)
    bad = np.isnan(pts).any(axis=(1, 2))
    skipped = [complex(x) for x in z[bad]]
    for x in skipped:
        log.warning('eigen-solve failed at z=%s; point skipped', x)
    z, pts, res = z[~bad], pts[~bad], res[~bad]
    src = np.repeat(z, b.n)
    flat = pts.reshape(-1, b.d)
    defect = np.abs(flat.prod(axis=1) - src)
    if defect.size and defect.max() > tol_product:
        log.warning('product law defect %.3g exceeds %.3g', defect.max(),
                    tol_product)
    sample = VarietySample(src, flat, res.ravel(), grid.to_json(), skipped)
    return sample.sorted()


def _pencil_minus(b, which, nvars):
    """PolyMatrix of ``sum_j w_j (phi_j(z_1 ... z_d) - z_j I)``.

    `which` gives the weights ``w_j``.
    """
    prod_exp = (1,) * nvars
    const = sum(w * c for w, c in zip(which, b.constant_terms()))
    lin = sum(w * m for w, m in zip(which, b.linear_terms()))
    coeffs = [((0,) * nvars, const), (prod_exp, lin)]
    for j, w in enumerate(which):
        if w != 0:
            e = [0] * nvars
            e[j] = 1
            coeffs.append((tuple(e), -w * np.eye(b.n)))
    return PolyMatrix.from_pencil(coeffs, nvars)


@dataclass
class PairPolys:
    p1: MPoly
    p2: MPoly
    xi: MPoly
    method: str
    contradiction: bool = False


def pair_defining_polys(b, tol=1e-8, method='auto', seed=0):
    """``p_i = det(phi_i(z_1 z_2) - z_i I)`` and their common factor xi.

    With ``method='auto'`` a model with ``P_1 = I`` uses the closed form
    ``xi = prod (z_2 - conj(w_i))`` over the eigenvalues ``w_i`` of
    ``U_1``; otherwise (or with ``method='gcd'``) xi is the approximate
    gcd of p_1 and p_2.  xi is monic with z_2 ranked highest.
    ``contradiction`` is set when xi comes out constant.
    """
    if b.d != 2:
        raise ShapeError('pair_defining_polys needs d == 2')
    if method not in ('auto', 'gcd'):
        raise ValueError(f'unknown method {method!r}')
    p1 = det_poly_matrix(_pencil_minus(b, (1, 0), 2))
    p2 = det_poly_matrix(_pencil_minus(b, (0, 1), 2))
    is_identity = np.linalg.norm(b.projections[0] - np.eye(b.n)) <= tol
    if method == 'auto' and is_identity:
        w = np.linalg.eigvals(b.unitaries[0])
        xi = MPoly.const(1, 2)
        z2 = MPoly.var(1, 2)
        for wi in w:
            xi = xi * (z2 - np.conj(wi))
        xi = xi.monic(order=[1, 0])
        used = 'product'
    else:
        xi = approx_gcd_bivariate(p1, p2, tol=tol, seed=seed)
        used = 'gcd'
    contradiction = xi.total_degree() == 0
    if contradiction:
        log.warning('common factor is constant although the variety is '
                    'infinite')
    return PairPolys(p1=p1, p2=p2, xi=xi, method=used,
                     contradiction=contradiction)


def xi_vanishing(xi, sample):
    """Largest ``|xi(lambda)| / poly_scale(xi, lambda)`` over a cloud."""
    if len(sample) == 0:
        return 0.0
    vals = np.abs(eval_points(xi, sample.points))
    scale = np.array([poly_scale(xi, lam) for lam in sample.points])
    return float((vals / scale).max())


def annihilator_polys(b, alphas):
    """``det(sum_j alpha_j (phi_j(z_1 ... z_d) - z_j I))`` for each alpha."""
    if alphas.d != b.d:
        raise ShapeError(f'alphas have d={alphas.d}, model has d={b.d}')
    return [det_poly_matrix(_pencil_minus(b, a, b.d))
            for a in alphas.vectors]


@dataclass
class IsometricCheckReport:
    max_ratio: float
    passes: bool
    violations: list = field(default_factory=list)

    def to_json(self):
        return {'max_ratio': float(self.max_ratio),
                'passes': bool(self.passes), 'violations': self.violations}


def annihilator_check_isometric(b, alphas, grid=DiskGrid(8, 32), tol=1e-8):
    """Substitute the pencils into each p_alpha and test for zero.

    At every grid point w the matrix ``p_alpha(phi_1(w), ..., phi_d(w))``
    must vanish up to ``tol * scale``, with scale from `term_scale` at the
    spectral norms of the pencil values.
    """
    if b.d < 2:
        raise ShapeError('annihilator_check_isometric needs d >= 2')
    w = grid.points()[:, 0]
    stack = b.symbols(w)
    sizes = np.linalg.norm(stack, ord=2, axis=(2, 3))
    worst = 0.0
    violations = []
    for alpha, p in zip(alphas.vectors, annihilator_polys(b, alphas)):
        vals = np.linalg.norm(eval_matrix_batch(p, stack), axis=(1, 2))
        scale = term_scale(p, sizes)
        ratio = vals / scale
        worst = max(worst, float(ratio.max()) if ratio.size else 0.0)
        for i in np.nonzero(ratio > tol)[0]:
            violations.append({'w': _pairs([w[i]])[0],
                               'alpha': _pairs(alpha),
                               'ratio': float(ratio[i])})
    return IsometricCheckReport(max_ratio=worst, passes=not violations,
                                violations=violations)


@dataclass
class DistinguishedResult:
    is_distinguished: bool
    witnesses: list


def distinguished_check(sample, tol_boundary=1e-6):
    """Grid test of the distinguished-variety property of a cloud.

    TRUE iff (a) some point lies in the open polydisk (all
    ``|lambda_j| < 1 - tol``), (b) every point with source on the unit
    circle has all ``|lambda_j|`` in ``[1 - tol, 1 + tol]``, and (c) no
    point with source in the open disk reaches the boundary (some
    ``|lambda_j| >= 1 - tol``).  Condition (c) is what catches flat
    pieces like ``closed disk x {beta}``: by the product law a point with
    ``|z| < 1`` cannot lie on the torus, so touching the boundary there
    puts it in the boundary minus the torus.  A FALSE comes with witness
    points; a TRUE is evidence at grid resolution only.
    """
    if len(sample) == 0:
        raise ShapeError('empty sample')
    mod = np.abs(sample.points)
    src = np.abs(sample.sources).max(axis=1)
    witnesses = []
    interior = (mod < 1 - tol_boundary).all(axis=1)
    if not interior.any():
        witnesses.append({'kind': 'no_interior_point'})
    on_circle = src >= 1 - 1e-12
    off_torus = on_circle & ((mod < 1 - tol_boundary)
                             | (mod > 1 + tol_boundary)).any(axis=1)
    touching = (~on_circle) & (src < 1 - tol_boundary) & \
        (mod >= 1 - tol_boundary).any(axis=1)
    for kind, mask in (('boundary_off_torus', off_torus),
                       ('interior_source_on_boundary', touching)):
        for i in np.nonzero(mask)[0][:20]:
            witnesses.append({'kind': kind,
                              'z': _pairs(sample.sources[i]),
                              'point': _pairs(sample.points[i])})
    return DistinguishedResult(is_distinguished=not witnesses,
                               witnesses=witnesses)


def _pairs(v):
    return [[float(x.real), float(x.imag)] for x in v]


def direct_sum_variety(base, alphas_u=(), betas_u=(), grid=DiskGrid(),
                       tol=1e-12):
    """Add the flat pieces ``{a} x disk`` and ``disk x {b}`` to a cloud.

    `alphas_u` and `betas_u` must be unimodular.  Source of every added
    point is the product of its coordinates.
    """
    for v in list(alphas_u) + list(betas_u):
        if abs(abs(v) - 1) > tol:
            raise CertificationError(f'{v} is not unimodular')
    if len(base) and base.k != 2:
        raise ShapeError('direct_sum_variety needs a cloud in C^2')
    z = grid.points()[:, 0]
    out = base if len(base) else VarietySample.empty(2)
    pieces = [np.column_stack([np.full_like(z, a), z]) for a in alphas_u]
    pieces += [np.column_stack([z, np.full_like(z, bb)]) for bb in betas_u]
    for pts in pieces:
        out = out.union(VarietySample(pts.prod(axis=1), pts,
                                      np.zeros(len(pts)), grid.to_json()))
    if not pieces:
        out = out.sorted()
    out.grid_spec = grid.to_json()
    return out


def bcl_to_json(b):
    return {'n': b.n, 'd': b.d,
            'projections': [matrix_to_json(p) for p in b.projections],
            'unitaries': [matrix_to_json(u) for u in b.unitaries]}


def bcl_from_json(obj, tol=TOL_STRUCT):
    """Parse ``{"n", "d", "projections": [...], "unitaries": [...]}``."""
    try:
        n, d = int(obj['n']), int(obj['d'])
        ps = [matrix_from_json(m) for m in obj['projections']]
        us = [matrix_from_json(m) for m in obj['unitaries']]
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f'malformed model object: {exc}')
    if len(ps) != d or len(us) != d or any(m.shape[0] != n for m in ps + us):
        raise ShapeError('model object fields disagree with n and d')
    return BCLData.from_lists(ps, us, tol=tol)
