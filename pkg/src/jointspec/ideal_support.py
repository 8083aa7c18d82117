"""Support of a polynomial ideal and its agreement with the joint spectrum.

For an ideal J of C[z] generated by polynomials g_1, ..., g_m, a point
lambda lies outside the support exactly when some generator is nonzero
there (then ``1 = g(z)/g(lambda) + sum_j (z_j - lambda_j) h_j`` for suitable
h_j).  Support membership is therefore the scaled common-zero test
implemented here.  For the annihilating ideal of a commuting tuple the
support inside the closed polydisk equals the joint spectrum.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InconclusiveError, ShapeError
from .mpoly import MPoly, poly_scale
from .tuple_spectrum import CommutingTuple, joint_eigenvalues
from .tuple_spectrum import taylor_singular_at

__all__ = ['PolyIdeal', 'support_ratio', 'support_membership',
           'support_spectrum_identity_check', 'IdentityReport',
           'ideal_to_json', 'ideal_from_json']


@dataclass(frozen=True, eq=False)
class PolyIdeal:
    nvars: int
    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ShapeError('an ideal needs at least one generator')
        if any(g.nvars != self.nvars for g in gens):
            raise ShapeError('generators must share nvars')
        object.__setattr__(self, 'generators', gens)

    @classmethod
    def of(cls, generators):
        gens = tuple(generators)
        if not gens:
            raise ShapeError('an ideal needs at least one generator')
        return cls(gens[0].nvars, gens)


def support_ratio(j, lam):
    """``max_g |g(lambda)| / (1 + ||g||_1 (1 + ||lambda||)^deg g)``."""
    lam = np.asarray(lam, dtype=complex).ravel()
    if lam.size != j.nvars:
        raise ShapeError(f'point has length {lam.size}, ideal has '
                         f'nvars={j.nvars}')
    return max(abs(g(lam)) / poly_scale(g, lam) for g in j.generators)


def support_membership(j, lam, tol=1e-8):
    """TRUE iff every generator vanishes at `lam` to scaled tolerance."""
    return bool(support_ratio(j, lam) <= tol)


@dataclass
class IdentityReport:
    agree: bool
    checked: int
    inconclusive: int
    disagreements: list = field(default_factory=list)

    def to_json(self):
        return {'agree': bool(self.agree), 'checked': int(self.checked),
                'inconclusive': int(self.inconclusive),
                'disagreements': self.disagreements}


def support_spectrum_identity_check(t, fam, probes, tol=1e-8, seed=0,
                                    tol_spec=1e-6):
    """Three-way agreement on candidates inside the closed polydisk.

    Candidates are the joint eigenvalues together with `probes`, kept when
    every coordinate has modulus at most one.  At each candidate the
    following must agree: distance at most `tol_spec` to the joint
    spectrum, `support_membership` of the ideal generated by ``fam.polys``
    and `taylor_singular_at`.  Candidates whose support ratio falls in
    ``(tol, 10 tol]`` or whose Koszul rank is ambiguous are counted as
    inconclusive and skipped.
    """
    if not isinstance(t, CommutingTuple):
        t = CommutingTuple.from_mats(t)
    ideal = PolyIdeal.of(fam.polys)
    spec = joint_eigenvalues(t, seed=seed).points
    probes = np.asarray(probes, dtype=complex).reshape(-1, t.d)
    cands = np.concatenate([spec, probes])
    cands = cands[(np.abs(cands) <= 1 + 1e-12).all(axis=1)]
    disagreements = []
    inconclusive = 0
    checked = 0
    for lam in cands:
        ratio = support_ratio(ideal, lam)
        if tol < ratio <= 10 * tol:
            inconclusive += 1
            continue
        try:
            koszul = taylor_singular_at(t, lam)
        except InconclusiveError:
            inconclusive += 1
            continue
        member = bool(np.min(np.linalg.norm(spec - lam, axis=1)) <= tol_spec)
        supp = bool(ratio <= tol)
        checked += 1
        if not member == supp == koszul:
            disagreements.append({
                'point': [[float(x.real), float(x.imag)] for x in lam],
                'joint_eigenvalue': member, 'support': supp,
                'koszul': bool(koszul), 'ratio': float(ratio)})
    return IdentityReport(agree=not disagreements, checked=checked,
                          inconclusive=inconclusive,
                          disagreements=disagreements)


def ideal_to_json(j):
    return {'nvars': j.nvars, 'generators': [g.to_json()
                                             for g in j.generators]}


def ideal_from_json(obj):
    """Parse ``{"nvars": int, "generators": [poly, ...]}``."""
    try:
        nvars = int(obj['nvars'])
        gens = [MPoly.from_json(g) for g in obj['generators']]
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f'malformed ideal object: {exc}')
    return PolyIdeal(nvars, gens)
