"""Disk grids, sampled point clouds and their file formats."""

import csv
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import ShapeError

__all__ = ['DiskGrid', 'VarietySample', 'write_cloud_csv', 'write_svg',
           'GRID_POINT_CAP']

GRID_POINT_CAP = 10 ** 6


@dataclass(frozen=True)
class DiskGrid:
    """Polar grid of the closed unit disk (or of its d-fold product).

    Radii run over [0, 1] including both endpoints, so the boundary circle
    is always sampled; the centre appears once.  With ``spacing='quadratic'``
    the k-th radius is ``(k / (radii - 1))**2``, which spreads square-root
    branches (the typical behaviour of pencil eigenvalues near ``z = 0``)
    evenly in modulus; ``'uniform'`` spaces the radii linearly.
    """
    radii: int = 64
    angles: int = 256
    spacing: str = 'quadratic'

    def __post_init__(self):
        if self.radii < 2 or self.angles < 1:
            raise ShapeError('a disk grid needs at least 2 radii and 1 angle')
        if self.spacing not in ('quadratic', 'uniform'):
            raise ShapeError(f'unknown radius spacing {self.spacing!r}')

    def disk(self):
        r = np.linspace(0.0, 1.0, self.radii)[1:]
        if self.spacing == 'quadratic':
            r = r * r
        th = 2 * np.pi * np.arange(self.angles) / self.angles
        ring = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
        return np.concatenate([[0j], ring])

    def points(self, d=1):
        """Grid points as an (m, d) array; a tensor product for d > 1."""
        z = self.disk()
        if d == 1:
            return z[:, None]
        if z.size ** d > GRID_POINT_CAP:
            raise ShapeError(f'{z.size}^{d} grid points exceed the cap '
                             f'{GRID_POINT_CAP}')
        return np.array(list(product(z, repeat=d)), dtype=complex)

    def to_json(self):
        return {'radii': self.radii, 'angles': self.angles,
                'spacing': self.spacing}


@dataclass
class VarietySample:
    """Point cloud with the source parameter of every point.

    Attributes
    ----------
    sources : ndarray, shape (m, s)
    points : ndarray, shape (m, k)
    residuals : ndarray, shape (m,)
    grid_spec : dict
    skipped : list
        Sources at which the eigen-solve failed.
    """
    sources: np.ndarray
    points: np.ndarray
    residuals: np.ndarray
    grid_spec: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    def __post_init__(self):
        self.residuals = np.asarray(self.residuals, dtype=float).ravel()
        m = self.residuals.size
        src = np.asarray(self.sources, dtype=complex)
        pts = np.asarray(self.points, dtype=complex)
        # keep the column count of 2-d inputs so empty clouds retain k
        self.sources = src if src.ndim == 2 else src.reshape(m, -1)
        self.points = pts if pts.ndim == 2 else pts.reshape(m, -1)
        if len(self.sources) != m or len(self.points) != m:
            raise ShapeError('sources, points and residuals differ in length')

    def __len__(self):
        return self.points.shape[0]

    @property
    def k(self):
        return self.points.shape[1]

    @classmethod
    def empty(cls, k, s=1):
        return cls(np.zeros((0, s), complex), np.zeros((0, k), complex),
                   np.zeros(0))

    def sorted(self):
        """Copy ordered by source, then lexicographically by point."""
        keys = []
        for col in (self.points, self.sources):
            for j in range(col.shape[1] - 1, -1, -1):
                keys += [col[:, j].imag, col[:, j].real]
        order = np.lexsort(keys) if len(self) else np.zeros(0, int)
        return VarietySample(self.sources[order], self.points[order],
                             self.residuals[order], dict(self.grid_spec),
                             list(self.skipped))

    def union(self, other):
        if len(self) and len(other) and other.k != self.k:
            raise ShapeError('cannot merge clouds of different dimension')
        return VarietySample(
            np.concatenate([self.sources, other.sources]),
            np.concatenate([self.points, other.points]),
            np.concatenate([self.residuals, other.residuals]),
            dict(self.grid_spec), self.skipped + other.skipped).sorted()

    def conj(self):
        return VarietySample(self.sources.conj(), self.points.conj(),
                             self.residuals.copy(), dict(self.grid_spec),
                             list(self.skipped)).sorted()


def _fmt(x):
    return repr(float(x))


def write_cloud_csv(sample, path):
    """CSV with columns re_z, im_z, re_l1, im_l1, ..., residual.

    Multi-variable sources are written as re_z1, im_z1, re_z2, ...
    """
    s = sample.sources.shape[1]
    head = (['re_z', 'im_z'] if s == 1 else
            [f'{p}_z{i + 1}' for i in range(s) for p in ('re', 'im')])
    head += [f'{p}_l{j + 1}' for j in range(sample.k) for p in ('re', 'im')]
    head.append('residual')
    with open(path, 'w', newline='') as fh:
        w = csv.writer(fh, lineterminator='\n')
        w.writerow(head)
        for src, pt, r in zip(sample.sources, sample.points,
                              sample.residuals):
            row = []
            for x in list(src) + list(pt):
                row += [_fmt(x.real), _fmt(x.imag)]
            row.append(_fmt(r))
            w.writerow(row)


_PANEL = 300
_PAD = 30


def _panel(x, y, ox, title, xlabel, ylabel):
    lo_x, hi_x = _bounds(x)
    lo_y, hi_y = _bounds(y)
    inner = _PANEL - 2 * _PAD
    px = ox + _PAD + (x - lo_x) / (hi_x - lo_x) * inner
    py = _PAD + (hi_y - y) / (hi_y - lo_y) * inner
    out = [f'<rect x="{ox + _PAD}" y="{_PAD}" width="{inner}" '
           f'height="{inner}" fill="none" stroke="#888"/>',
           f'<text x="{ox + _PANEL / 2:.1f}" y="18" text-anchor="middle" '
           f'font-size="12">{title}</text>',
           f'<text x="{ox + _PANEL / 2:.1f}" y="{_PANEL - 8}" '
           f'text-anchor="middle" font-size="10">{xlabel} '
           f'[{lo_x:.3g}, {hi_x:.3g}]</text>',
           f'<text x="{ox + 10}" y="{_PANEL / 2:.1f}" font-size="10" '
           f'transform="rotate(-90 {ox + 10} {_PANEL / 2:.1f})" '
           f'text-anchor="middle">{ylabel} [{lo_y:.3g}, {hi_y:.3g}]</text>']
    out += [f'<circle cx="{a:.2f}" cy="{b:.2f}" r="1.2" fill="#1f4e99"/>'
            for a, b in zip(px, py)]
    return out


def _bounds(v):
    if v.size == 0:
        return -1.0, 1.0
    lo, hi = float(v.min()), float(v.max())
    if hi - lo < 1e-9:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def write_svg(sample, path, max_points=4000):
    """Static two-panel scatter plot of a cloud.

    For clouds in C^2 or higher the panels are (Re l1, Re l2) and
    (|l1|, |l2|); for clouds in C they are (Re l, Im l) and (|z|, |l|).
    Large clouds are thinned by a fixed stride.
    """
    pts = sample.points
    src = sample.sources
    if len(sample) > max_points:
        idx = np.arange(0, len(sample), -(-len(sample) // max_points))
        pts, src = pts[idx], src[idx]
    if sample.k >= 2:
        panels = [(pts[:, 0].real, pts[:, 1].real, 'Re l1 vs Re l2',
                   'Re l1', 'Re l2'),
                  (np.abs(pts[:, 0]), np.abs(pts[:, 1]), '|l1| vs |l2|',
                   '|l1|', '|l2|')]
    else:
        l1 = pts[:, 0] if sample.k else np.zeros(0, complex)
        panels = [(l1.real, l1.imag, 'Re l vs Im l', 'Re l', 'Im l'),
                  (np.abs(src[:, 0]) if len(src) else np.zeros(0),
                   np.abs(l1), '|z| vs |l|', '|z|', '|l|')]
    body = []
    for i, (x, y, title, xl, yl) in enumerate(panels):
        body += _panel(np.asarray(x, float), np.asarray(y, float),
                       i * _PANEL, title, xl, yl)
    svg = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * _PANEL}" '
           f'height="{_PANEL}" viewBox="0 0 {2 * _PANEL} {_PANEL}">',
           '<rect width="100%" height="100%" fill="white"/>'] + body + \
        ['</svg>']
    with open(path, 'w') as fh:
        fh.write('\n'.join(svg) + '\n')
