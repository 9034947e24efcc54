"""Brute-force grid scans in the plane and ball instances for upper bounds.

Scans are independent of the sphere searches. They enumerate the planar
parameter families directly: fan centre and rotation for regular q-fans,
angle and offset for lines.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from ._cplx import to_complex
from .errors import DimensionError
from .measures import ComplexRegularQFan, Hyperplane, MassDistribution, halfspace_weights, sector_weights


@dataclass(frozen=True)
class ScanGrid:
    """Parameter grid for the planar scans.

    Fan scans use ``center_box`` x ``center_steps`` per axis and ``angle_steps``
    rotations in ``[0, 2 pi / q)``. Line scans use ``angle_steps`` normal
    angles in ``[0, pi)`` and ``offset_steps`` offsets over ``offset_range``.
    """

    center_box: tuple = ((-1.0, 1.0), (-1.0, 1.0))
    center_steps: int = 50
    angle_steps: int = 60
    offset_range: tuple = (-2.0, 2.0)
    offset_steps: int = 100

    def __post_init__(self):
        if min(self.center_steps, self.angle_steps, self.offset_steps) < 2:
            raise ValueError("all step counts must be at least 2")
        (x0, x1), (y0, y1) = self.center_box
        if not (x1 > x0 and y1 > y0):
            raise ValueError("center_box must be nonempty")
        if not self.offset_range[1] > self.offset_range[0]:
            raise ValueError("offset_range must be nonempty")

    def centers(self):
        (x0, x1), (y0, y1) = self.center_box
        return np.linspace(x0, x1, self.center_steps), np.linspace(y0, y1, self.center_steps)

    def fan_angles(self, q):
        return np.arange(self.angle_steps) * (2 * np.pi / q / self.angle_steps)

    def line_angles(self):
        return np.arange(self.angle_steps) * (np.pi / self.angle_steps)

    def offsets(self):
        return np.linspace(*self.offset_range, self.offset_steps)

    def fan_resolution(self, q):
        """Angular step of the fan scan in radians."""
        return 2 * np.pi / q / self.angle_steps

    def line_resolution(self):
        return np.pi / self.angle_steps

    @classmethod
    def around(cls, measures, spread_fraction=1.0, **kw):
        """Grid centred on the first measure's centroid.

        The centre box has half-width ``spread_fraction`` times the RMS radius;
        the line offsets cover three RMS radii beyond the farthest centroid coordinate.
        """
        mu = measures[0]
        c = mu.centroid()
        spread = float(np.sqrt(mu.weights @ np.sum((mu.points - c) ** 2, axis=1) / mu.total))
        h = spread_fraction * spread
        reach = 3 * spread + float(np.abs(c).max())
        kw.setdefault("offset_range", (-reach, reach))
        return cls(center_box=((c[0] - h, c[0] + h), (c[1] - h, c[1] + h)), **kw)


@dataclass
class ScanResult:
    best: object
    min_defect: float
    resolution: float
    table: np.ndarray | None = None
    axes: tuple = ()
    axis_names: tuple = ()

    @property
    def rows(self):
        return int(np.prod([len(a) for a in self.axes]))

    def write_csv(self, path):
        """One row per grid cell: the axis coordinates followed by the defect."""
        if self.table is None:
            raise ValueError("scan was run without keeping the table")
        grids = np.meshgrid(*self.axes, indexing="ij")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(list(self.axis_names) + ["defect"])
            for row in zip(*(g.ravel() for g in grids), self.table.ravel()):
                w.writerow([repr(float(v)) for v in row])


def planar_fan(q, center, angle):
    """Regular q-fan in the plane with centre ``center`` rotated by ``angle``."""
    a = np.exp(1j * angle)
    c = complex(center[0], center[1])
    return ComplexRegularQFan(q, np.array([a]), np.conj(c) * a)


def planar_fan_scan(mu: MassDistribution, q: int, grid: ScanGrid = ScanGrid(),
                    keep_table: bool = False) -> ScanResult:
    """Exhaustive equipartition defect of planar regular q-fans over the grid."""
    if mu.dim != 2:
        raise DimensionError(f"planar scan needs a measure on R^2, got dimension {mu.dim}")
    z = to_complex(mu.points)[:, 0]
    xs, ys = grid.centers()
    angles = grid.fan_angles(q)
    abar = np.conj(np.exp(1j * angles))[:, None]
    table = np.empty((len(xs), len(ys), len(angles)))
    for i, cx in enumerate(xs):
        for j, cy in enumerate(ys):
            c = complex(cx, cy)
            v = z[None, :] * abar - c * abar
            masses = np.einsum("anq,n->aq", sector_weights(v, q, mu.bandwidth), mu.weights)
            table[i, j] = np.max(np.abs(masses / mu.total - 1.0 / q), axis=1)
    i, j, a = np.unravel_index(int(np.argmin(table)), table.shape)
    best = planar_fan(q, (xs[i], ys[j]), angles[a])
    return ScanResult(best, float(table[i, j, a]), grid.fan_resolution(q),
                      table if keep_table else None, (xs, ys, angles), ("center_x", "center_y", "angle"))


def planar_line_scan(mu1: MassDistribution, mu2: MassDistribution, grid: ScanGrid = ScanGrid(),
                     keep_table: bool = False) -> ScanResult:
    """Exhaustive search for a line bisecting both planar measures."""
    for mu in (mu1, mu2):
        if mu.dim != 2:
            raise DimensionError(f"planar scan needs measures on R^2, got dimension {mu.dim}")
    angles = grid.line_angles()
    offs = grid.offsets()
    normals = np.column_stack([np.cos(angles), np.sin(angles)])
    table = np.zeros((len(angles), len(offs)))
    for mu in (mu1, mu2):
        proj = mu.points @ normals.T  # (N, A)
        s = proj.T[:, None, :] - offs[None, :, None]
        plus = halfspace_weights(s, mu.bandwidth) @ mu.weights
        table = np.maximum(table, np.abs(plus / mu.total - 0.5))
    a, o = np.unravel_index(int(np.argmin(table)), table.shape)
    best = Hyperplane(normals[a], offs[o])
    return ScanResult(best, float(table[a, o]), grid.line_resolution(),
                      table if keep_table else None, (angles, offs), ("angle", "offset"))


def simplex_vertices(m: int, n: int) -> np.ndarray:
    """m vertices of a regular simplex in R^n with unit edge length (m <= n + 1)."""
    if m > n + 1:
        raise ValueError(f"at most n + 1 = {n + 1} affinely independent points in R^{n}")
    v = np.eye(n)
    if m == n + 1:
        v = np.vstack([v, np.full(n, (1 - np.sqrt(n + 1)) / n)])
    return v[:m] / np.sqrt(2)


def sample_ball(n: int, count: int, rng, center=None, radius=1.0) -> np.ndarray:
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.random(count) ** (1.0 / n)
    pts = g * r[:, None]
    return pts if center is None else pts + np.asarray(center, float)


def upper_bound_instance(q: int, m: int, n: int, separation: float = 4.0, samples: int = 500,
                         seed: int = 0, bandwidth: float = 0.0) -> list[MassDistribution]:
    """m sampled unit balls in R^n with affinely independent centres ``separation`` apart.

    No regular q-fan family beyond the ball-separation bound can equipartition
    all of them; ``q`` is recorded only to match the bound being exercised.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if m < 1 or m > n + 1:
        raise ValueError(f"need 1 <= m <= n + 1 = {n + 1}")
    if not separation > 2:
        raise ValueError("separation must exceed 2 so that the unit balls are disjoint")
    rng = np.random.default_rng(seed)
    centers = simplex_vertices(m, n) * separation
    return [MassDistribution(sample_ball(n, samples, rng, c), bandwidth=bandwidth) for c in centers]


def two_disk_instance(points_per_disk: int = 100, distance: float = 10.0, seed: int = 0,
                      bandwidth: float = 0.0) -> MassDistribution:
    """Union of two sampled unit disks centred at ``(+-distance, 0)``."""
    rng = np.random.default_rng(seed)
    pts = np.vstack([sample_ball(2, points_per_disk, rng, (-distance, 0.0)),
                     sample_ball(2, points_per_disk, rng, (distance, 0.0))])
    return MassDistribution(pts, bandwidth=bandwidth)

