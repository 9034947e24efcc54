"""Mass distributions, half-spaces and complex regular q-fans.

A mass distribution is a weighted point cloud. With ``bandwidth > 0`` every
membership test is replaced by a logistic ramp of that length scale, so the
masses become smooth functions of the partition parameters. With
``bandwidth == 0`` membership is sharp: half-space boundary points count half
to each side, and fan sectors are the half-open angular intervals
``[2 pi j / q, 2 pi (j + 1) / q)``, with points on the fan centre split evenly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit

from ._cplx import root_of_unity, to_complex, to_real
from .errors import DimensionError, MeasureFormatError, ZeroMassError

FORMAT_VERSION = 1

# angular slack, in units of one sector, below which a point counts as lying on a boundary ray
BOUNDARY_SNAP = 1e-12

Side = Literal["plus", "minus"]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MassDistribution:
    """Weighted point cloud in R^dim standing in for an absolutely continuous measure.

    Parameters
    ----------
    points : array_like, shape (N, dim)
    weights : array_like, shape (N,), optional
        Positive weights, all 1 by default.
    bandwidth : float
        Logistic smoothing length in coordinate units; 0 means sharp.
    """

    points: np.ndarray
    weights: np.ndarray | None = None
    bandwidth: float = 0.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise DimensionError(f"points must be a non-empty (N, dim) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if self.weights is None:
            w = np.ones(pts.shape[0])
        else:
            w = np.asarray(self.weights, dtype=float)
        if w.shape != (pts.shape[0],):
            raise DimensionError(f"expected {pts.shape[0]} weights, got shape {w.shape}")
        if not np.all(w > 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be positive and finite")
        bw = float(self.bandwidth)
        if not (bw >= 0 and np.isfinite(bw)):
            raise ValueError("bandwidth must be a finite nonnegative number")
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "bandwidth", bw)
        object.__setattr__(self, "_total", float(np.sum(w)))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def total(self) -> float:
        return self._total

    @property
    def sharp(self) -> bool:
        return self.bandwidth == 0.0

    def __len__(self):
        return self.points.shape[0]

    def centroid(self):
        return self.weights @ self.points / self.total

    def translated(self, shift):
        return MassDistribution(self.points + np.asarray(shift, float), self.weights, self.bandwidth)

    def scaled(self, factor):
        """Scale coordinates and bandwidth by ``factor``."""
        return MassDistribution(self.points * factor, self.weights, self.bandwidth * factor)

    def with_bandwidth(self, bandwidth):
        return MassDistribution(self.points, self.weights, bandwidth)

    # -- JSON ---------------------------------------------------------------
    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "dim": self.dim,
            "points": self.points.tolist(),
            "weights": self.weights.tolist(),
            "bandwidth": self.bandwidth,
        }

    @classmethod
    def from_dict(cls, data):
        return measure_from_dict(data)


def measure_from_dict(data) -> MassDistribution:
    """Validate a parsed measure JSON object and build the distribution."""
    if not isinstance(data, dict):
        raise MeasureFormatError("measure: top level must be a JSON object")
    if "format_version" in data and data["format_version"] != FORMAT_VERSION:
        raise MeasureFormatError(f"format_version: unsupported value {data['format_version']!r}")
    if "dim" not in data:
        raise MeasureFormatError("dim: missing")
    dim = data["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise MeasureFormatError(f"dim: must be a positive integer, got {dim!r}")
    if "points" not in data:
        raise MeasureFormatError("points: missing")
    pts = data["points"]
    if not isinstance(pts, list) or not pts:
        raise MeasureFormatError("points: must be a non-empty array of arrays")
    for i, p in enumerate(pts):
        if not isinstance(p, list) or len(p) != dim:
            raise MeasureFormatError(f"points[{i}]: must be an array of {dim} numbers")
        if not all(_is_number(c) for c in p):
            raise MeasureFormatError(f"points[{i}]: non-numeric coordinate")
    weights = data.get("weights")
    if weights is not None:
        if not isinstance(weights, list) or len(weights) != len(pts):
            raise MeasureFormatError(f"weights: must be an array of {len(pts)} numbers")
        for i, w in enumerate(weights):
            if not _is_number(w) or not w > 0:
                raise MeasureFormatError(f"weights[{i}]: must be a positive number")
    bw = data.get("bandwidth", 0.0)
    if not _is_number(bw) or bw < 0:
        raise MeasureFormatError(f"bandwidth: must be a nonnegative number, got {bw!r}")
    return MassDistribution(np.array(pts, dtype=float), weights, float(bw))


def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and np.isfinite(v)


def load_measure(path) -> MassDistribution:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MeasureFormatError(f"{path}: not valid JSON ({exc})") from None
    return measure_from_dict(data)


def save_measure(mu: MassDistribution, path):
    Path(path).write_text(json.dumps(mu.to_dict()))


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """``H(a, b) = {u : <u, a> = b}``; the plus side is ``<u, a> >= b``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        a = np.asarray(self.normal, dtype=float)
        if a.ndim != 1:
            raise DimensionError("normal must be a vector")
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise ValueError(f"normal must be a unit vector (norm {np.linalg.norm(a)!r})")
        object.__setattr__(self, "normal", _frozen(a))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self):
        return self.normal.shape[0]

    def flipped(self):
        """Same hyperplane with the sides swapped."""
        return Hyperplane(-self.normal, -self.offset)

    def to_dict(self):
        return {"type": "hyperplane", "normal": self.normal.tolist(), "offset": self.offset}


@dataclass(frozen=True, eq=False)
class ComplexRegularQFan:
    """Complex regular q-fan in R^{2t} = C^t.

    Sector ``j`` holds the points ``z`` with
    ``arg(<z, a>_C - conj(b)) in [2 pi j / q, 2 pi (j + 1) / q)``, where
    ``<z, a>_C = sum z_i conj(a_i)``.
    """

    arity: int
    normal: np.ndarray
    offset: complex

    def __post_init__(self):
        q = int(self.arity)
        if q < 2:
            raise ValueError("arity must be at least 2")
        a = np.asarray(self.normal, dtype=complex)
        if a.ndim != 1:
            raise DimensionError("normal must be a complex vector")
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise ValueError(f"normal must have unit Hermitian norm (norm {np.linalg.norm(a)!r})")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "arity", q)
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", complex(self.offset))

    @property
    def half_dim(self):
        return self.normal.shape[0]

    @property
    def q(self):
        return self.arity

    @property
    def real_normal(self):
        return to_real(self.normal)

    @classmethod
    def from_real(cls, q, normal, offset=0j):
        """Build from an interleaved real unit normal in R^{2t}."""
        return cls(q, to_complex(normal), offset)

    def coordinate(self, z):
        """``<z, a>_C - conj(b)``: the complex coordinate whose argument picks the sector."""
        return z @ np.conj(self.normal) - np.conj(self.offset)

    def translated(self, shift):
        """The fan moved by ``shift`` (interleaved real vector)."""
        c = to_complex(np.asarray(shift, float))
        new_conj_b = np.conj(self.offset) + c @ np.conj(self.normal)
        return ComplexRegularQFan(self.arity, self.normal, np.conj(new_conj_b))

    def scaled(self, factor):
        return ComplexRegularQFan(self.arity, self.normal, self.offset * factor)

    def to_dict(self):
        return {
            "type": "fan",
            "q": self.arity,
            "normal": self.real_normal.tolist(),
            "offset": [self.offset.real, self.offset.imag],
        }


def partition_from_dict(d):
    kind = d.get("type")
    if kind == "hyperplane":
        return Hyperplane(np.array(d["normal"], float), float(d["offset"]))
    if kind == "fan":
        re, im = d["offset"]
        return ComplexRegularQFan.from_real(int(d["q"]), np.array(d["normal"], float), complex(re, im))
    raise MeasureFormatError(f"partitions: unknown type {kind!r}")


# -- membership kernels ------------------------------------------------------

def _sharp_step(s):
    return np.where(s > 0, 1.0, np.where(s < 0, 0.0, 0.5))


def halfspace_weights(s, bandwidth):
    """Per-point membership of the side ``s >= 0`` given signed offsets ``s``."""
    if bandwidth > 0:
        return expit(s / bandwidth)
    return _sharp_step(s)


def sector_weights(v, q, bandwidth):
    """Membership of complex fan coordinates ``v`` (any shape) in the q sectors.

    Returns an array of shape ``v.shape + (q,)`` whose last axis sums to one.
    The smoothed weight of sector ``j`` is the product of logistic ramps of
    the signed distances to the two lines carrying its boundary rays, then
    normalised; for ``q = 2`` it is a single logistic of the distance to the
    dividing hyperplane. For ``q = 2`` and ``q = 4`` this coincides with the
    half-space smoothing used by :func:`halfspace_measure`.
    """
    v = np.asarray(v, dtype=complex)
    if bandwidth <= 0:
        x = np.mod(np.angle(v), 2 * np.pi) * (q / (2 * np.pi))
        # points within rounding error of a boundary ray belong to the sector it opens
        r = np.round(x)
        x = np.where(np.abs(x - r) < BOUNDARY_SNAP, r, x)
        idx = np.mod(np.floor(x).astype(int), q)
        out = np.zeros(v.shape + (q,))
        np.put_along_axis(out, idx[..., None], 1.0, axis=-1)
        out[v == 0] = 1.0 / q
        return out
    if q == 2:
        up = expit(v.imag / bandwidth)
        out = np.stack([up, 1.0 - up], axis=-1)
    else:
        rot = np.array([np.conj(root_of_unity(q, j)) for j in range(q)])
        # signed distance to the line through boundary ray j, positive counterclockwise of it
        e = expit((v[..., None] * rot).imag / bandwidth)
        out = e * (1.0 - np.roll(e, -1, axis=-1))
    return out / out.sum(axis=-1, keepdims=True)


# -- operations --------------------------------------------------------------

def _check_dim(mu, n, what):
    if mu.dim != n:
        raise DimensionError(f"measure has dimension {mu.dim} but {what} lives in R^{n}")


def halfspace_measure(mu: MassDistribution, h: Hyperplane, side: Side = "plus") -> float:
    """Mass of ``H^+ = {<u, a> >= b}`` (or ``H^-``)."""
    _check_dim(mu, h.dim, "the hyperplane")
    s = mu.points @ h.normal - h.offset
    if side == "minus":
        s = -s
    elif side != "plus":
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    return float(mu.weights @ halfspace_weights(s, mu.bandwidth))


def sector_membership(z, fan: ComplexRegularQFan, bandwidth: float = 0.0) -> np.ndarray:
    """Weights of the point ``z`` (interleaved real, length 2t) across the fan's sectors."""
    z = np.asarray(z, dtype=float)
    if z.shape != (2 * fan.half_dim,):
        raise DimensionError(f"point must have {2 * fan.half_dim} real coordinates, got shape {z.shape}")
    return sector_weights(fan.coordinate(to_complex(z)), fan.arity, bandwidth)


def sector_measures(mu: MassDistribution, fan: ComplexRegularQFan) -> np.ndarray:
    """Masses of the q sectors of ``fan``."""
    _check_dim(mu, 2 * fan.half_dim, "the fan")
    v = fan.coordinate(to_complex(mu.points))
    return mu.weights @ sector_weights(v, fan.arity, mu.bandwidth)


def _canonical_sign(x):
    nz = np.flatnonzero(x)
    return -1.0 if nz.size and x[nz[0]] < 0 else 1.0


def level_offset(mu: MassDistribution, direction) -> float:
    """Offset ``t`` such that ``H(direction, t)`` bisects ``mu``.

    Smoothed measures: the unique root of the plus-mass, found by bracketed
    root finding. Sharp measures: the centre of the interval of bisecting
    offsets. The result is exactly odd in ``direction``.
    """
    x = np.asarray(direction, dtype=float)
    _check_dim(mu, x.shape[0], "the direction")
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    if mu.total <= 0:
        raise ZeroMassError("measure has zero total mass")
    sign = _canonical_sign(x)
    y = mu.points @ (sign * x)
    return sign * (_smooth_level(y, mu) if mu.bandwidth > 0 else _sharp_level(y, mu.weights, mu.total))


def _sharp_level(y, w, total):
    order = np.argsort(y, kind="stable")
    ys, ws = y[order], w[order]
    above = np.cumsum(ws[::-1])[::-1]  # above[k] = mass of sorted points k..N-1
    half = 0.5 * total
    k = int(np.flatnonzero(above >= half - 1e-12 * total)[-1])
    if abs(above[k] - half) <= 1e-12 * total and k > 0:
        return 0.5 * (ys[k - 1] + ys[k])
    return float(ys[k])


def _smooth_level(y, mu):
    eps = mu.bandwidth
    w = mu.weights
    half = 0.5 * mu.total

    def excess(t):
        return w @ expit((y - t) / eps) - half

    lo, hi = y.min() - 40 * eps, y.max() + 40 * eps
    scale = max(1.0, np.abs(y).max())
    t = brentq(excess, lo, hi, xtol=1e-14 * scale, rtol=1e-15, maxiter=200)
    return float(t)


def bisection_defect(measures: Sequence[MassDistribution], hyperplanes: Sequence[Hyperplane]) -> float:
    """Largest ``|mass(H^+)/total - 1/2|`` over measures and hyperplanes."""
    worst = 0.0
    for mu in measures:
        for h in hyperplanes:
            worst = max(worst, abs(halfspace_measure(mu, h) / mu.total - 0.5))
    return worst


def equipartition_defect(measures: Sequence[MassDistribution], fans: Sequence[ComplexRegularQFan]) -> float:
    """Largest ``|mass(S_j)/total - 1/q|`` over measures, fans and sectors; 0 iff exact equipartition."""
    worst = 0.0
    for mu in measures:
        for fan in fans:
            m = sector_measures(mu, fan) / mu.total
            worst = max(worst, float(np.max(np.abs(m - 1.0 / fan.arity))))
    return worst
