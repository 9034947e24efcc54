"""Drivers that build partitions from sphere points and solve for equipartitions.

* :func:`bisect_orthogonal`: k pairwise-orthogonal hyperplanes, each bisecting m measures.
* :func:`equipartition_fans`: k complex regular q-fans (q an odd prime), each
  equipartitioning m measures.
* :func:`equipartition_fourfans`: k complex regular 4-fans for one measure.
* :func:`near_equipartition_2q`: q hyperplanes at consecutive angles pi/q whose
  2q sectors have equal measure.

The first measure is always the levelling measure: levelled hyperplanes are
offset so that they bisect it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence

import numpy as np

from ._cplx import cscale, mul_i, to_complex, to_real
from .errors import (
    DegenerateRegion,
    DimensionError,
    DimensionTooSmall,
    KTooLarge,
    MeasureFormatError,
    NoConvergence,
)
from .frames import FrameSection, complex_rank, extract_complex_independent, rh_rho
from .measures import (
    FORMAT_VERSION,
    ComplexRegularQFan,
    Hyperplane,
    MassDistribution,
    halfspace_measure,
    halfspace_weights,
    level_offset,
    partition_from_dict,
    sector_measures,
)
from .search import (
    SearchConfig,
    i_odd_zero_search,
    is_odd_prime,
    odd_zero_search,
    orbit_coincidence_search,
)

Mode = Literal["complex_orthogonal", "real_independent"]


# -- reports ---------------------------------------------------------------

@dataclass
class SolveReport:
    """Outcome of a driver run.

    ``masses[l][i][j]`` is the mass of part ``j`` of partition ``i`` for measure
    ``l``. For ``kind == "sectors2q"`` the single partition group has 2q
    (overlapping) sectors built from the q hyperplanes in ``partitions``.
    """

    kind: str
    witness: np.ndarray
    partitions: list
    masses: np.ndarray
    totals: np.ndarray
    defect: float
    iterations: int = 0
    restarts_used: int = 0
    converged: bool = False
    tol: float = 0.0
    extras: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "kind": self.kind,
            "witness": np.asarray(self.witness).tolist(),
            "partitions": [p.to_dict() for p in self.partitions],
            "masses": np.asarray(self.masses).tolist(),
            "totals": np.asarray(self.totals).tolist(),
            "defect": self.defect,
            "tol": self.tol,
            "diagnostics": {
                "iterations": self.iterations,
                "restarts_used": self.restarts_used,
                "converged": self.converged,
            },
            "extras": _jsonable(self.extras),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        if d.get("format_version") != FORMAT_VERSION:
            raise MeasureFormatError(f"format_version: unsupported value {d.get('format_version')!r}")
        for key in ("kind", "witness", "partitions", "masses", "totals", "defect"):
            if key not in d:
                raise MeasureFormatError(f"{key}: missing from report")
        diag = d.get("diagnostics", {})
        return cls(
            kind=d["kind"],
            witness=np.array(d["witness"], float),
            partitions=[partition_from_dict(p) for p in d["partitions"]],
            masses=np.array(d["masses"], float),
            totals=np.array(d["totals"], float),
            defect=float(d["defect"]),
            iterations=int(diag.get("iterations", 0)),
            restarts_used=int(diag.get("restarts_used", 0)),
            converged=bool(diag.get("converged", False)),
            tol=float(d.get("tol", 0.0)),
            extras=d.get("extras", {}),
        )


def load_report(path) -> SolveReport:
    return SolveReport.from_dict(json.loads(Path(path).read_text()))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def table_defect(kind, masses, totals) -> float:
    """Equipartition defect of a masses table, as stored in reports."""
    m = np.asarray(masses, float) / np.asarray(totals, float)[:, None, None]
    if m.size == 0:
        return 0.0
    if kind == "sectors2q":
        return float(np.max(np.abs(m - m.mean(axis=-1, keepdims=True))))
    return float(np.max(np.abs(m - 1.0 / m.shape[-1])))


def partition_masses(kind, measures, partitions) -> np.ndarray:
    """Recompute the masses table of ``partitions`` for every measure."""
    rows = []
    for mu in measures:
        if kind == "sectors2q":
            rows.append([sectors2q_masses(mu, partitions)[0]])
        elif kind == "bisect":
            rows.append([[halfspace_measure(mu, h, "plus"), halfspace_measure(mu, h, "minus")]
                         for h in partitions])
        else:
            rows.append([sector_measures(mu, f) for f in partitions])
    return np.array(rows, float)


def verify_report(report: SolveReport, measures: Sequence[MassDistribution]) -> float:
    """Defect recomputed from the report's partitions against ``measures``."""
    masses = partition_masses(report.kind, measures, report.partitions)
    return table_defect(report.kind, masses, np.array([mu.total for mu in measures]))


def _finish(kind, measures, partitions, witness, res, tol, extras):
    totals = np.array([mu.total for mu in measures])
    masses = partition_masses(kind, measures, partitions)
    defect = table_defect(kind, masses, totals)
    report = SolveReport(kind, np.asarray(witness, float), partitions, masses, totals, defect,
                         res.iterations if res else 0, res.restarts_used if res else 0,
                         defect <= tol, tol, extras)
    if res is not None:
        report.extras.setdefault("search", _jsonable(res.diagnostics))
    if not report.converged:
        raise NoConvergence(f"{kind}: defect {defect:.3e} exceeds tol {tol:g}", result=res, report=report)
    return report


def _best_effort(search, *args, **kw):
    # an exhausted search still yields its best point, which _finish turns into a report
    try:
        return search(*args, **kw)
    except DegenerateRegion:
        raise
    except NoConvergence as exc:
        if exc.result is None:
            raise
        return exc.result


def _check_measures(measures, dim=None):
    if not measures:
        raise ValueError("at least one measure is required")
    n = measures[0].dim if dim is None else dim
    for i, mu in enumerate(measures):
        if mu.dim != n:
            raise DimensionError(f"measure {i} has dimension {mu.dim}, expected {n}")
    return n


def _sharp(measures):
    return any(mu.sharp for mu in measures)


def _check_tol(measures):
    # sharp atoms make the bisection identities hold only up to one atom
    worst = max((mu.weights.max() / mu.total) if mu.sharp else 0.0 for mu in measures)
    return max(1e-9, 4.0 * worst)


# -- bounds -----------------------------------------------------------------

def check_bisect_bounds(k: int, m: int, n: int):
    """Reject ``k`` orthogonal bisecting hyperplanes for ``m`` measures on R^n outside the bounds."""
    if k < 1 or m < 1 or n < 1:
        raise KTooLarge("k, m and n must be positive")
    if k > n - m + 1:
        raise KTooLarge(f"ball-separation upper bound: k <= n - m + 1 = {n - m + 1} (k={k}, m={m}, n={n})")
    rho = rh_rho(n)
    if k > rho:
        raise KTooLarge(f"Radon-Hurwitz section bound: k <= rho({n}) = {rho} (k={k})")
    if m >= 2 and k > (n - 1) // (m - 1):
        raise KTooLarge(f"test-map dimension bound: k <= (n-1)/(m-1) = {(n - 1) / (m - 1):g} "
                        f"(k={k}, m={m}, n={n})")


def check_fan_bounds(q: int, k: int, m: int, n: int, mode: Mode):
    """Bounds for k complex regular q-fans (q odd prime) equipartitioning m measures on R^n."""
    if not is_odd_prime(q):
        raise ValueError(f"q = {q} must be an odd prime")
    if mode not in ("complex_orthogonal", "real_independent"):
        raise ValueError(f"unknown mode {mode!r}")
    if k < 1 or m < 1:
        raise KTooLarge("k and m must be positive")
    if n % 2:
        raise DimensionError(f"complex fans need an even dimension, got n={n}")
    t = n // 2
    indep = k if mode == "complex_orthogonal" else -(-k // 2)
    if indep > (n - m + 1) // 2:
        raise KTooLarge(f"ball-separation upper bound: independent q-fans <= floor((n-m+1)/2) = "
                        f"{(n - m + 1) // 2} (k={k}, m={m}, n={n})")
    if mode == "complex_orthogonal":
        if k > 2:
            raise KTooLarge(f"complex section bound: only frames of length <= 2 are known (k={k})")
        if k == 2 and t % 2:
            raise KTooLarge(f"complex section bound: k = 2 needs the quaternionic section, "
                            f"i.e. n divisible by 4 (n={n})")
    elif k > rh_rho(n):
        raise KTooLarge(f"Radon-Hurwitz section bound: k <= rho({n}) = {rh_rho(n)} (k={k})")
    budget = (2 * t) // (q - 1)
    if k * m > budget:
        raise KTooLarge(f"test-map dimension bound: k*m <= n/(q-1) = {n / (q - 1):g} "
                        f"(k={k}, m={m}, n={n}, q={q})")


def check_fourfan_bounds(k: int, n: int, mode: Mode, m: int = 1):
    """Bounds for k complex regular 4-fans equipartitioning one measure on R^n (n = 2 * half)."""
    if mode not in ("complex_orthogonal", "real_independent"):
        raise ValueError(f"unknown mode {mode!r}")
    if m != 1:
        raise KTooLarge(f"regular 4-fan driver handles a single measure (m={m})")
    if k < 1:
        raise KTooLarge("k must be positive")
    if n % 2:
        raise DimensionError(f"complex 4-fans need an even dimension, got n={n}")
    half = n // 2
    indep = k if mode == "complex_orthogonal" else -(-k // 2)
    if indep > n // 2:
        raise KTooLarge(f"ball-separation upper bound: independent 4-fans <= floor(n/2) = {n // 2} (k={k})")
    if k > 2 * half - 1:
        raise KTooLarge(f"test-map dimension bound: k <= n - 1 = {2 * half - 1} (k={k})")
    if mode == "complex_orthogonal":
        if k > 2:
            raise KTooLarge(f"complex section bound: only frames of length <= 2 are known (k={k})")
        if k == 2 and half % 2:
            raise KTooLarge(f"complex section bound: k = 2 needs n divisible by 4 (n={n})")
    elif k > rh_rho(n):
        raise KTooLarge(f"Radon-Hurwitz section bound: k <= rho({n}) = {rh_rho(n)} (k={k})")


def check_2q_dimension(q: int, n: int):
    if not is_odd_prime(q):
        raise ValueError(f"q = {q} must be an odd prime")
    if n % 2:
        raise DimensionError(f"the 2q-sector construction needs an even dimension, got n={n}")
    if n < q + 1:
        raise DimensionTooSmall(f"2q-sector construction needs n >= q + 1 = {q + 1} (n={n})")


# -- hyperplanes ------------------------------------------------------------

def levelled_hyperplane(mu: MassDistribution, direction) -> Hyperplane:
    d = np.asarray(direction, float)
    return Hyperplane(d, level_offset(mu, d))


def bisect_orthogonal(measures: Sequence[MassDistribution], k: int,
                      cfg: SearchConfig = SearchConfig()) -> SolveReport:
    """k pairwise-orthogonal hyperplanes each bisecting every measure.

    Hyperplane i at the sphere point x has normal ``A_{i-1} x`` (Radon-Hurwitz
    frame) and is levelled against the first measure; the search makes the
    remaining measures balanced on every hyperplane.
    """
    n = _check_measures(measures)
    m = len(measures)
    check_bisect_bounds(k, m, n)
    tol = cfg.resolved_tol(_sharp(measures))
    section = FrameSection("radon_hurwitz", k)
    mu1, rest = measures[0], measures[1:]

    def planes(x):
        return [levelled_hyperplane(mu1, s) for s in section.vectors(x)]

    def f(x):
        hs = planes(x)
        return np.array([halfspace_measure(mu, h) / mu.total - 0.5 for mu in rest for h in hs])

    res = _best_effort(odd_zero_search, f, n, cfg, tol=tol, check_tol=_check_tol(measures))
    frame = section.vectors(res.witness)
    extras = {"gram_error": float(np.abs(frame @ frame.T - np.eye(k)).max())}
    return _finish("bisect", measures, planes(res.witness), res.witness, res, tol, extras)


# -- q-fans -----------------------------------------------------------------

def fan_family(u, section: FrameSection, q: int) -> list[ComplexRegularQFan]:
    """The k fans attached to ``u = (u_0, u_1..u_t)`` in S^{2t+1} subset C^{t+1}.

    Fan i has normal ``s_i(w / |w|)`` for ``w = (u_1..u_t)`` and offset
    ``-u_0^{r_i} / |w|``, where ``r_i`` is the equivariance exponent of the
    i-th frame vector, so that sector 0 at ``zeta^j u`` is sector ``j r_i`` at ``u``.
    """
    u = np.asarray(u, float)
    w = u[2:]
    rho = np.linalg.norm(w)
    if rho == 0:
        raise ValueError("fan family is undefined on the degenerate circle")
    u0 = complex(u[0], u[1])
    vecs = section.vectors(w / rho)
    rs = section.exponents(q, w.shape[0])
    return [ComplexRegularQFan(q, to_complex(v), -(u0**r) / rho) for v, r in zip(vecs, rs)]


def _fan_section(mode, k):
    if mode == "complex_orthogonal":
        return FrameSection("identity") if k == 1 else FrameSection("quaternionic", k)
    return FrameSection("radon_hurwitz", k)


def _normalise(measures):
    c = measures[0].centroid()
    r = math.sqrt(float(measures[0].weights @ np.sum((measures[0].points - c) ** 2, axis=1))
                  / measures[0].total)
    scale = 1.0 / r if r > 0 else 1.0
    return [mu.translated(-c).scaled(scale) for mu in measures], c, scale


def equipartition_fans(measures: Sequence[MassDistribution], q: int, mode: Mode = "complex_orthogonal",
                       k: int = 1, cfg: SearchConfig = SearchConfig()) -> SolveReport:
    """k complex regular q-fans in R^{2t}, each equipartitioning every measure.

    The measures are centred and rescaled by the first measure before the
    search; the reported fans are in the original coordinates, while the
    witness refers to the normalised problem.
    """
    n = _check_measures(measures)
    m = len(measures)
    check_fan_bounds(q, k, m, n, mode)
    t = n // 2
    tol = cfg.resolved_tol(_sharp(measures))
    section = _fan_section(mode, k)
    norm_measures, centre, scale = _normalise(measures)

    def f(u):
        fans = fan_family(u, section, q)
        return np.array([sector_measures(mu, fan)[0] / mu.total for mu in norm_measures for fan in fans])

    res = _best_effort(orbit_coincidence_search, f, q, t, cfg, tol=tol)
    fans = [fan.scaled(1.0 / scale).translated(centre) for fan in fan_family(res.witness, section, q)]
    normals = np.array([fan.real_normal for fan in fans])
    extras = {
        "mode": mode,
        "exponents": list(section.exponents(q, n)),
        "normalisation": {"centre": centre, "scale": scale},
        "complex_rank": complex_rank(normals),
    }
    if mode == "complex_orthogonal":
        g = to_complex(normals)
        extras["hermitian_gram_error"] = float(np.abs(g @ g.conj().T - np.eye(k)).max())
    else:
        extras["gram_error"] = float(np.abs(normals @ normals.T - np.eye(k)).max())
        extras["independent_fans"] = extract_complex_independent(normals)
    return _finish("fan", measures, fans, res.witness, res, tol, extras)


# -- regular 4-fans ----------------------------------------------------------

def fourfan_at(mu: MassDistribution, direction) -> ComplexRegularQFan:
    """The complex regular 4-fan cut out by the levelled hyperplanes normal to ``v`` and ``i v``."""
    v = np.asarray(direction, float)
    t0 = level_offset(mu, v)
    t1 = level_offset(mu, mul_i(v))
    return ComplexRegularQFan(4, to_complex(v), complex(t0, -t1))


def equipartition_fourfans(measure: MassDistribution, mode: Mode = "complex_orthogonal", k: int = 1,
                           cfg: SearchConfig = SearchConfig()) -> SolveReport:
    """k complex regular 4-fans each splitting ``measure`` into four equal quarters."""
    if isinstance(measure, (list, tuple)):
        if len(measure) != 1:
            check_fourfan_bounds(k, measure[0].dim, mode, m=len(measure))
        measure = measure[0]
    n = measure.dim
    check_fourfan_bounds(k, n, mode)
    tol = cfg.resolved_tol(measure.sharp)
    section = _fan_section(mode, k)

    def fans(x):
        return [fourfan_at(measure, s) for s in section.vectors(x)]

    def f(x):
        out = []
        for fan in fans(x):
            m = sector_measures(measure, fan)
            out.append((m[1] - m[2]) / measure.total)
        return np.array(out)

    res = _best_effort(i_odd_zero_search, f, n, cfg, tol=tol, check_tol=_check_tol([measure]))
    found = fans(res.witness)
    normals = np.array([fan.real_normal for fan in found])
    extras = {"mode": mode, "complex_rank": complex_rank(normals)}
    if mode == "complex_orthogonal":
        g = to_complex(normals)
        extras["hermitian_gram_error"] = float(np.abs(g @ g.conj().T - np.eye(k)).max())
    else:
        extras["gram_error"] = float(np.abs(normals @ normals.T - np.eye(k)).max())
        extras["independent_fans"] = extract_complex_independent(normals)
    return _finish("fourfan", [measure], found, res.witness, res, tol, extras)


# -- regular 2q-sectors ------------------------------------------------------

def sectors2q_planes(mu: MassDistribution, x, q: int) -> list[Hyperplane]:
    """Levelled hyperplanes ``H_k`` normal to ``zeta_{2q}^k x`` for ``k = 0..q-1``."""
    zeta = np.exp(1j * np.pi / q)
    return [levelled_hyperplane(mu, cscale(x, zeta**k) / np.linalg.norm(cscale(x, zeta**k)))
            for k in range(q)]


def sectors2q_masses(mu: MassDistribution, planes: Sequence[Hyperplane]):
    """Masses of the 2q sectors ``S_k = H_k^- cap H_{k+1}^+`` and the overlap mass.

    ``H_{k+q}`` is ``H_k`` with its sides swapped. The overlap mass is
    ``integral (c - 1) / 2``, where c counts the sectors covering a point.
    The common sector value at an equipartition is then
    ``total / (2q) + overlap / q``.
    """
    q = len(planes)
    s = np.array([mu.points @ h.normal - h.offset for h in planes])
    s = np.vstack([s, -s])  # rows 0..2q-1
    plus = halfspace_weights(s, mu.bandwidth)
    minus = halfspace_weights(-s, mu.bandwidth)
    member = minus * np.roll(plus, -1, axis=0)
    masses = member @ mu.weights
    cover = member.sum(axis=0)
    overlap = float(mu.weights @ ((cover - 1.0) / 2.0))
    return masses, overlap


def near_equipartition_2q(measure: MassDistribution, q: int, cfg: SearchConfig = SearchConfig()) -> SolveReport:
    """q hyperplanes with consecutive angles pi/q whose 2q sectors carry equal mass."""
    if isinstance(measure, (list, tuple)):
        measure = measure[0]
    n = measure.dim
    check_2q_dimension(q, n)
    tol = cfg.resolved_tol(measure.sharp)
    mu = measure

    def first_sector(x):
        x = x / np.linalg.norm(x)
        h0 = levelled_hyperplane(mu, x)
        h1 = levelled_hyperplane(mu, _unit(cscale(x, np.exp(1j * np.pi / q))))
        s0 = mu.points @ h0.normal - h0.offset
        s1 = mu.points @ h1.normal - h1.offset
        w = halfspace_weights(-s0, mu.bandwidth) * halfspace_weights(s1, mu.bandwidth)
        return np.array([mu.weights @ w / mu.total])

    first = np.eye(n)[0]
    res = _best_effort(orbit_coincidence_search, first_sector, q, n // 2 - 1, cfg,
                       tol=tol, guard=False, first=first)
    planes = sectors2q_planes(mu, res.witness, q)
    masses, overlap = sectors2q_masses(mu, planes)
    extras = {
        "overlap_mass": overlap,
        "identity_value": mu.total / (2 * q) + overlap / q,
        "identity_error": float(np.max(np.abs(masses - (mu.total / (2 * q) + overlap / q)))) / mu.total,
        "antipodal_error": float(np.max(np.abs(masses[:q] - masses[q:]))) / mu.total,
    }
    return _finish("sectors2q", [mu], planes, res.witness, res, tol, extras)


def _unit(x):
    return x / np.linalg.norm(x)
