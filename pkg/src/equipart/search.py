"""Numerical zero and coincidence search for equivariant maps on spheres.

All three searches share one local engine. Points on the sphere are
parametrised by ambient vectors ``y`` and evaluated at ``y / |y|``. From
each start a finite-difference least-squares solve is tried first. If that
stalls, the search falls back to Nelder-Mead on the summed squares, followed
by another least-squares polish. Starts are the canonical point ``e_1``
followed by scrambled Halton points pushed onto the sphere. The topological
theorems behind each search guarantee that a solution exists, so exhausting
the restarts means the budget was too small.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import OptimizeWarning, least_squares, minimize
from scipy.stats import norm, qmc

from ._cplx import cscale, mul_i
from .errors import (
    BudgetExceeded,
    DegenerateRegion,
    NoConvergence,
    NotEquivariantError,
    NotOddError,
)


@dataclass(frozen=True)
class SearchConfig:
    """Search budget and tolerances.

    ``tol`` is a fraction of total mass; ``None`` lets each driver pick
    1e-3 for sharp measures and 1e-6 for smoothed ones.
    """

    restarts: int = 24
    max_iters: int = 3000
    tol: float | None = None
    seed: int = 0
    degenerate_guard: float = 0.05
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 < self.degenerate_guard < 1:
            raise ValueError("degenerate_guard must lie in (0, 1)")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def resolved_tol(self, sharp: bool) -> float:
        if self.tol is not None:
            return self.tol
        return 1e-3 if sharp else 1e-6


@dataclass
class SearchResult:
    witness: np.ndarray
    residual: float
    converged: bool
    iterations: int
    restarts_used: int
    diagnostics: dict = field(default_factory=dict)


def sphere_starts(dim: int, count: int, seed: int = 0, first=None) -> np.ndarray:
    """``count`` well-spread unit vectors in R^dim, starting with ``first`` (default ``e_1``)."""
    out = np.empty((count, dim))
    out[0] = np.eye(dim)[0] if first is None else first
    if count > 1:
        pts = qmc.Halton(d=dim, scramble=True, seed=seed).random(count - 1)
        g = norm.ppf(np.clip(pts, 1e-12, 1 - 1e-12))
        out[1:] = g / np.linalg.norm(g, axis=1, keepdims=True)
    return out


def _unit(y):
    return y / np.linalg.norm(y)


def _local_solve(residual: Callable, score: Callable, y0, tol, max_iters):
    """Drive ``score(y) <= tol`` from ``y0``; returns (best y, best score, evaluations)."""
    nfev = 0
    best_y, best_s = y0, score(y0)
    nfev += 1
    if best_s <= tol:
        return best_y, best_s, nfev

    def lsq_fun(y):
        r = residual(_unit(y))
        return np.append(r, np.linalg.norm(y) - 1.0)

    def polish(y):
        nonlocal nfev
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            sol = least_squares(lsq_fun, y, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                max_nfev=max(50, max_iters // 4), x_scale=1.0)
        nfev += sol.nfev
        return _unit(sol.x)

    def consider(y):
        nonlocal best_y, best_s, nfev
        s = score(y)
        nfev += 1
        if s < best_s:
            best_y, best_s = y, s

    consider(polish(best_y))
    if best_s <= tol:
        return best_y, best_s, nfev

    dim = y0.shape[0]
    simplex = np.vstack([best_y] + [best_y + 0.15 * e for e in np.eye(dim)])
    res = minimize(lambda y: float(np.sum(residual(_unit(y)) ** 2)), best_y, method="Nelder-Mead",
                   options={"initial_simplex": simplex, "maxfev": max_iters, "xatol": 1e-12,
                            "fatol": (0.01 * tol) ** 2, "adaptive": dim > 4})
    nfev += res.nfev
    consider(_unit(res.x))
    if best_s > tol:
        consider(polish(best_y))
    return best_y, best_s, nfev


def _multistart(residual, score, starts, cfg: SearchConfig, tol, accept=None):
    """Run local solves from ``starts`` until one converges.

    Restarts are processed in batches of ``cfg.workers``; within the batch that
    first converges, the lowest score wins (ties go to the earlier restart), so
    the outcome depends only on the seed and the worker count.
    """
    accept = accept or (lambda y: True)
    total_evals = 0
    best = None  # (score, index, y)
    used = 0

    def run(i):
        return _local_solve(residual, score, starts[i], tol, cfg.max_iters)

    batch = cfg.workers
    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for lo in range(0, len(starts), batch):
            idx = list(range(lo, min(lo + batch, len(starts))))
            outs = list(pool.map(run, idx)) if pool else [run(i) for i in idx]
            used = idx[-1] + 1
            found = []
            for i, (y, s, nf) in zip(idx, outs):
                total_evals += nf
                ok = accept(y)
                key = (s if ok else np.inf, i)
                if best is None or key < best[0]:
                    best = (key, y, s, ok)
                if ok and s <= tol:
                    found.append((s, i, y))
            if found:
                s, i, y = min(found, key=lambda t: (t[0], t[1]))
                return SearchResult(y, s, True, total_evals, used)
    finally:
        if pool:
            pool.shutdown()
    _, y, s, ok = best
    return SearchResult(y, s, False, total_evals, used, {"accepted_region": ok})


def _output_dim(f, x):
    return int(np.atleast_1d(np.asarray(f(x), dtype=float)).shape[0])


def _spot_check(f, transform, sign, dim, seed, tol, err):
    rng = np.random.default_rng(seed + 7919)
    for _ in range(10):
        x = _unit(rng.standard_normal(dim))
        fx = np.atleast_1d(np.asarray(f(x), float))
        fy = np.atleast_1d(np.asarray(f(transform(x)), float))
        if np.max(np.abs(fy - sign * fx), initial=0.0) > tol * (1.0 + np.max(np.abs(fx), initial=0.0)):
            raise err(f"equivariance spot check failed at x={x.tolist()}: "
                      f"|f(gx) - {sign:+d} f(x)| = {np.max(np.abs(fy - sign * fx)):.3e}")


def odd_zero_search(f: Callable, dim: int, cfg: SearchConfig = SearchConfig(), *, tol=None,
                    check_tol: float = 1e-9) -> SearchResult:
    """Find ``x`` on S^{dim-1} with ``max |f(x)| <= tol`` for an odd map ``f`` into R^c, ``c <= dim-1``."""
    tol = cfg.resolved_tol(False) if tol is None else tol
    starts = sphere_starts(dim, cfg.restarts, cfg.seed)
    c = _output_dim(f, starts[0])
    if c > dim - 1:
        raise BudgetExceeded(f"odd map into R^{c} from S^{dim - 1}: need c <= {dim - 1}")
    _spot_check(f, lambda x: -x, -1, dim, cfg.seed, check_tol, NotOddError)
    return _zero_search(f, starts, cfg, tol)


def i_odd_zero_search(f: Callable, dim: int, cfg: SearchConfig = SearchConfig(), *, tol=None,
                      check_tol: float = 1e-9) -> SearchResult:
    """Zero of ``f`` on S^{dim-1} subset C^{dim/2} where ``f(i x) = -f(x)`` and ``c <= dim-1``."""
    if dim % 2:
        raise ValueError("i-equivariance needs an even ambient dimension")
    tol = cfg.resolved_tol(False) if tol is None else tol
    starts = sphere_starts(dim, cfg.restarts, cfg.seed)
    c = _output_dim(f, starts[0])
    if c > dim - 1:
        raise BudgetExceeded(f"map into R^{c} from S^{dim - 1}: need c <= {dim - 1}")
    _spot_check(f, mul_i, -1, dim, cfg.seed, check_tol, NotEquivariantError)
    return _zero_search(f, starts, cfg, tol)


def _zero_search(f, starts, cfg, tol):
    def residual(x):
        return np.atleast_1d(np.asarray(f(x), dtype=float))

    def score(x):
        return float(np.max(np.abs(residual(x)), initial=0.0))

    res = _multistart(residual, score, starts, cfg, tol)
    if not res.converged:
        raise NoConvergence(f"no zero within tol={tol:g} after {res.restarts_used} restarts "
                            f"(best max|f| = {res.residual:.3e})", result=res)
    return res


def is_odd_prime(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    return all(q % p for p in range(3, int(q**0.5) + 1, 2))


def orbit_values(f, u, q):
    """Rows ``f(zeta^j u)`` for ``j = 0..q-1``, ``zeta = exp(2 pi i / q)`` acting on C^{t+1}."""
    zeta = np.exp(2j * np.pi / q)
    return np.vstack([np.atleast_1d(np.asarray(f(cscale(u, zeta**j)), float)) for j in range(q)])


def weighted_orbit_sums(values, q):
    """Moduli of ``sum_k zeta^{-k r} f(zeta^k u)`` for ``r = 1..(q-1)/2``, per component."""
    k = np.arange(q)
    return np.array([np.abs(np.exp(-2j * np.pi * k * r / q) @ values) for r in range(1, (q - 1) // 2 + 1)])


def orbit_coincidence_search(f: Callable, q: int, t: int, cfg: SearchConfig = SearchConfig(), *,
                             tol=None, guard: bool = True, first=None) -> SearchResult:
    """Find ``u`` on S^{2t+1} subset C^{t+1} with ``f(u) = f(zeta u) = ... = f(zeta^{q-1} u)``.

    ``f`` maps into R^c with ``c <= floor(2t / (q - 1))``. With ``guard``, the
    witness keeps ``|(u_1, ..., u_t)| >= cfg.degenerate_guard`` so that it stays
    away from the degenerate circle where fans escape to infinity.
    The merit is the summed variance of each component over the orbit.
    """
    if not is_odd_prime(q):
        raise ValueError(f"q = {q} is not an odd prime")
    tol = cfg.resolved_tol(False) if tol is None else tol
    dim = 2 * t + 2
    delta = cfg.degenerate_guard
    if first is None:
        first = np.zeros(dim)
        first[2 if t > 0 else 0] = 1.0
    starts = _guarded_starts(dim, cfg, first, delta if guard else 0.0)
    c = _output_dim(f, starts[0])
    budget = (2 * t) // (q - 1)
    if c > budget:
        raise BudgetExceeded(f"test map has {c} components but S^{2 * t + 1} with q={q} "
                             f"supports at most floor(2t/(q-1)) = {budget}")

    def tail_norm(u):
        return float(np.linalg.norm(u[2:]))

    def residual(u):
        vals = orbit_values(f, u, q)
        r = (vals - vals.mean(axis=0)).ravel()
        if guard:
            r = np.append(r, 10.0 * max(0.0, delta - tail_norm(u)))
        return r

    def score(u):
        vals = orbit_values(f, u, q)
        dev = float(np.max(np.abs(vals - vals[0]), initial=0.0))
        if guard and tail_norm(u) < delta:
            dev += 1.0 + (delta - tail_norm(u))
        return dev

    accept = (lambda u: tail_norm(u) >= delta) if guard else None
    res = _multistart(residual, score, starts, cfg, tol, accept=accept)
    vals = orbit_values(f, res.witness, q)
    res.diagnostics["orbit_deviation"] = float(np.max(np.abs(vals - vals[0]), initial=0.0))
    res.diagnostics["weighted_sums"] = weighted_orbit_sums(vals, q).tolist()
    if not res.converged:
        if guard and not res.diagnostics.get("accepted_region", True):
            raise DegenerateRegion("every restart was attracted to the degenerate circle "
                                   f"(|(u_1..u_t)| < {delta})", result=res)
        raise NoConvergence(f"no orbit coincidence within tol={tol:g} after {res.restarts_used} "
                            f"restarts (best deviation {res.diagnostics['orbit_deviation']:.3e})",
                            result=res)
    return res


def _guarded_starts(dim, cfg, first, delta):
    extra = sphere_starts(dim, 4 * cfg.restarts + 1, cfg.seed)[1:]
    keep = [first] + [u for u in extra if np.linalg.norm(u[2:]) >= 2 * delta]
    return np.array(keep[: cfg.restarts])
