"""Equivariant orthonormal frame fields on spheres.

Three sources of frames are provided:

* Radon-Hurwitz families of anticommuting orthogonal complex structures on
  R^n, giving ``rho(n) - 1`` linear vector fields ``x -> A_i x``;
* the quaternionic section ``x -> (x, j x)`` of the complex Stiefel bundle
  over S^{4n-1};
* the trivial section ``x -> (x,)``.

On even-dimensional spaces the Radon-Hurwitz family is normalised so that its
first matrix is the interleaved complex structure J (multiplication by i).
The remaining matrices then anticommute with J, i.e. they are conjugate-linear,
which is what the fan constructions need for cyclic equivariance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from ._cplx import complex_structure, mul_i, to_complex
from .errors import DimensionError, FrameTooLong, NotIndependentError


def rh_rho(n: int) -> int:
    """Hurwitz-Radon number: for ``n = 2**(a + 4b) * odd`` with ``0 <= a <= 3``, ``2**a + 8b``.

    >>> [rh_rho(n) for n in (1, 2, 4, 8, 16, 32, 64)]
    [1, 2, 4, 8, 9, 10, 12]
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    c = (n & -n).bit_length() - 1
    a, b = c % 4, c // 4
    return 2**a + 8 * b


@dataclass(frozen=True, eq=False)
class AnticommutingFamily:
    """Orthogonal n x n matrices with ``A_i^2 = -I`` and ``A_i A_j = -A_j A_i``."""

    dim: int
    matrices: tuple

    def __len__(self):
        return len(self.matrices)

    def invariant_errors(self):
        """Worst deviations (orthogonality, square, anticommutation)."""
        eye = np.eye(self.dim)
        orth = sq = anti = 0.0
        for i, a in enumerate(self.matrices):
            orth = max(orth, np.abs(a.T @ a - eye).max())
            sq = max(sq, np.abs(a @ a + eye).max())
            for b in self.matrices[i + 1:]:
                anti = max(anti, np.abs(a @ b + b @ a).max())
        return orth, sq, anti


# -- base cases ---------------------------------------------------------------

def _quat_mul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ])


def _quat_conj(p):
    return p * np.array([1.0, -1.0, -1.0, -1.0])


def _oct_mul(x, y):
    # Cayley-Dickson doubling: (a, b)(c, d) = (ac - d* b, d a + b c*)
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    return np.concatenate([
        _quat_mul(a, c) - _quat_mul(_quat_conj(d), b),
        _quat_mul(d, a) + _quat_mul(b, _quat_conj(c)),
    ])


def _left_mult_matrices(mul, n):
    basis = np.eye(n)
    return [np.column_stack([mul(basis[u], basis[v]) for v in range(n)]) for u in range(1, n)]


def _base_family(size):
    if size == 1:
        return []
    if size == 2:
        return [complex_structure(2)]
    if size == 4:
        return _left_mult_matrices(_quat_mul, 4)
    if size == 8:
        return _left_mult_matrices(_oct_mul, 8)
    raise ValueError(size)


def _period_generators():
    """Eight anticommuting complex structures on R^16 and their symmetric product."""
    sz = np.diag([1.0, -1.0])
    eps = complex_structure(2)
    gens = [np.kron(b, sz) for b in _base_family(8)] + [np.kron(np.eye(8), eps)]
    omega = np.eye(16)
    for g in gens:
        omega = omega @ g
    return gens, omega


def _align_first_with_j(mats):
    """Orthogonally conjugate the family so its first matrix is the interleaved J."""
    n = mats[0].shape[0]
    a1 = mats[0]
    cols = []
    for e in np.eye(n):
        v = e.copy()
        for c in cols:
            v -= (c @ v) * c
        nv = np.linalg.norm(v)
        if nv < 0.5:
            continue
        v /= nv
        w = a1 @ v
        cols.extend([v, w])
        if len(cols) == n:
            break
    q = np.column_stack(cols)
    out = [q.T @ m @ q for m in mats]
    return [np.where(np.abs(m) < 1e-15, 0.0, m) for m in out]


@lru_cache(maxsize=None)
def _rh_matrices_cached(n):
    c = (n & -n).bit_length() - 1
    odd = n >> c
    a, b = c % 4, c // 4
    mats = _base_family(2**a)
    size = 2**a
    if b:
        gens, omega = _period_generators()
        for _ in range(b):
            mats = [np.kron(m, omega) for m in mats] + [np.kron(np.eye(size), g) for g in gens]
            size *= 16
    if odd > 1:
        mats = [np.kron(np.eye(odd), m) for m in mats]
    if mats:
        mats = _align_first_with_j(mats)
    for m in mats:
        m.setflags(write=False)
    return AnticommutingFamily(n, tuple(mats))


def rh_matrices(n: int) -> AnticommutingFamily:
    """``rh_rho(n) - 1`` anticommuting orthogonal complex structures on R^n."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be positive")
    return _rh_matrices_cached(n)


def frame_at(x, fam: AnticommutingFamily, k: int) -> np.ndarray:
    """The frame ``(x, A_1 x, ..., A_{k-1} x)`` as rows of a (k, n) array."""
    x = np.asarray(x, dtype=float)
    if x.shape != (fam.dim,):
        raise DimensionError(f"expected a point of R^{fam.dim}, got shape {x.shape}")
    if k < 1 or k > len(fam) + 1:
        raise FrameTooLong(f"frame of length {k} requested but rho({fam.dim}) = {len(fam) + 1}")
    return np.vstack([x] + [a @ x for a in fam.matrices[: k - 1]])


def quaternion_j(x):
    """Left multiplication by the quaternion j on H^n, basis order (1, i, j, k) per block."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 4:
        raise DimensionError(f"real dimension {x.shape[-1]} is not divisible by 4")
    out = np.empty_like(x)
    a, b, c, d = (x[..., r::4] for r in range(4))
    out[..., 0::4] = -c
    out[..., 1::4] = d
    out[..., 2::4] = a
    out[..., 3::4] = -b
    return out


def quaternion_frame(x) -> np.ndarray:
    """The Hermitian-orthonormal pair ``(x, j x)`` as rows of a (2, 4n) array.

    Under complex scalars, ``j (lam x) = conj(lam) j x``.
    """
    x = np.asarray(x, dtype=float)
    return np.vstack([x, quaternion_j(x)])


def extract_complex_independent(vectors, rtol: float = 1e-8) -> list[int]:
    """Indices of ``ceil(k/2)`` of the given real-independent vectors that are independent over C.

    Greedy: a vector is kept when it raises the complex rank of the kept set.
    """
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    k, n = v.shape
    if n % 2:
        raise DimensionError("vectors must live in an even-dimensional space")
    if _rank(v, rtol) < k:
        raise NotIndependentError(f"the {k} vectors are not linearly independent over R")
    need = -(-k // 2)
    kept: list[int] = []
    span = np.empty((0, n))
    for i in range(k):
        trial = np.vstack([span, v[i], mul_i(v[i])])
        if _rank(trial, rtol) == trial.shape[0]:
            kept.append(i)
            span = trial
            if len(kept) == need:
                break
    return kept


def _rank(m, rtol):
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > rtol * max(1.0, s[0]))) if s.size else 0


def complex_rank(vectors, rtol: float = 1e-8) -> int:
    """Rank over C of interleaved real vectors."""
    z = to_complex(np.atleast_2d(np.asarray(vectors, dtype=float)))
    s = np.linalg.svd(z, compute_uv=False)
    return int(np.sum(s > rtol * max(1.0, s[0])))


SectionKind = Literal["identity", "radon_hurwitz", "quaternionic"]


@dataclass(frozen=True)
class FrameSection:
    """A rule producing an equivariant orthonormal k-frame at every unit vector.

    ``exponents(q)`` gives, per frame vector, the power ``r`` with
    ``s_i(zeta x) = zeta^r s_i(x)`` for ``zeta = exp(2 pi i / q)``; the
    first vector is always ``x`` itself (``r = 1``).
    """

    kind: SectionKind
    k: int = 1

    def __post_init__(self):
        if self.kind not in ("identity", "radon_hurwitz", "quaternionic"):
            raise ValueError(f"unknown section kind {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.kind == "identity" and self.k != 1:
            raise FrameTooLong("the identity section has a single vector")
        if self.kind == "quaternionic" and self.k > 2:
            raise FrameTooLong("the quaternionic section has at most two vectors")

    def vectors(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "identity":
            return x[None, :]
        if self.kind == "quaternionic":
            return quaternion_frame(x)[: self.k]
        return frame_at(x, rh_matrices(x.shape[0]), self.k)

    def hermitian(self) -> bool:
        """Whether the produced frames are orthonormal over C (not just over R)."""
        return self.kind != "radon_hurwitz" or self.k == 1

    def exponents(self, q: int, dim: int | None = None) -> tuple[int, ...]:
        if self.kind == "identity":
            return (1,)
        if self.kind == "quaternionic":
            return (1, q - 1)[: self.k]
        if dim is None:
            raise ValueError("dimension required for Radon-Hurwitz exponents")
        if dim % 2:
            raise DimensionError("cyclic equivariance needs an even dimension")
        j = complex_structure(dim)
        out = [1]
        for a in rh_matrices(dim).matrices[: self.k - 1]:
            if np.allclose(a @ j, j @ a, atol=1e-12):
                out.append(1)
            elif np.allclose(a @ j, -j @ a, atol=1e-12):
                out.append(q - 1)
            else:  # pragma: no cover - excluded by the alignment step
                raise AssertionError("Radon-Hurwitz matrix is neither linear nor conjugate-linear")
        return tuple(out)
