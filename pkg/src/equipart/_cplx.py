"""Interleaved real <-> complex coordinates: (Re z1, Im z1, ..., Re zt, Im zt)."""

import numpy as np


def to_complex(x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 2:
        raise ValueError("odd real dimension has no complex structure")
    return x[..., 0::2] + 1j * x[..., 1::2]


def to_real(z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def mul_i(x):
    """Multiply by i, i.e. apply the block-diagonal complex structure J."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    out[..., 0::2] = -x[..., 1::2]
    out[..., 1::2] = x[..., 0::2]
    return out


def cscale(x, lam):
    """Complex scalar multiplication ``lam * x`` on an interleaved real vector."""
    return to_real(lam * to_complex(x))


def complex_structure(n):
    """Matrix of ``mul_i`` on R^n (n even)."""
    return mul_i(np.eye(n)).T


def root_of_unity(q, j=1):
    """``exp(2 pi i j / q)`` with components snapped to exact 0, +-1 where they should be."""
    z = np.exp(2j * np.pi * j / q)
    re, im = z.real, z.imag
    re = 0.0 if abs(re) < 1e-15 else re
    im = 0.0 if abs(im) < 1e-15 else im
    if abs(abs(re) - 1.0) < 1e-15:
        re = float(np.sign(re))
    if abs(abs(im) - 1.0) < 1e-15:
        im = float(np.sign(im))
    return complex(re, im)
