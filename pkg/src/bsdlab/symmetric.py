"""Signatures, Schur polynomials, generalized Pochhammer symbols and FK kernels."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

import numpy as np

__all__ = [
    "Signature",
    "signatures",
    "hook_lengths",
    "num_syt",
    "gen_pochhammer",
    "young_cell_pochhammer",
    "schur",
    "schur_bialternant",
    "schur_jacobi_trudi",
    "fock_kernel",
    "fk_partial_sum",
    "DivergenceWarning",
]


class DivergenceWarning(RuntimeWarning):
    pass


class Signature(tuple):
    """Non-increasing tuple of non-negative integers (m_1 >= ... >= m_r >= 0)."""

    def __new__(cls, parts):
        parts = tuple(int(x) for x in parts)
        if any(x < 0 for x in parts):
            raise ValueError(f"negative part in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"{parts} is not non-increasing")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def shift(self, delta: int) -> "Signature":
        return Signature(x + delta for x in self)

    def cells(self):
        """Young diagram cells (row, column), 1-based."""
        for i, mi in enumerate(self, start=1):
            for j in range(1, mi + 1):
                yield i, j


def signatures(r: int, max_size: int | None = None, max_part: int | None = None):
    """All signatures of length r with |m| <= max_size and m_1 <= max_part."""
    if max_size is None and max_part is None:
        raise ValueError("need a bound")
    top = max_part if max_part is not None else max_size

    def rec(prefix, remaining, cap):
        if len(prefix) == r:
            yield Signature(prefix)
            return
        for x in range(min(cap, remaining), -1, -1):
            yield from rec(prefix + (x,), remaining - x, x)

    budget = max_size if max_size is not None else top * r
    out = sorted(rec((), budget, top), key=lambda m: (m.size, tuple(-x for x in m)))
    return out


def hook_lengths(m) -> list[int]:
    m = Signature(m)
    conj = [sum(1 for x in m if x >= j) for j in range(1, (m[0] if m else 0) + 1)]
    return [(m[i - 1] - j) + (conj[j - 1] - i) + 1 for i, j in m.cells()]


def num_syt(m) -> int:
    """Number of standard Young tableaux of shape m (hook-length formula)."""
    m = Signature(m)
    return factorial(m.size) // prod(hook_lengths(m))


def gen_pochhammer(x, m, a: int = 2):
    """(x)_m = prod_j prod_{i < m_j} (x - (a/2)(j-1) + i)."""
    out = 1
    for j, mj in enumerate(m):
        base = x - Fraction(a, 2) * j if isinstance(x, (int, Fraction)) else x - (a / 2) * j
        for i in range(mj):
            out *= base + i
    return out


def young_cell_pochhammer(x, m):
    """prod over Young cells (i, j) of (x + j - i); equals gen_pochhammer for a = 2."""
    out = 1
    for i, j in Signature(m).cells():
        out *= x + j - i
    return out


def schur_bialternant(m, eigs) -> complex:
    eigs = np.asarray(eigs, dtype=complex)
    r = len(eigs)
    lam = np.array(tuple(m) + (0,) * (r - len(m)))
    num = np.linalg.det(eigs[None, :] ** (lam + r - 1 - np.arange(r))[:, None])
    den = np.prod([eigs[i] - eigs[j] for i in range(r) for j in range(i + 1, r)]) if r > 1 else 1.0
    return num / den


def _complete_homogeneous(k_max, eigs):
    """h_0..h_{k_max} via the generating function prod 1/(1 - x_i t)."""
    h = np.zeros(k_max + 1, dtype=complex)
    h[0] = 1
    for x in eigs:
        for k in range(1, k_max + 1):
            h[k] += x * h[k - 1]
    return h


def schur_jacobi_trudi(m, eigs) -> complex:
    m = tuple(x for x in m if x > 0)
    if not m:
        return 1.0 + 0j
    ell = len(m)
    hk = _complete_homogeneous(m[0] + ell, eigs)

    def hh(k):
        return hk[k] if k >= 0 else 0.0

    mat = np.array([[hh(m[i] - i + j) for j in range(ell)] for i in range(ell)], dtype=complex)
    return complex(np.linalg.det(mat))


def schur(m, eigs, sep: float = 1e-3) -> complex:
    """Schur polynomial s_m(eigs); Jacobi-Trudi when eigenvalues nearly coincide."""
    eigs = np.asarray(eigs, dtype=complex)
    if len(m) > len(eigs) and any(m[len(eigs):]):
        return 0j
    r = len(eigs)
    gaps = [abs(eigs[i] - eigs[j]) for i in range(r) for j in range(i + 1, r)]
    if gaps and min(gaps) < sep:
        return schur_jacobi_trudi(m, eigs)
    return complex(schur_bialternant(m, eigs))


@lru_cache(maxsize=None)
def _fk_weight(m: Signature) -> float:
    return num_syt(m) / factorial(m.size)


def fock_kernel(m, z, w) -> complex:
    """K^m(z, w) = s_m(eig(z w*)) f^m / |m|!."""
    m = Signature(m)
    x = np.asarray(z) @ np.conj(np.asarray(w)).T
    eigs = np.linalg.eigvals(x)
    return schur(m, eigs) * _fk_weight(m)


def fk_partial_sum(nu, z, w, M: int) -> complex:
    """sum_{|m| <= M} (nu)_m K^m(z, w), converging to h(z, w)^{-nu}."""
    import warnings

    x = np.asarray(z) @ np.conj(np.asarray(w)).T
    eigs = np.linalg.eigvals(x)
    if np.max(np.abs(eigs)) >= 1:
        warnings.warn("spectral radius of z w* >= 1; the expansion diverges", DivergenceWarning)
    total = 0j
    for m in signatures(len(eigs), max_size=M):
        c = gen_pochhammer(nu, m)
        if c == 0:
            continue
        total += c * schur(m, eigs) * _fk_weight(m)
    return total

