"""Factored Clifford operators G_D(P^T) G_U(S) G_Omega(r) and their fast action.

The three factors act as an index permutation, a diagonal of fourth roots of
unity, and a partial Hadamard on the leading tensor slots, so a full
application costs O(N log N) and the 2^m x 2^m matrix never exists outside
small test oracles.  Codebook columns are extracted in the exact amplitude
domain: starting from a basis vector, each butterfly stage touches exactly
one live entry per pair, so the exponents stay integers mod 4 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import _kernels, gf2
from .codebook import ChirpVector
from .errors import LengthMismatchError, NotInvertibleError, NotSymmetricError
from .gf2 import Gf2Matrix
from .symplectic import (CosetRep, SymplecticElement, embed_sym, make_fd,
                         make_fomega, make_fu)

_POW_I = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def _check_length(v: np.ndarray, m: int):
    if v.shape != (1 << m,):
        raise LengthMismatchError(f"expected length {1 << m}, got {v.shape}")


def apply_gd(p: Gf2Matrix, v: np.ndarray) -> np.ndarray:
    """Index permutation e_v -> e_(P^T v)."""
    m = p.nrows
    _check_length(v, m)
    if gf2.rank(p) != m:
        raise NotInvertibleError("P must be invertible")
    idx = gf2.matvec_many(p.transpose(), np.arange(1 << m))
    out = np.empty_like(v, dtype=np.complex128)
    out[idx] = v
    return out


def apply_gu(s: Gf2Matrix, v: np.ndarray) -> np.ndarray:
    """Diagonal phase multiply by i^(v^T S v mod 4)."""
    _check_length(v, s.nrows)
    if not s.is_symmetric():
        raise NotSymmetricError("S must be symmetric")
    exps = gf2.quad_form_values(s, np.arange(1 << s.nrows))
    return v * _POW_I[exps]


def apply_gomega(r: int, v: np.ndarray) -> np.ndarray:
    """Partial Hadamard H2^(x)r (x) I on the first r tensor slots, normalized."""
    out = np.array(v, dtype=np.complex128, copy=True)
    _kernels.fwht(out, stages=r)
    if r:
        out *= 1.0 / sqrt(1 << r)
    return out


@dataclass(frozen=True)
class CliffordFactored:
    """G = G_D(perm^T) G_U(sym) G_Omega(r), stored by its three labels."""

    m: int
    perm: Gf2Matrix
    sym: Gf2Matrix
    r: int

    def __post_init__(self):
        if gf2.rank(self.perm) != self.m:
            raise NotInvertibleError("perm must be invertible")
        if not self.sym.is_symmetric() or self.sym.nrows != self.m:
            raise NotSymmetricError("sym must be m x m symmetric")
        if not 0 <= self.r <= self.m:
            raise ValueError("need 0 <= r <= m")

    @classmethod
    def from_coset(cls, rep: CosetRep) -> "CliffordFactored":
        p, _, _ = gf2.complete_to_invertible(rep.h)
        return cls(rep.m, p, embed_sym(rep.sr, rep.m), rep.r)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """G v in O(N log N)."""
        out = apply_gomega(self.r, v)
        out = apply_gu(self.sym, out)
        return apply_gd(self.perm.transpose(), out)


def phi(g: CliffordFactored) -> SymplecticElement:
    """Image under the Clifford-to-symplectic homomorphism (labels act on the right,
    so the factor order reverses): F_Omega(r) F_U(S) F_D(P^T)."""
    return (make_fomega(g.m, g.r) @ make_fu(g.sym)
            @ make_fd(g.perm.transpose()))


def clifford_column(rep: CosetRep, b: int) -> ChirpVector:
    """Column b of G_D(P^T) G_U(S~_r) G_Omega(r) Z(m,r), exactly.

    Z(m,r) acts as sigma_z on the last m-r tensor slots and contributes the
    sign (-1)^(weight of the trailing bits of b); the butterflies then spread
    the single live entry without ever adding two nonzeros.
    """
    m, r = rep.m, rep.r
    n = 1 << m
    if not 0 <= b < n:
        raise ValueError("b out of range")
    k = np.full(n, -1, dtype=np.int8)
    k[b] = 2 * ((b & ((1 << (m - r)) - 1)).bit_count() & 1)
    for j in range(1, r + 1):
        s = n >> j
        v = k.reshape(-1, 2, s)
        x, y = v[:, 0, :], v[:, 1, :]
        assert not np.any((x >= 0) & (y >= 0))  # delta spread never collides
        lo = np.where(x >= 0, x, y)
        hi = np.where(x >= 0, x, np.where(y >= 0, (y + 2) & 3, y))
        v[:, 0, :], v[:, 1, :] = lo, hi
    stilde = embed_sym(rep.sr, m)
    on = k >= 0
    exps = gf2.quad_form_values(stilde, np.nonzero(on)[0].astype(np.int64))
    k[on] = (k[on] + exps) & 3
    p, _, _ = gf2.complete_to_invertible(rep.h)
    idx = gf2.matvec_many(p, np.arange(n))
    out = np.full(n, -1, dtype=np.int8)
    out[idx] = k
    return ChirpVector(m, r, out)
