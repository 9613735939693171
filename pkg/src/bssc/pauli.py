"""Heisenberg-Weyl (Pauli) operators with exact phase bookkeeping.

An element is i^k E(a,b) with E(a,b) = i^(a.b) D(a,b), where D(a,b) is the
tensor product of sigma_x^(a_i) sigma_z^(b_i) over the qubits and a.b is the
*integer* overlap count.  This normalization makes every E Hermitian and an
involution, and all group arithmetic stays in the integers mod 4 -- no
floating phases anywhere.

Sign-resolved products matter: for an isotropic row space the bare set
{E(x^T A, x^T B)} is generally only a group up to signs, so stabilizer
projectors are assembled from true products of the (sign-flipped) generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import gf2
from .errors import (DependentRowsError, LengthMismatchError,
                     NotIsotropicError)
from .gf2 import Gf2Matrix, Gf2Vector, parity

_POW_I = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def _dot(x: int, y: int) -> int:
    """Integer inner product of packed binary vectors (overlap count)."""
    return (x & y).bit_count()


@dataclass(frozen=True)
class PauliElement:
    """i^phase_k * E(a, b) on m qubits; a, b packed MSB-first."""

    m: int
    a: int
    b: int
    phase_k: int = 0

    def __post_init__(self):
        lim = 1 << self.m
        if not (0 <= self.a < lim and 0 <= self.b < lim):
            raise ValueError("a, b out of range")
        object.__setattr__(self, "phase_k", self.phase_k & 3)

    @classmethod
    def from_vectors(cls, a: Gf2Vector, b: Gf2Vector, phase_k: int = 0) -> "PauliElement":
        if a.n != b.n:
            raise ValueError("a and b must have equal length")
        return cls(a.n, a.bits, b.bits, phase_k)

    @classmethod
    def identity(cls, m: int) -> "PauliElement":
        return cls(m, 0, 0, 0)

    def negate(self) -> "PauliElement":
        return PauliElement(self.m, self.a, self.b, self.phase_k + 2)

    def is_diagonal(self) -> bool:
        return self.a == 0


def pauli_mul(e1: PauliElement, e2: PauliElement) -> PauliElement:
    """Exact product; phases tracked mod 4."""
    if e1.m != e2.m:
        raise ValueError("mixed qubit counts")
    a, b = e1.a ^ e2.a, e1.b ^ e2.b
    k = (e1.phase_k + e2.phase_k
         + _dot(e1.a, e1.b) + _dot(e2.a, e2.b)
         + 2 * _dot(e1.b, e2.a)
         - _dot(a, b))
    return PauliElement(e1.m, a, b, k)


def commutes(e1: PauliElement, e2: PauliElement) -> bool:
    """True iff the symplectic inner product of the labels vanishes."""
    if e1.m != e2.m:
        raise ValueError("mixed qubit counts")
    return (parity(e1.b & e2.a) ^ parity(e1.a & e2.b)) == 0


def apply(e: PauliElement, v: np.ndarray) -> np.ndarray:
    """Apply i^k E(a,b) to a complex vector: permute indices by a, flip signs by b."""
    n = 1 << e.m
    if v.shape != (n,):
        raise LengthMismatchError(f"expected length {n}, got {v.shape}")
    par = (np.bitwise_count(np.arange(n) & e.b) & 1).astype(np.int8)
    signed = np.where(par, -v, v)
    out = signed[np.arange(n) ^ e.a] if e.a else signed.copy()
    phase = _POW_I[(e.phase_k + _dot(e.a, e.b)) & 3]
    if phase != 1:
        out = out * phase
    return np.asarray(out, dtype=np.complex128)


@dataclass(frozen=True)
class StabilizerGroup:
    """Commuting Pauli subgroup without -I, given by r independent generators.

    gen_matrix is the r x 2m matrix [A | B]; generator i is (-1)^(d_i) E(row i).
    """

    m: int
    gen_matrix: Gf2Matrix
    d: Gf2Vector

    def __post_init__(self):
        r, w = self.gen_matrix.nrows, self.gen_matrix.ncols
        if w != 2 * self.m or self.d.n != r:
            raise ValueError("generator matrix must be r x 2m with r signs")
        if gf2.rank(self.gen_matrix) != r:
            raise DependentRowsError("generator rows are linearly dependent")
        rows = self.gen_matrix.rows
        mask = (1 << self.m) - 1
        for i, j in combinations(range(r), 2):
            ai, bi = rows[i] >> self.m, rows[i] & mask
            aj, bj = rows[j] >> self.m, rows[j] & mask
            if parity(bi & aj) ^ parity(ai & bj):
                raise NotIsotropicError(
                    f"generator rows {i + 1} and {j + 1} anticommute")

    @property
    def r(self) -> int:
        return self.gen_matrix.nrows

    def generators(self) -> list[PauliElement]:
        mask = (1 << self.m) - 1
        return [
            PauliElement(self.m, row >> self.m, row & mask,
                         2 * self.d.get(i + 1))
            for i, row in enumerate(self.gen_matrix.rows)
        ]

    def elements(self) -> list[PauliElement]:
        """All 2^r group members with exact signs (products of generators)."""
        gens = self.generators()
        out = [PauliElement.identity(self.m)]
        for g in gens:
            out.extend(pauli_mul(e, g) for e in list(out))
        return out

    def diagonal_count(self) -> int:
        return sum(1 for e in self.elements() if e.is_diagonal())


def stabilizer_from(ab: Gf2Matrix, d: Gf2Vector | None = None) -> StabilizerGroup:
    """Validated stabilizer from an r x 2m generator matrix and sign vector."""
    if d is None:
        d = Gf2Vector(ab.nrows, 0)
    return StabilizerGroup(ab.ncols // 2, ab, d)


def x_group(m: int) -> StabilizerGroup:
    """X_N = E(I_m, 0)."""
    return stabilizer_from(Gf2Matrix.identity(m).hstack(Gf2Matrix.zeros(m, m)))


def z_group(m: int) -> StabilizerGroup:
    """Z_N = E(0, I_m), the diagonal Paulis."""
    return stabilizer_from(Gf2Matrix.zeros(m, m).hstack(Gf2Matrix.identity(m)))


def project(s: StabilizerGroup, v: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto the joint fixed space of the signed generators.

    Averages the 2^r exact group elements, i.e. expands
    prod_i (I + (-1)^(d_i) E_i) / 2 with all product signs resolved.
    """
    n = 1 << s.m
    if v.shape != (n,):
        raise LengthMismatchError(f"expected length {n}, got {v.shape}")
    acc = np.zeros(n, dtype=np.complex128)
    for e in s.elements():
        acc += apply(e, v)
    return acc / (1 << s.r)
