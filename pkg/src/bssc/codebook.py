"""Exact construction and enumeration of binary (subspace) chirp codebooks.

A codeword is named by (r, H, S_r, b): sparsity r, an r-dimensional subspace
H of F_2^m in echelon form, an r x r binary symmetric matrix and a column
index b.  Its 2^r nonzero amplitudes are fourth roots of unity over
sqrt(2^r), so everything here is computed in the exact domain (on/off flag
plus an exponent mod 4 per entry); inner products reduce to Gaussian-integer
counts and distance statements carry no floating-point tolerance at all.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import sqrt
from typing import Iterator

import numpy as np

from . import gf2
from .errors import NotSymmetricError
from .gf2 import Gf2Matrix, SchubertCellRep
from .pauli import PauliElement, StabilizerGroup, stabilizer_from
from .symplectic import CosetRep, coset_to_lagrangian

_POW_I = np.array([1, 1j, -1, -1j], dtype=np.complex128)


@dataclass(frozen=True)
class BsscId:
    """Canonical codeword label; equal labels mean equal codewords."""

    m: int
    r: int
    h: SchubertCellRep
    sr: Gf2Matrix
    b: int

    def __post_init__(self):
        if self.h.m != self.m or self.h.r != self.r:
            raise ValueError("subspace shape mismatch")
        if self.sr.nrows != self.r or not self.sr.is_symmetric():
            raise NotSymmetricError("S_r must be r x r symmetric")
        if not 0 <= self.b < (1 << self.m):
            raise ValueError("b out of range")

    def coset(self) -> CosetRep:
        return CosetRep(self.m, self.r, self.h, self.sr)

    @property
    def b_high(self) -> int:
        """First r coordinates of b (the chirp part of the column index)."""
        return self.b >> (self.m - self.r)

    @property
    def b_low(self) -> int:
        """Last m-r coordinates of b (selects the on-off coset)."""
        return self.b & ((1 << (self.m - self.r)) - 1)


class ChirpVector:
    """Exact amplitude vector: entry v is i^k[v] / sqrt(2^r), or 0 where k[v] < 0."""

    __slots__ = ("m", "r", "k")

    def __init__(self, m: int, r: int, k: np.ndarray):
        if k.shape != (1 << m,) or k.dtype != np.int8:
            raise ValueError("k must be int8 of length 2^m")
        self.m = m
        self.r = r
        self.k = k

    def __eq__(self, other) -> bool:
        return (isinstance(other, ChirpVector) and self.m == other.m
                and self.r == other.r and np.array_equal(self.k, other.k))

    def __repr__(self):
        return f"ChirpVector(m={self.m}, r={self.r})"

    def support(self) -> np.ndarray:
        return np.nonzero(self.k >= 0)[0]

    def support_size(self) -> int:
        return int(np.count_nonzero(self.k >= 0))

    def to_complex(self) -> np.ndarray:
        out = np.zeros(1 << self.m, dtype=np.complex128)
        on = self.k >= 0
        out[on] = _POW_I[self.k[on]] / sqrt(1 << self.r)
        return out

    def phase_shift(self, j: int) -> "ChirpVector":
        """Multiply by the global unit i^j."""
        k = self.k.copy()
        on = k >= 0
        k[on] = (k[on] + j) & 3
        return ChirpVector(self.m, self.r, k)

    def phase_offset(self, other: "ChirpVector") -> int | None:
        """j with other == i^j * self, or None if no such global phase exists."""
        if self.m != other.m or self.r != other.r:
            return None
        on = self.k >= 0
        if not np.array_equal(on, other.k >= 0):
            return None
        if not on.any():
            return 0
        diff = (other.k[on] - self.k[on]) & 3
        j = int(diff[0])
        return j if bool(np.all(diff == j)) else None

    def canonical_key(self) -> tuple:
        """Hashable projective normal form (first nonzero amplitude set to +1)."""
        on = self.k >= 0
        idx = np.nonzero(on)[0]
        if idx.size == 0:
            return (self.m, self.r, b"")
        norm = (self.k - self.k[idx[0]]) & 3
        norm[~on] = -1
        return (self.m, self.r, norm.astype(np.int8).tobytes())


def inner_product_exact(w1: ChirpVector, w2: ChirpVector) -> tuple[int, int, int]:
    """<w1, w2> = (re + im*i) / sqrt(2^e): returns (re, im, e) as exact integers."""
    if w1.m != w2.m:
        raise ValueError("dimension mismatch")
    both = (w1.k >= 0) & (w2.k >= 0)
    d = (w2.k[both] - w1.k[both]) & 3
    counts = np.bincount(d, minlength=4)
    return int(counts[0] - counts[2]), int(counts[1] - counts[3]), w1.r + w2.r


def inner_sq_exact(w1: ChirpVector, w2: ChirpVector) -> Fraction:
    """|<w1, w2>|^2 as an exact rational."""
    re, im, e = inner_product_exact(w1, w2)
    return Fraction(re * re + im * im, 1 << e)


def chordal_distance(w1: ChirpVector, w2: ChirpVector) -> float:
    """sqrt(1 - |<w1,w2>|^2), the Grassmannian line distance."""
    return sqrt(float(1 - inner_sq_exact(w1, w2)))


def conjugate(w: ChirpVector) -> ChirpVector:
    k = w.k.copy()
    on = k >= 0
    k[on] = (-k[on]) & 3
    return ChirpVector(w.m, w.r, k)


def pointwise_mul(w1: ChirpVector, w2: ChirpVector) -> ChirpVector | None:
    """Renormalized coordinate-wise product; None when the supports are disjoint.

    The raw product has entries i^(k1+k2)/sqrt(2^(r1+r2)) on the common
    support; rescaling to unit norm keeps the exponents and resets the
    sparsity to log2 of the support size (a power of two whenever both
    factors are codewords).
    """
    if w1.m != w2.m:
        raise ValueError("dimension mismatch")
    both = (w1.k >= 0) & (w2.k >= 0)
    size = int(np.count_nonzero(both))
    if size == 0:
        return None
    r = size.bit_length() - 1
    if size != 1 << r:
        raise ValueError("common support is not a power of two")
    k = np.full(1 << w1.m, -1, dtype=np.int8)
    k[both] = (w1.k[both] + w2.k[both]) & 3
    return ChirpVector(w1.m, r, k)


def pauli_apply_exact(e: PauliElement, w: ChirpVector) -> ChirpVector:
    """Apply i^k E(a,b) inside the exact amplitude domain."""
    if e.m != w.m:
        raise ValueError("dimension mismatch")
    out = np.full(1 << w.m, -1, dtype=np.int8)
    vs = w.support()
    shift = (2 * (np.bitwise_count(vs & e.b) & 1)
             + e.phase_k + (e.a & e.b).bit_count())
    out[vs ^ e.a] = (w.k[vs] + shift) & 3
    return ChirpVector(w.m, w.r, out)


# ---------------------------------------------------------------------------
# construction

def on_off_support(cid: BsscId) -> np.ndarray:
    """The 2^r indices where the codeword is nonzero: a coset of cs(H)."""
    m, r = cid.m, cid.r
    offset = 0
    for t, comp in enumerate(cid.h.complement_pivots()):
        if (cid.b_low >> (m - r - 1 - t)) & 1:
            offset |= 1 << (m - comp)
    sup = gf2.span_array(list(cid.h.col_bits), r, offset)
    sup.sort()
    return sup


def bssc_vector(cid: BsscId) -> ChirpVector:
    """Exact amplitudes: entry a is i^(a^T P^-T S P^-1 a + 2 b^T P^-1 a)/sqrt(2^r)
    on the on-off support, 0 elsewhere."""
    m, r = cid.m, cid.r
    _, pinv, _ = gf2.complete_to_invertible(cid.h)
    stilde = gf2.Gf2Matrix(
        m, m, tuple((cid.sr.rows[i] << (m - r)) if i < r else 0 for i in range(m)))
    sup = on_off_support(cid)
    u = gf2.matvec_many(pinv, sup)
    # the support solves the on-off equation, so u ends in b's last m-r bits
    assert not np.any((u ^ cid.b) & ((1 << (m - r)) - 1))
    k = (gf2.quad_form_values(stilde, u)
         + 2 * (np.bitwise_count(u & cid.b) & 1)) & 3
    out = np.full(1 << m, -1, dtype=np.int8)
    out[sup] = k
    return ChirpVector(m, r, out)


def stabilizer_of(cid: BsscId) -> StabilizerGroup:
    """Maximal stabilizer fixing the codeword up to sign; its generator matrix
    is the Lagrangian generator of the coset label."""
    return stabilizer_from(coset_to_lagrangian(cid.coset()))


def bc_product_sparsity(s1: Gf2Matrix, s2: Gf2Matrix) -> tuple[int, SchubertCellRep]:
    """Sparsity and on-off subspace of a product of two full-rank chirp frames:
    rank and row space of S1 + S2."""
    total = s1 + s2
    rep = gf2.column_space(total.transpose())
    return rep.r, rep


# ---------------------------------------------------------------------------
# enumeration and serial numbering

def sym_count(r: int) -> int:
    return 1 << (r * (r + 1) // 2)


def rank_size(m: int, r: int) -> int:
    """Number of rank-r codewords: 2^m (m r)_2 2^(r(r+1)/2)."""
    return (gf2.gaussian_binomial(m, r) * sym_count(r)) << m


def codebook_size(m: int) -> int:
    """2^m prod_{r=1}^m (2^r + 1)."""
    out = 1 << m
    for r in range(1, m + 1):
        out *= (1 << r) + 1
    return out


def bc_size(m: int) -> int:
    """Full-sparsity codewords only: 2^(m(m+3)/2)."""
    return 1 << (m * (m + 3) // 2)


def enumerate_codebook(m: int, ranks: range | None = None) -> Iterator[BsscId]:
    """Each codeword exactly once, in serial order (r, cell, free bits, S_r, b)."""
    if m > 12:
        raise ValueError("m > 12 unsupported")
    for r in ranks if ranks is not None else range(m + 1):
        for h in gf2.enumerate_grassmannian(m, r):
            for sbits in range(sym_count(r)):
                sr = gf2.symmetric_from_bits(r, sbits)
                for b in range(1 << m):
                    yield BsscId(m, r, h, sr, b)


def enumerate_bc(m: int) -> Iterator[BsscId]:
    return enumerate_codebook(m, ranks=range(m, m + 1))


@lru_cache(maxsize=None)
def _cell_offsets(m: int, r: int) -> tuple[list, list[int]]:
    cells = list(combinations(range(1, m + 1), r))
    starts, acc = [0], 0
    for piv in cells:
        acc += 1 << gf2.cell_dimension(m, piv)
        starts.append(acc)
    return cells, starts


@lru_cache(maxsize=None)
def _rank_offsets(m: int) -> list[int]:
    starts, acc = [0], 0
    for r in range(m + 1):
        acc += rank_size(m, r)
        starts.append(acc)
    return starts


def serial_of(cid: BsscId) -> int:
    """Stable lexicographic index into enumerate_codebook(m)."""
    m, r = cid.m, cid.r
    cells, starts = _cell_offsets(m, r)
    cell_idx = starts[cells.index(cid.h.pivots)] + cid.h.free_bits()
    within = (cell_idx * sym_count(r) + gf2.symmetric_to_bits(cid.sr)) << m
    return _rank_offsets(m)[r] + within + cid.b


def id_from_serial(m: int, serial: int) -> BsscId:
    offs = _rank_offsets(m)
    if not 0 <= serial < offs[-1]:
        raise ValueError("serial out of range")
    r = bisect_right(offs, serial) - 1
    rem = serial - offs[r]
    b = rem & ((1 << m) - 1)
    rem >>= m
    sbits = rem % sym_count(r)
    cell_idx = rem // sym_count(r)
    cells, starts = _cell_offsets(m, r)
    ci = bisect_right(starts, cell_idx) - 1
    h = SchubertCellRep.from_free_bits(m, cells[ci], cell_idx - starts[ci])
    return BsscId(m, r, h, gf2.symmetric_from_bits(r, sbits), b)


# ---------------------------------------------------------------------------
# sampling

def random_id(m: int, rng, kind: str = "bssc") -> BsscId:
    """One codeword: rank drawn by codebook share for 'bssc', full rank for 'bc';
    uniform within the rank either way."""
    from .symplectic import random_subspace

    if kind == "bc":
        r = m
    elif kind == "bssc":
        r = gf2.weighted_choice(rng, _rank_offsets(m)[1:])
    else:
        raise ValueError(f"unknown kind {kind!r}")
    h = random_subspace(m, r, rng)
    sr = gf2.random_symmetric(r, rng)
    return BsscId(m, r, h, sr, gf2.randbelow(rng, 1 << m))


# ---------------------------------------------------------------------------
# exhaustive geometry checks (small m)

def max_pairwise_inner_sq(m: int) -> Fraction:
    """Largest |<w1,w2>|^2 over distinct codewords, computed exactly.

    Exhaustive over all pairs; intended for m <= 3.  The comparison uses the
    common denominator 2^(2m), so it is pure integer arithmetic.
    """
    ids = list(enumerate_codebook(m))
    ks = np.stack([bssc_vector(cid).k for cid in ids])
    rs = np.array([cid.r for cid in ids], dtype=np.int64)
    on = ks >= 0
    best_num, best_exp = 0, 0
    for i in range(len(ids) - 1):
        both = on[i] & on[i + 1:]
        d = (ks[i + 1:] - ks[i]) & 3
        re = (np.sum(both & (d == 0), axis=1, dtype=np.int64)
              - np.sum(both & (d == 2), axis=1, dtype=np.int64))
        im = (np.sum(both & (d == 1), axis=1, dtype=np.int64)
              - np.sum(both & (d == 3), axis=1, dtype=np.int64))
        num = re * re + im * im
        den_exp = rs[i] + rs[i + 1:]
        scaled = num << (2 * m - den_exp)
        j = int(np.argmax(scaled))
        if int(scaled[j]) > best_num << (2 * m - best_exp):
            best_num, best_exp = int(num[j]), int(den_exp[j])
    return Fraction(best_num, 1 << best_exp)
