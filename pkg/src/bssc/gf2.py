"""Bit-packed linear algebra over GF(2).

Matrices and vectors are stored as Python integers, one machine word per row.
Coordinate 1 of a length-n vector is the most significant bit, so the vector
(v_1, ..., v_n) packs to the integer sum(v_i * 2**(n-i)).  With this order a
binary m-vector doubles as the index of a standard basis vector of C^(2^m)
in tensor order, which every other module relies on.

Widths up to n = 64 work; in practice m <= 12.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import RankDeficientError, SingularMatrixError


def parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True)
class Gf2Vector:
    """Binary column vector of fixed length, packed MSB-first."""

    n: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits out of range for length {self.n}")

    @classmethod
    def from_coords(cls, coords) -> "Gf2Vector":
        bits = 0
        for c in coords:
            bits = (bits << 1) | (int(c) & 1)
        return cls(len(coords), bits)

    def get(self, i: int) -> int:
        """Coordinate i, 1-based."""
        return (self.bits >> (self.n - i)) & 1

    def coords(self) -> list[int]:
        return [(self.bits >> (self.n - 1 - i)) & 1 for i in range(self.n)]

    def weight(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "Gf2Vector") -> "Gf2Vector":
        return Gf2Vector(self.n, self.bits ^ other.bits)

    def dot(self, other: "Gf2Vector") -> int:
        return parity(self.bits & other.bits)


def basis_vector(n: int, i: int) -> Gf2Vector:
    """Standard basis vector e_i (1-based)."""
    return Gf2Vector(n, 1 << (n - i))


@dataclass(frozen=True)
class Gf2Matrix:
    """Binary matrix, row-major, each row one packed integer."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        lim = 1 << self.ncols
        if any(not 0 <= r < lim for r in self.rows):
            raise ValueError("row bits out of range")

    @classmethod
    def from_rows(cls, rows) -> "Gf2Matrix":
        """Build from an iterable of 0/1 iterables."""
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        packed = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            bits = 0
            for c in r:
                bits = (bits << 1) | (int(c) & 1)
            packed.append(bits)
        return cls(len(rows), ncols, tuple(packed))

    @classmethod
    def from_cols(cls, m: int, cols) -> "Gf2Matrix":
        """Build an m-row matrix from packed column integers (MSB = row 1)."""
        cols = list(cols)
        rows = []
        for i in range(m):
            bits = 0
            for c in cols:
                bits = (bits << 1) | ((c >> (m - 1 - i)) & 1)
            rows.append(bits)
        return cls(m, len(cols), tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << (n - 1 - i) for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Gf2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    def get(self, i: int, j: int) -> int:
        """Entry (i, j), 1-based."""
        return (self.rows[i - 1] >> (self.ncols - j)) & 1

    def col(self, j: int) -> int:
        """Column j (1-based) as a packed integer, MSB = row 1."""
        bits = 0
        for r in self.rows:
            bits = (bits << 1) | ((r >> (self.ncols - j)) & 1)
        return bits

    def cols(self) -> list[int]:
        return [self.col(j) for j in range(1, self.ncols + 1)]

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.ncols, self.nrows, tuple(self.cols()))

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return Gf2Matrix(
            self.nrows, self.ncols,
            tuple(a ^ b for a, b in zip(self.rows, other.rows)),
        )

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        q = self.ncols
        out = []
        for r in self.rows:
            acc = 0
            bits = r
            while bits:
                j = bits.bit_length() - 1  # bit position from LSB
                acc ^= other.rows[q - 1 - j]
                bits ^= 1 << j
            out.append(acc)
        return Gf2Matrix(self.nrows, other.ncols, tuple(out))

    def matvec(self, v: Gf2Vector) -> Gf2Vector:
        if v.n != self.ncols:
            raise ValueError("shape mismatch")
        bits = 0
        for r in self.rows:
            bits = (bits << 1) | parity(r & v.bits)
        return Gf2Vector(self.nrows, bits)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self.rows == self.transpose().rows

    def is_zero(self) -> bool:
        return not any(self.rows)

    def hstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        w = other.ncols
        return Gf2Matrix(
            self.nrows, self.ncols + w,
            tuple((a << w) | b for a, b in zip(self.rows, other.rows)),
        )

    def vstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Gf2Matrix(self.nrows + other.nrows, self.ncols,
                         self.rows + other.rows)

    def submatrix(self, row0: int, col0: int, nrows: int, ncols: int) -> "Gf2Matrix":
        """Block starting at (row0, col0), 1-based."""
        mask = (1 << ncols) - 1
        shift = self.ncols - (col0 - 1) - ncols
        rows = tuple((self.rows[row0 - 1 + i] >> shift) & mask for i in range(nrows))
        return Gf2Matrix(nrows, ncols, rows)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> (self.ncols - 1 - j)) & 1 for j in range(self.ncols)]
                for r in self.rows]

    def to_text(self) -> str:
        """One row per line, characters '0'/'1', no separators."""
        return "\n".join(format(r, f"0{self.ncols}b") if self.ncols else ""
                         for r in self.rows)

    @classmethod
    def from_text(cls, text: str) -> "Gf2Matrix":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        if any(set(ln) - {"0", "1"} for ln in lines):
            raise ValueError("matrix text must contain only '0'/'1'")
        return cls.from_rows([[int(c) for c in ln] for ln in lines])


def _eliminate(rows: list[int]) -> list[int]:
    """Echelon basis (distinct leading bits) of the span of packed rows."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            p = v.bit_length() - 1
            if p in basis:
                v ^= basis[p]
            else:
                basis[p] = v
                break
    return [basis[p] for p in sorted(basis, reverse=True)]


def rank(m: Gf2Matrix) -> int:
    """GF(2) rank via Gaussian elimination on packed rows."""
    return len(_eliminate(list(m.rows)))


def invert(m: Gf2Matrix) -> Gf2Matrix:
    """Inverse of a square matrix; raises SingularMatrixError if rank-deficient."""
    if m.nrows != m.ncols:
        raise ValueError("matrix not square")
    n = m.nrows
    # augment each row with an identity tag in the low n bits
    aug = [(m.rows[i] << n) | (1 << (n - 1 - i)) for i in range(n)]
    where = {}  # pivot bit -> index into reduced list
    reduced: list[int] = []
    for v in aug:
        while v >> n:
            p = (v >> n).bit_length() - 1
            if p in where:
                v ^= reduced[where[p]]
            else:
                where[p] = len(reduced)
                reduced.append(v)
                break
        else:
            raise SingularMatrixError("matrix is singular over GF(2)")
    # back-substitute to clear everything above the pivots
    for p, idx in where.items():
        for k in range(len(reduced)):
            if k != idx and (reduced[k] >> (n + p)) & 1:
                reduced[k] ^= reduced[idx]
    out = [0] * n
    for p, idx in where.items():
        out[n - 1 - p] = reduced[idx] & ((1 << n) - 1)
    return Gf2Matrix(n, n, tuple(out))


@dataclass(frozen=True)
class SchubertCellRep:
    """The unique column-reduced-echelon representative of a subspace.

    pivots is the increasing set of pivot rows (1-based); column j has its
    topmost 1 at row pivots[j], zeros elsewhere in that row, and free entries
    only below the pivot in rows outside the pivot set.
    """

    m: int
    pivots: tuple[int, ...]
    col_bits: tuple[int, ...]  # packed columns, MSB = row 1

    def __post_init__(self):
        if list(self.pivots) != sorted(set(self.pivots)):
            raise ValueError("pivots must be strictly increasing")
        for j, (p, c) in enumerate(zip(self.pivots, self.col_bits)):
            if c.bit_length() != self.m - p + 1:
                raise ValueError(f"column {j + 1} does not lead at row {p}")
            for k, q in enumerate(self.pivots):
                want = 1 if k == j else 0
                if (c >> (self.m - q)) & 1 != want:
                    raise ValueError("pivot rows must form an identity block")

    @property
    def r(self) -> int:
        return len(self.pivots)

    @property
    def matrix(self) -> Gf2Matrix:
        return Gf2Matrix.from_cols(self.m, self.col_bits)

    def complement_pivots(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.m + 1) if i not in self.pivots)

    def free_positions(self) -> list[tuple[int, int]]:
        """Free (row, col) slots in a fixed order: columns left to right,
        rows top to bottom below each pivot."""
        piv = set(self.pivots)
        out = []
        for j, p in enumerate(self.pivots, start=1):
            out.extend((i, j) for i in range(p + 1, self.m + 1) if i not in piv)
        return out

    def free_bits(self) -> int:
        """Free entries packed into an integer, first slot most significant."""
        mat = self.matrix
        bits = 0
        for (i, j) in self.free_positions():
            bits = (bits << 1) | mat.get(i, j)
        return bits

    @classmethod
    def from_free_bits(cls, m: int, pivots: tuple[int, ...], bits: int) -> "SchubertCellRep":
        piv = set(pivots)
        slots = []
        for j, p in enumerate(pivots, start=1):
            slots.extend((i, j) for i in range(p + 1, m + 1) if i not in piv)
        cols = [1 << (m - p) for p in pivots]
        for k, (i, j) in enumerate(slots):
            if (bits >> (len(slots) - 1 - k)) & 1:
                cols[j - 1] |= 1 << (m - i)
        return cls(m, tuple(pivots), tuple(cols))


def cell_dimension(m: int, pivots: tuple[int, ...]) -> int:
    """Number of free entries of the cell with the given pivot rows."""
    return sum(m - p - (len(pivots) - j) for j, p in enumerate(pivots, start=1))


def column_space_of(m: int, cols) -> SchubertCellRep:
    """Echelon representative of the span of packed column vectors."""
    basis: dict[int, int] = {}  # top bit position -> column vector
    for v in cols:
        while v:
            p = v.bit_length() - 1
            if p in basis:
                v ^= basis[p]
            else:
                basis[p] = v
                break
    # clear pivot bits from the other basis vectors (reduced form)
    for p in sorted(basis, reverse=True):
        for q in basis:
            if q != p and (basis[q] >> p) & 1:
                basis[q] ^= basis[p]
    tops = sorted(basis, reverse=True)  # descending bit = ascending row
    return SchubertCellRep(
        m, tuple(m - p for p in tops), tuple(basis[p] for p in tops))


def column_space(mat: Gf2Matrix) -> SchubertCellRep:
    """Echelon representative of the column space of an arbitrary matrix."""
    return column_space_of(mat.nrows, mat.cols())


def column_echelon(mat: Gf2Matrix) -> SchubertCellRep:
    """Echelon representative of a full-column-rank matrix."""
    rep = column_space(mat)
    if rep.r != mat.ncols:
        raise RankDeficientError(
            f"rank {rep.r} < {mat.ncols} columns")
    return rep


def dual_raw_cols(rep: SchubertCellRep) -> list[int]:
    """Packed columns of the un-reverted dual (see dual_raw)."""
    m = rep.m
    out = []
    for comp in rep.complement_pivots():
        c = 1 << (m - comp)
        for j, p in enumerate(rep.pivots):
            if p < comp and (rep.col_bits[j] >> (m - comp)) & 1:
                c |= 1 << (m - p)
        out.append(c)
    return out


def dual_raw(rep: SchubertCellRep) -> Gf2Matrix:
    """The un-reverted dual: m x (m-r) matrix T with rep.matrix^T @ T = 0.

    Column k carries a 1 at complement row i~_k plus copies of the free
    entries H[i~_k, j] at the pivot rows above it.
    """
    return Gf2Matrix.from_cols(rep.m, dual_raw_cols(rep))


def dual_complement(rep: SchubertCellRep) -> SchubertCellRep:
    """Echelon representative of the dual space {x : rep.matrix^T x = 0}."""
    if rep.r == rep.m:
        return SchubertCellRep(rep.m, (), ())
    return column_space_of(rep.m, dual_raw_cols(rep))


def complete_to_invertible(rep: SchubertCellRep) -> tuple[Gf2Matrix, Gf2Matrix, Gf2Matrix]:
    """Complete an echelon representative to P = [H | I_comp] in GL(m;2).

    Returns (P, P^-1, P^-T); the inverse transpose is [I_piv | dual_raw] and
    comes for free from the echelon structure.
    """
    m = rep.m
    p_cols = list(rep.col_bits) + [1 << (m - i) for i in rep.complement_pivots()]
    pinvt_cols = [1 << (m - i) for i in rep.pivots] + dual_raw_cols(rep)
    p = Gf2Matrix.from_cols(m, p_cols)
    # rows of P^-1 are the columns of P^-T, already packed
    pinv = Gf2Matrix(m, m, tuple(pinvt_cols))
    return p, pinv, Gf2Matrix.from_cols(m, pinvt_cols)


def gaussian_binomial(m: int, r: int) -> int:
    """Number of r-dimensional subspaces of F_2^m."""
    if not 0 <= r <= m:
        return 0
    num = den = 1
    for i in range(r):
        num *= (1 << (m - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def enumerate_grassmannian(m: int, r: int) -> Iterator[SchubertCellRep]:
    """Every r-dimensional subspace of F_2^m exactly once, in serial order."""
    if not 0 <= r <= m:
        raise ValueError("need 0 <= r <= m")
    for pivots in combinations(range(1, m + 1), r):
        nfree = cell_dimension(m, pivots)
        for bits in range(1 << nfree):
            yield SchubertCellRep.from_free_bits(m, pivots, bits)


def enumerate_symmetric(n: int) -> Iterator[Gf2Matrix]:
    """All binary symmetric n x n matrices, in serial order."""
    for bits in range(1 << (n * (n + 1) // 2)):
        yield symmetric_from_bits(n, bits)


def symmetric_from_bits(n: int, bits: int) -> Gf2Matrix:
    """Symmetric matrix from its packed upper triangle (row-major, incl. diagonal)."""
    rows = [0] * n
    k = n * (n + 1) // 2
    pos = 0
    for i in range(n):
        for j in range(i, n):
            if (bits >> (k - 1 - pos)) & 1:
                rows[i] |= 1 << (n - 1 - j)
                rows[j] |= 1 << (n - 1 - i)
            pos += 1
    return Gf2Matrix(n, n, tuple(rows))


def symmetric_to_bits(mat: Gf2Matrix) -> int:
    n = mat.nrows
    bits = 0
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            bits = (bits << 1) | mat.get(i, j)
    return bits


def matvec_many(mat: Gf2Matrix, vs: np.ndarray) -> np.ndarray:
    """Matrix times many packed vectors at once."""
    out = np.zeros(vs.shape, dtype=np.int64)
    for i, row in enumerate(mat.rows):
        out |= (np.bitwise_count(vs & row) & 1).astype(np.int64) << (mat.nrows - 1 - i)
    return out


def span_array(cols: list[int], r: int, offset: int = 0) -> np.ndarray:
    """offset XOR (combination of cols indexed by the bits of x), x in [0, 2^r).

    Built by doubling, appending one generator at a time from the least
    significant index bit up; total work 2^(r+1).
    """
    if len(cols) != r:
        raise ValueError("need exactly r generators")
    out = np.full(1, offset, dtype=np.int64)
    for col in reversed(cols):
        out = np.concatenate([out, out ^ col])
    return out


@lru_cache(maxsize=None)
def _arange_bitplanes(n: int) -> np.ndarray:
    """(n, 2^n) int16 matrix whose column v holds the bits of v, MSB first."""
    vs = np.arange(1 << n, dtype=np.int64)
    return np.stack([((vs >> (n - 1 - i)) & 1) for i in range(n)]).astype(np.int16)


def _bitplanes(n: int, vs: np.ndarray) -> np.ndarray:
    return np.stack([((vs >> (n - 1 - i)) & 1) for i in range(n)]).astype(np.int16)


def dense_int16(mat: Gf2Matrix) -> np.ndarray:
    """Unpack to a dense (nrows, ncols) int16 array."""
    rows = np.array(mat.rows, dtype=np.int64)
    shifts = mat.ncols - 1 - np.arange(mat.ncols)
    return ((rows[:, None] >> shifts[None, :]) & 1).astype(np.int16)


def _quad_on_planes(s: Gf2Matrix, planes: np.ndarray) -> np.ndarray:
    # v^T S v over the integers = diagonal once + off-diagonal twice, so the
    # plain bilinear form with the full matrix already counts correctly
    acc = ((dense_int16(s) @ planes) * planes).sum(axis=0)
    return (acc & 3).astype(np.int8)


def quad_form_values(s: Gf2Matrix, vs: np.ndarray) -> np.ndarray:
    """v^T S v mod 4 (integer arithmetic) at packed vectors vs."""
    if s.nrows == 0:
        return np.zeros(vs.shape, dtype=np.int8)
    return _quad_on_planes(s, _bitplanes(s.nrows, vs))


def quad_form_table(s: Gf2Matrix) -> np.ndarray:
    """v^T S v mod 4 over all v in [0, 2^n), using cached bit planes."""
    if s.nrows == 0:
        return np.zeros(1, dtype=np.int8)
    return _quad_on_planes(s, _arange_bitplanes(s.nrows))


def quad_form(s: Gf2Matrix, v: Gf2Vector | int) -> int:
    bits = v.bits if isinstance(v, Gf2Vector) else v
    return int(quad_form_values(s, np.array([bits], dtype=np.int64))[0])


def randbelow(rng, n: int) -> int:
    """Exactly uniform integer in [0, n); n may exceed 64 bits."""
    if n <= 0:
        raise ValueError("n must be positive")
    k = (n - 1).bit_length()
    if k == 0:
        return 0
    words = (k + 63) // 64
    while True:
        x = 0
        for w in map(int, rng.integers(0, 1 << 64, size=words, dtype=np.uint64)):
            x = (x << 64) | w
        x &= (1 << k) - 1
        if x < n:
            return x


def weighted_choice(rng, cumulative: list[int]) -> int:
    """Index drawn with probability proportional to the weight increments."""
    import bisect

    return bisect.bisect_right(cumulative, randbelow(rng, cumulative[-1]))


def random_invertible(m: int, rng) -> Gf2Matrix:
    """Uniform element of GL(m;2) by rejection sampling."""
    while True:
        rows = tuple(randbelow(rng, 1 << m) for _ in range(m))
        mat = Gf2Matrix(m, m, rows)
        if rank(mat) == m:
            return mat


def random_symmetric(n: int, rng) -> Gf2Matrix:
    return symmetric_from_bits(n, randbelow(rng, 1 << (n * (n + 1) // 2)))
