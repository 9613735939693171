"""The group Sp(2m;2): generators, Bruhat factorization, coset representatives.

Elements are 2m x 2m binary matrices F with F Omega F^T = Omega, where Omega
swaps the two m-blocks.  Every element factors as
F_D(P1) F_U(S1) F_Omega(r) F_U(S2) F_D(P2); the rank r together with the
column space H of the lower-left block and the r x r symmetric part S1
restricted to its support labels the right coset modulo the Hadamard-free
subgroup, and that label is what the chirp codebook is indexed by.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import gf2
from .errors import NotInvertibleError, NotSymmetricError, NotSymplecticError
from .gf2 import Gf2Matrix, SchubertCellRep


def i_mr(m: int, r: int) -> Gf2Matrix:
    """Block matrix with I_r in the upper left corner and 0 elsewhere."""
    rows = tuple((1 << (m - 1 - i)) if i < r else 0 for i in range(m))
    return Gf2Matrix(m, m, rows)


def i_mr_neg(m: int, r: int) -> Gf2Matrix:
    """I_m - I_{m|r}: identity on the trailing m-r coordinates."""
    rows = tuple(0 if i < r else (1 << (m - 1 - i)) for i in range(m))
    return Gf2Matrix(m, m, rows)


def embed_sym(sr: Gf2Matrix, m: int) -> Gf2Matrix:
    """Place an r x r block in the upper-left corner of an m x m zero matrix."""
    r = sr.nrows
    rows = tuple(sr.rows[i] << (m - r) if i < r else 0 for i in range(m))
    return Gf2Matrix(m, m, rows)


@lru_cache(maxsize=None)
def _omega_mat(m: int) -> Gf2Matrix:
    eye, zero = Gf2Matrix.identity(m), Gf2Matrix.zeros(m, m)
    return zero.hstack(eye).vstack(eye.hstack(zero))


def is_symplectic(mat: Gf2Matrix) -> bool:
    """True iff F Omega F^T = Omega (F preserves the symplectic form)."""
    if mat.nrows != mat.ncols or mat.nrows % 2:
        return False
    om = _omega_mat(mat.nrows // 2)
    return mat @ om @ mat.transpose() == om


@dataclass(frozen=True)
class SymplecticElement:
    """A validated element of Sp(2m;2)."""

    m: int
    mat: Gf2Matrix

    def __post_init__(self):
        if self.mat.nrows != 2 * self.m or self.mat.ncols != 2 * self.m:
            raise ValueError("matrix must be 2m x 2m")
        if not is_symplectic(self.mat):
            raise NotSymplecticError("F Omega F^T != Omega")

    @property
    def a(self) -> Gf2Matrix:
        return self.mat.submatrix(1, 1, self.m, self.m)

    @property
    def b(self) -> Gf2Matrix:
        return self.mat.submatrix(1, self.m + 1, self.m, self.m)

    @property
    def c(self) -> Gf2Matrix:
        return self.mat.submatrix(self.m + 1, 1, self.m, self.m)

    @property
    def d(self) -> Gf2Matrix:
        return self.mat.submatrix(self.m + 1, self.m + 1, self.m, self.m)

    def __matmul__(self, other: "SymplecticElement") -> "SymplecticElement":
        return SymplecticElement(self.m, self.mat @ other.mat)

    def inverse(self) -> "SymplecticElement":
        om = omega(self.m).mat
        return SymplecticElement(self.m, om @ self.mat.transpose() @ om)

    @classmethod
    def identity(cls, m: int) -> "SymplecticElement":
        return cls(m, Gf2Matrix.identity(2 * m))


def _blockdiag(a: Gf2Matrix, b: Gf2Matrix, c: Gf2Matrix, d: Gf2Matrix) -> Gf2Matrix:
    return a.hstack(b).vstack(c.hstack(d))


def make_fd(p: Gf2Matrix) -> SymplecticElement:
    """F_D(P) = diag(P, P^-T) for invertible P."""
    m = p.nrows
    try:
        pinvt = gf2.invert(p).transpose()
    except gf2.SingularMatrixError as exc:
        raise NotInvertibleError(str(exc)) from exc
    return SymplecticElement(
        m, _blockdiag(p, Gf2Matrix.zeros(m, m), Gf2Matrix.zeros(m, m), pinvt))


def make_fu(s: Gf2Matrix) -> SymplecticElement:
    """F_U(S) = [[I, S], [0, I]] for symmetric S."""
    if not s.is_symmetric():
        raise NotSymmetricError("S must be symmetric")
    m = s.nrows
    eye, zero = Gf2Matrix.identity(m), Gf2Matrix.zeros(m, m)
    return SymplecticElement(m, _blockdiag(eye, s, zero, eye))


def make_fomega(m: int, r: int) -> SymplecticElement:
    """Partial swap F_Omega(r); r = m gives Omega, r = 0 the identity."""
    if not 0 <= r <= m:
        raise ValueError("need 0 <= r <= m")
    return SymplecticElement(
        m, _blockdiag(i_mr_neg(m, r), i_mr(m, r), i_mr(m, r), i_mr_neg(m, r)))


def omega(m: int) -> SymplecticElement:
    return SymplecticElement(m, _omega_mat(m))


@dataclass(frozen=True)
class CosetRep:
    """Label of a right coset of the Hadamard-free subgroup in Sp(2m;2).

    Holds the rank r, the echelon representative of the r-dimensional
    subspace H (column space of the lower-left block), and the r x r
    symmetric matrix S_r.
    """

    m: int
    r: int
    h: SchubertCellRep
    sr: Gf2Matrix

    def __post_init__(self):
        if self.h.r != self.r or self.h.m != self.m:
            raise ValueError("subspace dimension mismatch")
        if self.sr.nrows != self.r or not self.sr.is_symmetric():
            raise NotSymmetricError("S_r must be r x r symmetric")

    def representative(self) -> SymplecticElement:
        """The canonical member F_D(P^-T) F_U(S~_r) F_Omega(r) of the coset."""
        p, _, pinvt = gf2.complete_to_invertible(self.h)
        return (make_fd(pinvt)
                @ make_fu(embed_sym(self.sr, self.m))
                @ make_fomega(self.m, self.r))


@dataclass(frozen=True)
class BruhatFactors:
    """Output of the Bruhat factorization: F = F_D(P^-T) F_U(S~_r) F_Omega(r) F_D(M) F_U(S).

    Moving F_D(M) past F_U(S) puts this in the generic five-factor form with
    P1 = P^-T, S1 = S~_r, S2 = M S M^T, P2 = M.
    """

    m: int
    r: int
    h: SchubertCellRep
    p: Gf2Matrix
    sr: Gf2Matrix
    m_mat: Gf2Matrix
    s: Gf2Matrix

    @property
    def stilde(self) -> Gf2Matrix:
        return embed_sym(self.sr, self.m)

    @property
    def p1(self) -> Gf2Matrix:
        return gf2.invert(self.p).transpose()

    @property
    def s1(self) -> Gf2Matrix:
        return self.stilde

    @property
    def s2(self) -> Gf2Matrix:
        return self.m_mat @ self.s @ self.m_mat.transpose()

    @property
    def p2(self) -> Gf2Matrix:
        return self.m_mat

    def coset(self) -> CosetRep:
        return CosetRep(self.m, self.r, self.h, self.sr)

    def recompose(self) -> SymplecticElement:
        return (make_fd(self.p1)
                @ make_fu(self.stilde)
                @ make_fomega(self.m, self.r)
                @ make_fd(self.m_mat)
                @ make_fu(self.s))


def bruhat_decompose(f: SymplecticElement) -> BruhatFactors:
    """Factor a symplectic matrix through the partial swap of its C-block rank.

    Follows the constructive recipe: P completes the echelon form of cs(C);
    M mixes the first r rows of P^-1 C with the last m-r rows of P^T A;
    S~_r = P^T A M^-1 + I_{m|-r}; S is read off D and B the same way.
    """
    m = f.m
    a, b, c, d = f.a, f.b, f.c, f.d
    h = gf2.column_space(c)
    r = h.r
    p, pinv, _ = gf2.complete_to_invertible(h)
    pt_a = p.transpose() @ a
    m_mat = (pinv @ c).submatrix(1, 1, r, m).vstack(
        pt_a.submatrix(r + 1, 1, m - r, m))
    sr = (pt_a @ gf2.invert(m_mat) + i_mr_neg(m, r)).submatrix(1, 1, r, r)
    minvt = gf2.invert(m_mat).transpose()
    n_up = (pinv @ d + i_mr_neg(m, r) @ minvt).submatrix(1, 1, r, m)
    n_lo = (p.transpose() @ b + i_mr(m, r) @ minvt).submatrix(r + 1, 1, m - r, m)
    s = gf2.invert(m_mat) @ n_up.vstack(n_lo)
    return BruhatFactors(m, r, h, p, sr, m_mat, s)


def canonical_rep(f: SymplecticElement) -> CosetRep:
    """The unique (r, H, S_r) labelling the right coset of f."""
    return bruhat_decompose(f).coset()


def coset_to_lagrangian(rep: CosetRep) -> Gf2Matrix:
    """Generator matrix [I_{m|r} P^T | (I_{m|r} S~_r + I_{m|-r}) P^-1].

    Its row space is the maximal isotropic subspace attached to the coset;
    the same matrix generates the stabilizer group of the chirps it indexes.
    """
    m, r = rep.m, rep.r
    p, pinv, _ = gf2.complete_to_invertible(rep.h)
    left = i_mr(m, r) @ p.transpose()
    right = (i_mr(m, r) @ embed_sym(rep.sr, m) + i_mr_neg(m, r)) @ pinv
    return left.hstack(right)


def symplectic_order(m: int) -> int:
    """|Sp(2m;2)| = 2^(m^2) prod (4^i - 1)."""
    out = 1 << (m * m)
    for i in range(1, m + 1):
        out *= (1 << (2 * i)) - 1
    return out


def lagrangian_count(m: int) -> int:
    """|L(2m,m)| = prod (2^i + 1), also the number of cosets."""
    out = 1
    for i in range(1, m + 1):
        out *= (1 << i) + 1
    return out


def enumerate_cosets(m: int):
    """All coset labels, rank by rank."""
    for r in range(m + 1):
        for h in gf2.enumerate_grassmannian(m, r):
            for sr in gf2.enumerate_symmetric(r):
                yield CosetRep(m, r, h, sr)


def enumerate_gl(m: int):
    """All invertible m x m matrices (brute force; fine for m <= 3)."""
    for bits in range(1 << (m * m)):
        rows = tuple((bits >> (m * i)) & ((1 << m) - 1) for i in range(m))
        mat = Gf2Matrix(m, m, rows)
        if gf2.rank(mat) == m:
            yield mat


def enumerate_symplectic(m: int):
    """Every element of Sp(2m;2) exactly once, coset by coset (m <= 2)."""
    for rep in enumerate_cosets(m):
        base = rep.representative()
        for p in enumerate_gl(m):
            lead = base @ make_fd(p)
            for s in gf2.enumerate_symmetric(m):
                yield lead @ make_fu(s)


@lru_cache(maxsize=None)
def _rank_cumweights(m: int) -> list[int]:
    out, acc = [], 0
    for r in range(m + 1):
        acc += gf2.gaussian_binomial(m, r) << (r * (r + 1) // 2)
        out.append(acc)
    return out


@lru_cache(maxsize=None)
def _cell_weights(m: int, r: int):
    cells = list(combinations(range(1, m + 1), r))
    dims = [gf2.cell_dimension(m, piv) for piv in cells]
    cum, acc = [], 0
    for d in dims:
        acc += 1 << d
        cum.append(acc)
    return cells, dims, cum


def random_subspace(m: int, r: int, rng) -> SchubertCellRep:
    """Uniform element of the Grassmannian G(m,r;2): cells weighted by size."""
    cells, dims, cum = _cell_weights(m, r)
    k = gf2.weighted_choice(rng, cum)
    bits = gf2.randbelow(rng, 1 << dims[k])
    return SchubertCellRep.from_free_bits(m, cells[k], bits)


def random_coset_rep(m: int, rng) -> CosetRep:
    """Coset label drawn uniformly (all cosets have equal size)."""
    r = gf2.weighted_choice(rng, _rank_cumweights(m))
    h = random_subspace(m, r, rng)
    return CosetRep(m, r, h, gf2.random_symmetric(r, rng))


def random_symplectic(m: int, rng) -> SymplecticElement:
    """Exactly uniform over Sp(2m;2).

    All cosets have equal size, so a uniform coset label times a uniform
    element of the Hadamard-free subgroup is uniform over the group; no
    rejection is involved beyond the GL(m;2) draw.
    """
    rep = random_coset_rep(m, rng)
    p = gf2.random_invertible(m, rng)
    s = gf2.random_symmetric(m, rng)
    return rep.representative() @ make_fd(p) @ make_fu(s)
