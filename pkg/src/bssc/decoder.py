"""Reconstruction of subspace chirps from noiseless or noisy observations.

The pipeline mirrors the structure of a codeword: the diagonal Weyl spectrum
t[y] = s^dag E(0,y) s exposes the on-off subspace (it is the Walsh-Hadamard
transform of the entrywise power), shift-and-multiply spectra
s^dag E(x,y) s recover the symmetric chirp matrix one row per shift, and a
final small Hadamard transform over the on-pattern dechirps the column
index.  Under a rank hypothesis r the best-matching codeword has
|<w, s>| equal to the dechirp peak, so rank selection never materializes
more than the winning codeword.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import sqrt

import numpy as np

from . import _kernels, gf2
from .codebook import BsscId, bssc_vector
from .errors import (DegenerateLSWarning, EmptySupportError,
                     InsufficientSupportError, LengthMismatchError)
from .gf2 import Gf2Matrix, SchubertCellRep

_POW_I = np.array([1, 1j, -1, -1j], dtype=np.complex128)
_ARANGE: dict[int, np.ndarray] = {}

NOISELESS_TOL = 1e-9  # |t[y]| above this fraction of t[0] counts as nonzero


def _arange(n: int) -> np.ndarray:
    got = _ARANGE.get(n)
    if got is None:
        got = _ARANGE[n] = np.arange(n)
        got.setflags(write=False)
    return got


@dataclass(frozen=True)
class WeylDiagSpectrum:
    """t[y] = s^dag E(0,y) s for all y; real, and t[0] is the signal energy."""

    m: int
    values: np.ndarray


@dataclass(frozen=True)
class DecodeResult:
    id: BsscId
    residual: float
    ok: bool


def _check(s: np.ndarray) -> int:
    n = s.shape[0] if s.ndim == 1 else 0
    m = n.bit_length() - 1
    if s.ndim != 1 or n != 1 << m:
        raise LengthMismatchError("signal length must be a power of two")
    return m


def weyl_diag(s: np.ndarray) -> WeylDiagSpectrum:
    """Walsh-Hadamard transform of the entrywise power |s(v)|^2."""
    m = _check(s)
    power = (s.real * s.real + s.imag * s.imag).astype(np.float64)
    _kernels.fwht(power)
    return WeylDiagSpectrum(m, power)


def weyl_offdiag(s: np.ndarray, x: int) -> np.ndarray:
    """s^dag E(x, y) s for all y: shift by x, multiply, transform, phase."""
    m = _check(s)
    n = 1 << m
    if not 0 <= x < n:
        raise ValueError("x out of range")
    u = np.conj(s[_arange(n) ^ x]) * s
    _kernels.fwht(u)
    return _POW_I[np.bitwise_count(x & _arange(n)) & 3] * u


def greedy_independent_chain(spectrum: WeylDiagSpectrum,
                             min_mag: float = 0.0) -> list[int]:
    """Labels y != 0 in decreasing |t[y]| order, keeping only new directions.

    The prefix of length m-r is the greedy estimate of the dual subspace
    under the rank-r hypothesis.  Lines at or below min_mag are ignored
    (zero-magnitude lines never join the chain).
    """
    mags = np.abs(spectrum.values)
    order = np.argsort(-mags, kind="stable")
    chain: list[int] = []
    basis: dict[int, int] = {}
    for y in order:
        y = int(y)
        if y == 0 or mags[y] <= min_mag:
            continue
        v = y
        while v:
            p = v.bit_length() - 1
            if p in basis:
                v ^= basis[p]
            else:
                basis[p] = v
                chain.append(y)
                break
        if len(chain) == spectrum.m:
            break
    return chain


def recover_subspace(spectrum: WeylDiagSpectrum, r: int,
                     noiseless: bool = False) -> SchubertCellRep:
    """Echelon representative of the dual (dimension m-r) subspace estimate.

    Greedy over descending |t[y]| with an independence filter; in noiseless
    mode only lines above NOISELESS_TOL * t[0] count and a shortfall raises.
    """
    m = spectrum.m
    if not 0 <= r <= m:
        raise ValueError("rank out of range")
    min_mag = NOISELESS_TOL * float(spectrum.values[0]) if noiseless else 0.0
    chain = greedy_independent_chain(spectrum, min_mag)
    if len(chain) < m - r:
        raise InsufficientSupportError(
            f"only {len(chain)} independent spectrum lines for rank {r}")
    return gf2.column_space_of(m, chain[:m - r])


def recover_symmetric(s: np.ndarray, h: SchubertCellRep) -> Gf2Matrix:
    """Row-by-row recovery of S_r from the shifts along the columns of H.

    Row i is H^T y* for the strongest off-diagonal line y* at shift H f_i;
    off-diagonal disagreements are settled by the stronger row statistic.
    """
    sr, _ = _recover_symmetric_scored(s, h)
    return sr


def _recover_symmetric_scored(s: np.ndarray, h: SchubertCellRep):
    m, r = h.m, h.r
    n = 1 << m
    if r == 0:
        return Gf2Matrix.zeros(0, 0), 0.0
    xs = np.array(h.col_bits, dtype=np.int64)
    u = np.conj(s[_arange(n)[None, :] ^ xs[:, None]]) * s[None, :]
    _kernels.fwht(u)  # global phases i^(x.y) do not move the magnitudes
    mags = np.abs(u)
    y_star = np.argmax(mags, axis=1)
    row_mag = mags[_arange(r), y_star]
    # row i of S_r is H^T y*_i
    rows = []
    for y in map(int, y_star):
        bits = 0
        for col in h.col_bits:
            bits = (bits << 1) | ((col & y).bit_count() & 1)
        rows.append(bits)
    # symmetrize: on disagreement trust the row recovered at higher magnitude
    for i in range(r):
        for j in range(i + 1, r):
            bi = (rows[i] >> (r - 1 - j)) & 1
            bj = (rows[j] >> (r - 1 - i)) & 1
            if bi != bj:
                keep = bi if row_mag[i] >= row_mag[j] else bj
                if keep:
                    rows[i] |= 1 << (r - 1 - j)
                    rows[j] |= 1 << (r - 1 - i)
                else:
                    rows[i] &= ~(1 << (r - 1 - j))
                    rows[j] &= ~(1 << (r - 1 - i))
    return Gf2Matrix(r, r, tuple(int(x) for x in rows)), float(row_mag.min())


def _coset_frames(h: SchubertCellRep):
    """On-pattern index array, one row per trailing-coordinate coset, columns
    in chirp order: entry (c, x) is I_comp c XOR H x."""
    m, r = h.m, h.r
    gens = [1 << (m - i) for i in h.complement_pivots()] + list(h.col_bits)
    return gf2.span_array(gens, m).reshape(1 << (m - r), 1 << r)


def dechirp(s: np.ndarray, h: SchubertCellRep, sr: Gf2Matrix,
            noiseless: bool = False) -> int:
    """Column index recovery.

    The trailing part of b picks the on-off coset with the most energy; the
    leading part is the argmax of the Hadamard transform of the dechirped
    on-pattern against the S_r reference chirp.
    """
    return _dechirp_scored(s, h, sr, noiseless)[0]


def _dechirp_scored(s: np.ndarray, h: SchubertCellRep, sr: Gf2Matrix,
                    noiseless: bool = False) -> tuple[int, float]:
    """(b, peak) with peak = max over column indices of |<w, s>|."""
    m, r = h.m, h.r
    frames = _coset_frames(h)
    if r == m:
        b_low = 0
    else:
        power = s.real * s.real + s.imag * s.imag
        energies = power[frames].sum(axis=1)
        b_low = int(np.argmax(energies))
        if noiseless and energies[b_low] <= NOISELESS_TOL * float(power.sum()):
            raise EmptySupportError("no on-pattern energy above threshold")
    ref = _POW_I[gf2.quad_form_table(sr)]
    vals = s[frames[b_low]] * np.conj(ref) / sqrt(1 << r)
    _kernels.fwht(vals)
    b_high = int(np.argmax(np.abs(vals)))
    return (b_high << (m - r)) | b_low, float(np.abs(vals[b_high]))


def _hypothesis(s, spectrum_chain, m, r):
    """Candidate (id, peak) under a rank hypothesis; None if the chain is short."""
    if len(spectrum_chain) < m - r:
        return None
    dual = gf2.column_space_of(m, spectrum_chain[:m - r])
    h = gf2.dual_complement(dual)
    sr, _ = _recover_symmetric_scored(s, h)
    b, peak = _dechirp_scored(s, h, sr)
    return BsscId(m, r, h, sr, b), peak


def _residual_from_peak(s_norm_sq: float, peak: float) -> float:
    return sqrt(max(s_norm_sq - peak * peak, 0.0))


def decode_single(s: np.ndarray, mode: str = "noiseless",
                  ranks: range | None = None) -> DecodeResult:
    """Algorithmic inverse of the codeword construction.

    noiseless: the rank is read off the diagonal-spectrum support count and
    one pipeline pass reconstructs the codeword exactly (errors propagate).
    noisy: every rank hypothesis in `ranks` (default all) is evaluated and
    the smallest projective residual ||s - <w,s>w|| wins, with larger rank
    preferred on exact ties.

    ok means the residual is negligible relative to the signal energy, i.e.
    the observation is (a scalar multiple of) the decoded codeword.
    """
    m = _check(s)
    s = np.ascontiguousarray(s, dtype=np.complex128)
    spectrum = weyl_diag(s)
    energy = float(spectrum.values[0])
    if ranks is None:
        ranks = range(m + 1)
    if mode == "noiseless":
        nonzero = int(np.count_nonzero(
            np.abs(spectrum.values) > NOISELESS_TOL * energy))
        k = nonzero.bit_length() - 1
        if nonzero != 1 << k:
            raise InsufficientSupportError(
                f"diagonal spectrum has {nonzero} lines; not a power of two")
        r = m - k
        dual = recover_subspace(spectrum, r, noiseless=True)
        h = gf2.dual_complement(dual)
        sr = recover_symmetric(s, h)
        b, peak = _dechirp_scored(s, h, sr, noiseless=True)
        best = (BsscId(m, r, h, sr, b), peak)
    elif mode == "noisy":
        chain = greedy_independent_chain(spectrum)
        best = None
        for r in ranks:
            cand = _hypothesis(s, chain, m, r)
            if cand is not None and (best is None or cand[1] >= best[1]):
                best = cand  # >= prefers the larger rank on exact ties
        if best is None:
            raise InsufficientSupportError("no rank hypothesis is feasible")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    cid, peak = best
    w = bssc_vector(cid).to_complex()
    residual = float(np.linalg.norm(s - np.vdot(w, s) * w))
    return DecodeResult(cid, residual, residual <= 1e-6 * sqrt(energy))


def decode_multi(s: np.ndarray, n_users: int,
                 ranks: range | None = None) -> list[tuple[BsscId, complex]]:
    """Orthogonal matching pursuit over rank hypotheses.

    Each round decodes the strongest remaining codeword (duplicates of
    already-selected codewords are skipped in favour of the next-best rank
    hypothesis), jointly refits all coefficients by least squares, and
    subtracts.  A rank-deficient candidate matrix falls back to the
    pseudo-inverse.  `ranks` narrows the hypothesis set when the codebook in
    use is known to be rank-restricted (e.g. plain binary chirps).
    """
    if n_users < 1:
        raise ValueError("need at least one user")
    m = _check(s)
    s = np.ascontiguousarray(s, dtype=np.complex128)
    if ranks is None:
        ranks = range(m + 1)
    chosen: list[BsscId] = []
    columns: list[np.ndarray] = []
    resid = s.copy()
    coeffs = np.zeros(0, dtype=np.complex128)
    for _ in range(n_users):
        spectrum = weyl_diag(resid)
        chain = greedy_independent_chain(spectrum)
        cands = []
        for r in ranks:
            cand = _hypothesis(resid, chain, m, r)
            if cand is not None:
                cands.append(cand)
        # stable sort: descending peak, larger rank first on exact ties
        cands.sort(key=lambda c: (-c[1], -c[0].r))
        pick = next((c for c in cands if c[0] not in chosen), None)
        if pick is None:
            pick = cands[0] if cands else None
        if pick is None:
            raise InsufficientSupportError("no rank hypothesis is feasible")
        chosen.append(pick[0])
        columns.append(bssc_vector(pick[0]).to_complex())
        w_mat = np.stack(columns, axis=1)
        coeffs = _joint_least_squares(w_mat, s)
        resid = s - w_mat @ coeffs
    return list(zip(chosen, (complex(c) for c in coeffs)))


def _joint_least_squares(w_mat: np.ndarray, s: np.ndarray) -> np.ndarray:
    gram = w_mat.conj().T @ w_mat
    rhs = w_mat.conj().T @ s
    if np.linalg.cond(gram) > 1e12:
        warnings.warn("rank-deficient candidate matrix; pseudo-inverse refit",
                      DegenerateLSWarning)
        return np.linalg.pinv(gram) @ rhs
    return np.linalg.solve(gram, rhs)
