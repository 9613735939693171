"""Monte-Carlo experiments over the block-fading multi-user channel.

The observation is s = sum_l h_l w_l + n with i.i.d. CN(0,1) gains, unknown
at the receiver, and optional AWGN.  SNR convention (declared in all
outputs): codewords have unit norm, so SNR = 1/(N sigma^2) where sigma^2 is
the per-component complex noise variance; total noise energy at snr_db is
10^(-snr_db/10).

Trials are independent with per-trial RNG streams derived from (seed, trial
index), so results are bit-identical regardless of the worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from math import sqrt

import numpy as np

from . import codebook as codebook_mod, decoder
from .codebook import BsscId, bssc_vector
from .errors import ConfigError

_KINDS = ("bssc", "bc", "random")

SNR_CONVENTION = "unit-norm codeword energy over total noise energy: snr = 1/(N*sigma^2)"


@dataclass(frozen=True)
class ExperimentConfig:
    m: int
    n_users: int
    trials: int = 10_000
    snr_db: float | None = None
    kind: str = "bssc"
    seed: int = 0
    parallelism: int = 1

    def __post_init__(self):
        if not 1 <= self.m <= 12:
            raise ConfigError("m must be in [1, 12]")
        if self.trials < 1 or self.n_users < 1 or self.parallelism < 1:
            raise ConfigError("trials, n_users and parallelism must be >= 1")
        if self.kind not in _KINDS:
            raise ConfigError(f"kind must be one of {_KINDS}")
        if self.kind == "random" and self.m > 6:
            raise ConfigError("random-codebook exhaustive search is infeasible beyond m = 6")
        if self.n_users > self.codebook_cardinality():
            raise ConfigError("more users than codewords")

    def codebook_cardinality(self) -> int:
        if self.kind == "bc":
            return codebook_mod.bc_size(self.m)
        return codebook_mod.codebook_size(self.m)


@dataclass(frozen=True)
class TrialOutcome:
    sent: tuple
    decoded: tuple

    @property
    def hit_flags(self) -> tuple[bool, ...]:
        """Multiset membership of each sent codeword among the decoded ones."""
        left = list(self.decoded)
        flags = []
        for cid in self.sent:
            if cid in left:
                left.remove(cid)
                flags.append(True)
            else:
                flags.append(False)
        return tuple(flags)

    @property
    def missed(self) -> int:
        return sum(1 for f in self.hit_flags if not f)


@dataclass(frozen=True)
class ExperimentSummary:
    config: ExperimentConfig
    user_errors: int
    err_prob: float
    ci_lo: float
    ci_hi: float
    seconds: float


def noise_sigma_sq(snr_db: float, n: int) -> float:
    """Per-component complex noise variance under the declared SNR convention."""
    return 10.0 ** (-snr_db / 10.0) / n


def sample_codewords(kind: str, m: int, n_users: int, rng) -> list:
    """Draw distinct codewords: ids for bssc/bc, fresh unit-norm Gaussian
    vectors for the random baseline."""
    if kind == "random":
        n = 1 << m
        out = []
        for _ in range(n_users):
            v = rng.normal(size=n) + 1j * rng.normal(size=n)
            out.append(v / np.linalg.norm(v))
        return out
    if kind not in ("bssc", "bc"):
        raise ConfigError(f"unknown kind {kind!r}")
    chosen: list[BsscId] = []
    while len(chosen) < n_users:
        cid = codebook_mod.random_id(m, rng, kind=kind)
        if cid not in chosen:
            chosen.append(cid)
    return chosen


def synthesize(codewords, h=None, snr_db: float | None = None, rng=None):
    """s = sum h_l w_l + n; draws missing gains as CN(0,1) and scales a unit
    noise shape by the SNR, so a fixed stream pairs trials across SNR points."""
    vecs = [bssc_vector(c).to_complex() if isinstance(c, BsscId) else np.asarray(c)
            for c in codewords]
    n = vecs[0].shape[0]
    if h is None:
        h = (rng.normal(size=len(vecs)) + 1j * rng.normal(size=len(vecs))) / sqrt(2)
    s = np.zeros(n, dtype=np.complex128)
    for hi, w in zip(h, vecs):
        s += hi * w
    if snr_db is not None:
        shape = (rng.normal(size=n) + 1j * rng.normal(size=n)) / sqrt(2)
        s += shape * sqrt(noise_sigma_sq(snr_db, n))
    return s


def wilson_interval(errors: int, total: int, z: float = 1.96) -> tuple[float, float]:
    p = errors / total
    denom = 1 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = z * sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    return max(center - half, 0.0), min(center + half, 1.0)


def _trial_rng(seed: int, trial: int):
    return np.random.default_rng([seed, trial])


def run_trial(config: ExperimentConfig, trial: int) -> TrialOutcome:
    rng = _trial_rng(config.seed, trial)
    if config.kind == "random":
        return _run_random_trial(config, trial, rng)
    sent = sample_codewords(config.kind, config.m, config.n_users, rng)
    s = synthesize(sent, snr_db=config.snr_db, rng=rng)
    # a receiver using the plain-chirp codebook only hypothesizes full rank
    ranks = range(config.m, config.m + 1) if config.kind == "bc" else None
    pairs = decoder.decode_multi(s, config.n_users, ranks=ranks)
    return TrialOutcome(tuple(sent), tuple(cid for cid, _ in pairs))


_RANDOM_CHUNK = 1 << 14


def _random_chunk(m: int, seed: int, trial: int, chunk: int, size: int) -> np.ndarray:
    """Deterministic slab of the per-trial random codebook (unit-norm rows)."""
    rng = np.random.default_rng([seed, trial, 7, chunk])
    block = rng.normal(size=(size, 1 << m)) + 1j * rng.normal(size=(size, 1 << m))
    block /= np.linalg.norm(block, axis=1, keepdims=True)
    return block


def _run_random_trial(config: ExperimentConfig, trial: int, rng) -> TrialOutcome:
    """Exhaustive-search OMP over a per-trial Gaussian codebook of the same
    cardinality as the chirp codebook; the codebook is streamed in chunks so
    it is never fully materialized."""
    m, big = config.m, config.codebook_cardinality()
    n = 1 << m
    sent_idx = []
    while len(sent_idx) < config.n_users:
        k = int(rng.integers(0, big))
        if k not in sent_idx:
            sent_idx.append(k)
    nchunks = (big + _RANDOM_CHUNK - 1) // _RANDOM_CHUNK
    sent_vecs = {}
    for c in sorted({k // _RANDOM_CHUNK for k in sent_idx}):
        size = min(_RANDOM_CHUNK, big - c * _RANDOM_CHUNK)
        block = _random_chunk(m, config.seed, trial, c, size)
        for k in sent_idx:
            if k // _RANDOM_CHUNK == c:
                sent_vecs[k] = block[k % _RANDOM_CHUNK]
    s = synthesize([sent_vecs[k] for k in sent_idx],
                   snr_db=config.snr_db, rng=rng)
    chosen_idx: list[int] = []
    chosen_cols: list[np.ndarray] = []
    resid = s.copy()
    for _ in range(config.n_users):
        best_score, best_k, best_vec = -1.0, -1, None
        for c in range(nchunks):
            size = min(_RANDOM_CHUNK, big - c * _RANDOM_CHUNK)
            block = _random_chunk(m, config.seed, trial, c, size)
            scores = np.abs(block.conj() @ resid)
            for k in chosen_idx:
                if k // _RANDOM_CHUNK == c:
                    scores[k % _RANDOM_CHUNK] = -1.0
            j = int(np.argmax(scores))
            if scores[j] > best_score:
                best_score = float(scores[j])
                best_k = c * _RANDOM_CHUNK + j
                best_vec = block[j].copy()
        chosen_idx.append(best_k)
        chosen_cols.append(best_vec)
        w_mat = np.stack(chosen_cols, axis=1)
        coeffs, *_ = np.linalg.lstsq(w_mat, s, rcond=None)
        resid = s - w_mat @ coeffs
    return TrialOutcome(tuple(sent_idx), tuple(chosen_idx))


def _count_errors(config: ExperimentConfig, lo: int, hi: int) -> int:
    return sum(run_trial(config, t).missed for t in range(lo, hi))


def run(config: ExperimentConfig) -> ExperimentSummary:
    """Estimate the per-user error probability with a Wilson 95% interval."""
    t0 = time.perf_counter()
    if config.parallelism > 1 and config.trials >= 2 * config.parallelism:
        bounds = np.linspace(0, config.trials, config.parallelism + 1, dtype=int)
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            errors = sum(pool.map(_count_errors,
                                  [config] * config.parallelism,
                                  bounds[:-1], bounds[1:]))
    else:
        errors = _count_errors(config, 0, config.trials)
    total = config.trials * config.n_users
    lo, hi = wilson_interval(errors, total)
    return ExperimentSummary(config, errors, errors / total, lo, hi,
                             time.perf_counter() - t0)


def sweep(base: ExperimentConfig, **axis) -> list[ExperimentSummary]:
    """Run over one varying field, e.g. sweep(cfg, snr_db=[0, 4, 8])."""
    (field, values), = axis.items()
    return [run(replace(base, **{field: v})) for v in values]


def diag_spectrum_magnitudes(s: np.ndarray) -> np.ndarray:
    """|s^dag E(0,y) s| for plotting on-off pattern pictures."""
    return np.abs(decoder.weyl_diag(np.ascontiguousarray(s, dtype=np.complex128)).values)
