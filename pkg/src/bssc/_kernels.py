"""Fast Walsh-Hadamard kernels with backend selection at import time.

The butterflies run over the *top* index bits: stage j pairs entries whose
indices differ by N >> j.  A full transform (stages == log2 N) computes the
unnormalized sum_v (-1)^(y.v) a[v]; a partial transform over the first r
stages is the tensor action H^(x)r (x) I on the leading tensor factors.

Set BSSC_NO_EXT=1 in the environment to force the NumPy fallback.
"""

from __future__ import annotations

import os

import numpy as np

try:
    if os.environ.get("BSSC_NO_EXT"):
        raise ImportError("extension disabled by BSSC_NO_EXT")
    from . import _fwht_ext

    BACKEND = "compiled"
except ImportError:
    _fwht_ext = None
    BACKEND = "numpy"


def fwht_numpy(a: np.ndarray, stages: int) -> np.ndarray:
    """Pure-NumPy butterflies; in place, vectorized one stage at a time."""
    flat = a.reshape(-1, a.shape[-1])
    n = flat.shape[-1]
    for j in range(1, stages + 1):
        s = n >> j
        v = flat.reshape(flat.shape[0], -1, 2, s)
        lo = v[:, :, 0, :].copy()
        v[:, :, 0, :] += v[:, :, 1, :]
        v[:, :, 1, :] *= -1
        v[:, :, 1, :] += lo
    return a


def fwht(a: np.ndarray, stages: int | None = None) -> np.ndarray:
    """In-place partial Walsh-Hadamard transform; returns the input array.

    a must be C-contiguous float64 or complex128 with last-axis length 2^m;
    stages defaults to the full log2 length.
    """
    n = a.shape[-1]
    m = n.bit_length() - 1
    if n != 1 << m:
        raise ValueError("last axis length must be a power of two")
    if stages is None:
        stages = m
    if not 0 <= stages <= m:
        raise ValueError("stages out of range")
    if stages == 0 or n == 1:
        return a
    if _fwht_ext is not None:
        flat = a.reshape(-1, n)
        if a.dtype == np.complex128:
            _fwht_ext.fwht_c128(flat, stages)
        elif a.dtype == np.float64:
            _fwht_ext.fwht_f64(flat, stages)
        else:
            raise TypeError("fwht requires float64 or complex128")
        return a
    if a.dtype not in (np.float64, np.complex128):
        raise TypeError("fwht requires float64 or complex128")
    return fwht_numpy(a, stages)
