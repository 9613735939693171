"""Benchmark the compiled transform kernel against the NumPy fallback.

Usage:
    python benchmarks/bench_fwht.py            # kernel table + end-to-end decode
    BSSC_NO_EXT=1 python benchmarks/bench_fwht.py --decode-only

When the compiled backend is active, the script re-executes itself with
BSSC_NO_EXT=1 to measure the end-to-end decode throughput of the fallback.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

import bssc
from bssc import _kernels, codebook, decoder


def _timer(fn, arr, reps):
    copies = [arr.copy() for _ in range(reps)]
    t0 = time.perf_counter()
    for c in copies:
        fn(c)
    return (time.perf_counter() - t0) / reps


def bench_kernels():
    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'batch':>5} {'numpy us':>10} {'active us':>10} {'speedup':>8}")
    for m in (8, 10, 12):
        n = 1 << m
        for batch in (1, 16):
            a = rng.normal(size=(batch, n)) + 1j * rng.normal(size=(batch, n))
            reps = max(5, 2000 // batch)
            t_np = _timer(lambda x: _kernels.fwht_numpy(x, m), a, reps)
            t_active = _timer(lambda x: _kernels.fwht(x, stages=m), a, reps)
            print(f"{n:>6} {batch:>5} {1e6 * t_np:>10.1f} {1e6 * t_active:>10.1f} "
                  f"{t_np / t_active:>8.2f}x")


def bench_decode(trials=200, m=8, n_users=3):
    rng = np.random.default_rng(1)
    sigs = []
    for _ in range(trials):
        ids = [codebook.random_id(m, rng) for _ in range(n_users)]
        h = (rng.normal(size=n_users) + 1j * rng.normal(size=n_users)) / np.sqrt(2)
        sigs.append(sum(hi * codebook.bssc_vector(c).to_complex()
                        for hi, c in zip(h, ids)))
    t0 = time.perf_counter()
    for s in sigs:
        decoder.decode_multi(s, n_users)
    per = (time.perf_counter() - t0) / trials
    print(f"decode_multi m={m} L={n_users} [{bssc.kernel_backend()}]: "
          f"{1e3 * per:.2f} ms/trial")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--decode-only", action="store_true")
    args = parser.parse_args()
    print(f"active kernel backend: {bssc.kernel_backend()}")
    if not args.decode_only:
        bench_kernels()
    bench_decode()
    if bssc.kernel_backend() == "compiled" and not args.decode_only:
        sys.stdout.flush()
        env = dict(os.environ, BSSC_NO_EXT="1")
        subprocess.run([sys.executable, __file__, "--decode-only"],
                       env=env, check=True)


if __name__ == "__main__":
    main()
