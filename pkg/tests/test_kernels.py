import os
import subprocess
import sys

import numpy as np
import pytest

from bssc import _kernels


def naive_fwht(a, stages):
    """Dense oracle: kron of 2x2 butterflies on the leading tensor slots."""
    n = a.shape[-1]
    m = n.bit_length() - 1
    h = np.array([[1, 1], [1, -1]], dtype=complex)
    mat = np.eye(1, dtype=complex)
    for _ in range(stages):
        mat = np.kron(mat, h)
    mat = np.kron(mat, np.eye(n >> stages, dtype=complex))
    return a @ mat.T


@pytest.mark.parametrize("m", [1, 3, 5, 8])
@pytest.mark.parametrize("dtype", [np.float64, np.complex128])
def test_full_transform_matches_definition(m, dtype):
    rng = np.random.default_rng(30)
    n = 1 << m
    a = rng.normal(size=n).astype(dtype)
    if dtype == np.complex128:
        a = a + 1j * rng.normal(size=n)
    expect = np.array([
        sum(((-1) ** ((y & v).bit_count() & 1)) * a[v] for v in range(n))
        for y in range(n)
    ])
    got = _kernels.fwht(a.copy())
    assert np.allclose(got, expect)


@pytest.mark.parametrize("m,stages", [(3, 0), (3, 1), (3, 2), (4, 2), (6, 3)])
def test_partial_stages(m, stages):
    rng = np.random.default_rng(31)
    n = 1 << m
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    got = _kernels.fwht(a.copy(), stages=stages)
    assert np.allclose(got, naive_fwht(a, stages))


def test_batched_rows_match_loop(m=5):
    rng = np.random.default_rng(32)
    n = 1 << m
    batch = rng.normal(size=(7, n)) + 1j * rng.normal(size=(7, n))
    got = _kernels.fwht(batch.copy(), stages=m)
    for i in range(7):
        assert np.allclose(got[i], _kernels.fwht(batch[i].copy()))


def test_backends_agree():
    rng = np.random.default_rng(33)
    for m in (1, 4, 7, 10):
        n = 1 << m
        for stages in (1, m // 2, m):
            a = rng.normal(size=n) + 1j * rng.normal(size=n)
            via_numpy = _kernels.fwht_numpy(a.copy(), stages)
            via_dispatch = _kernels.fwht(a.copy(), stages=stages)
            assert np.allclose(via_numpy, via_dispatch)
        b = rng.normal(size=n)
        assert np.allclose(_kernels.fwht_numpy(b.copy(), m),
                           _kernels.fwht(b.copy()))


def test_involution_up_to_scale():
    rng = np.random.default_rng(34)
    n = 256
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    twice = _kernels.fwht(_kernels.fwht(a.copy()))
    assert np.allclose(twice, n * a)


def test_in_place_semantics():
    a = np.ones(8, dtype=np.complex128)
    out = _kernels.fwht(a)
    assert out is a
    assert a[0] == 8

def test_pure_python_fallback_selected_at_import():
    code = (
        "import bssc, numpy as np\n"
        "from bssc import codebook as cb, decoder\n"
        "assert bssc.kernel_backend() == 'numpy', bssc.kernel_backend()\n"
        "rng = np.random.default_rng(1)\n"
        "cid = cb.random_id(4, rng)\n"
        "res = decoder.decode_single(cb.bssc_vector(cid).to_complex())\n"
        "assert res.id == cid and res.residual < 1e-9\n"
    )
    subprocess.run([sys.executable, "-c", code],
                   env=dict(os.environ, BSSC_NO_EXT="1"), check=True)


def test_rejects_bad_lengths_and_dtypes():
    with pytest.raises(ValueError):
        _kernels.fwht(np.zeros(6, dtype=np.complex128))
    with pytest.raises(ValueError):
        _kernels.fwht(np.zeros(8, dtype=np.complex128), stages=5)
    with pytest.raises(TypeError):
        _kernels.fwht(np.zeros(8, dtype=np.complex64))
