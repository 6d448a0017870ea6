"""The numba and numpy flavours of each kernel agree."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_sketch import kernels
from spectral_sketch._accel import HAS_NUMBA
from spectral_sketch.linop import SparseSymmetricOperator

pytestmark = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


def _csr(n, m, seed):
    rng = np.random.default_rng(seed)
    op = SparseSymmetricOperator.from_triplets(n, rng.integers(0, n, m), rng.integers(0, n, m),
                                               rng.choice([-1.0, 1.0, 0.5], m))
    return op.indptr, op.indices, op.data


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 50), st.integers(0, 200), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_csr_bit_identical(n, m, d, seed):
    indptr, indices, data = _csr(n, m, seed)
    X = np.random.default_rng(seed).standard_normal((n, d))
    np.testing.assert_array_equal(kernels.csr_matmat_nb(indptr, indices, data, X),
                                  kernels.csr_matmat_np(indptr, indices, data, X))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_qr_agree(n, d, seed):
    d = min(n, d)
    Y = np.random.default_rng(seed).standard_normal((n, d))
    Qa, Ra, pa, ra = kernels.householder_qr_nb(Y, 1e-12)
    Qb, Rb, pb, rb = kernels.householder_qr_np(Y, 1e-12)
    assert ra == rb
    np.testing.assert_array_equal(pa, pb)
    np.testing.assert_allclose(Qa, Qb, atol=1e-12)
    np.testing.assert_allclose(Ra, Rb, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 16), st.integers(0, 2**32 - 1))
def test_jacobi_agree(r, seed):
    G = np.random.default_rng(seed).standard_normal((r, r))
    B = G + G.T
    va, Va, _ = kernels.jacobi_nb(B, 1e-12 * np.linalg.norm(B), 30)
    vb, Vb, _ = kernels.jacobi_np(B, 1e-12 * np.linalg.norm(B), 30)
    np.testing.assert_allclose(np.sort(va), np.sort(vb), atol=1e-10)
    np.testing.assert_allclose(np.sort(va), np.linalg.eigvalsh(B), atol=1e-10)
    for vals, V in ((va, Va), (vb, Vb)):
        np.testing.assert_allclose(B @ V, V * vals, atol=1e-9 * max(1.0, np.linalg.norm(B)))


def test_polarity_agree():
    indptr, indices, data = _csr(30, 90, 1)
    R = np.random.default_rng(1).integers(-1, 2, (50, 30)).astype(np.int8)
    R[0] = 0
    a = kernels.polarity_batch_nb(indptr, indices, data, R)
    b = kernels.polarity_batch_np(indptr, indices, data, R)
    assert np.isnan(a[0]) and np.isnan(b[0])
    np.testing.assert_allclose(a[1:], b[1:], atol=1e-13)


def test_backend_name():
    assert kernels.BACKEND in ("numba", "numpy")


def test_numpy_fallback_subprocess():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SPECTRAL_SKETCH_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", "from spectral_sketch import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
