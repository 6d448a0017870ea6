"""Timings of the numba kernels against their numpy twins.

Both flavours are importable regardless of ``SPECTRAL_SKETCH_NUMBA``; the
flag only picks which one the library calls. Each kernel is called once
before timing so JIT compilation is excluded.
"""

import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._accel import HAS_NUMBA
from .linop import SparseSymmetricOperator


@dataclass
class BenchRow:
    kernel: str
    size: str
    numpy_ms: float
    numba_ms: float

    @property
    def speedup(self):
        return self.numpy_ms / self.numba_ms if self.numba_ms > 0 else float("nan")


def _best_ms(fn, args, repeat):
    fn(*args)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best * 1000.0


def _random_graph(n, avg_deg, rng):
    m = n * avg_deg // 2
    u = rng.integers(0, n, m)
    v = rng.integers(0, n, m)
    keep = u != v
    w = rng.choice([-1.0, 1.0], keep.sum())
    return SparseSymmetricOperator.from_triplets(n, u[keep], v[keep], w)


def cases(size=2000, seed=0):
    """(kernel name, size label, numpy fn, numba fn, args) tuples."""
    rng = np.random.default_rng(seed)
    op = _random_graph(size * 10, 20, rng)
    X = rng.standard_normal((op.n, 10))
    Y = rng.standard_normal((size, 25))
    B = rng.standard_normal((40, 40))
    B = (B + B.T) / 2
    R = rng.integers(-1, 2, (200, op.n)).astype(np.int8)
    csr = (op.indptr, op.indices, op.data)
    return [
        ("csr_matmat", f"n={op.n} nnz={op.data.size} d=10", kernels.csr_matmat_np, kernels.csr_matmat_nb, csr + (X,)),
        ("householder_qr", f"{size}x25", kernels.householder_qr_np, kernels.householder_qr_nb, (Y, 1e-12)),
        ("jacobi", "40x40", kernels.jacobi_np, kernels.jacobi_nb, (B, 1e-12, 30)),
        ("polarity_batch", f"200 x n={op.n}", kernels.polarity_batch_np, kernels.polarity_batch_nb, csr + (R,)),
    ]


def run_all(size=2000, repeat=5, seed=0, echo=True):
    rows = []
    for name, label, f_np, f_nb, args in cases(size, seed):
        t_np = _best_ms(f_np, args, repeat)
        t_nb = _best_ms(f_nb, args, repeat) if HAS_NUMBA else float("nan")
        rows.append(BenchRow(name, label, t_np, t_nb))
    if echo:
        print(f"{'kernel':<16} {'size':<28} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
        for r in rows:
            print(f"{r.kernel:<16} {r.size:<28} {r.numpy_ms:>10.3f} {r.numba_ms:>10.3f} {r.speedup:>8.1f}")
    return rows
