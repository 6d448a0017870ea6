"""Symmetric linear operators seen only through products.

Three kinds are provided: a dense matrix, a sparse symmetric matrix in CSR
form (both triangles stored) and the implicit modularity matrix
``A - d d^T / (2|E|)`` built on top of a sparse adjacency.
"""

import threading
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class OperatorStats:
    n: int
    nnz: int
    passes_consumed: int
    vectors_applied: int


class _Counter:
    def __init__(self):
        self._lock = threading.Lock()
        self.passes = 0
        self.vectors = 0

    def bump(self, vectors):
        with self._lock:
            self.passes += 1
            self.vectors += vectors


class SymmetricOperator:
    """Base class. Subclasses implement ``_apply`` on an ``n x d`` block."""

    kind = "abstract"

    def __init__(self, n):
        if n < 1:
            raise ValueError(f"operator dimension must be >= 1, got {n}")
        self.n = int(n)
        self._counter = _Counter()

    # -- accounting -------------------------------------------------------

    @property
    def nnz(self):
        raise NotImplementedError

    @property
    def stats(self):
        return OperatorStats(self.n, self.nnz, self._counter.passes, self._counter.vectors)

    def fork(self):
        """A new handle sharing storage but with a fresh pass counter."""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone._counter = _Counter()
        return clone

    # -- products ---------------------------------------------------------

    def matvec(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != self.n:
            raise ValueError(f"expected a vector of length {self.n}, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("matvec input has non-finite entries")
        out = self._apply(x[:, None])[:, 0]
        self._counter.bump(1)
        return out

    def matmat(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] != self.n or X.shape[1] < 1:
            raise ValueError(f"expected an ({self.n}, d>=1) block, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("matmat input has non-finite entries")
        out = self._apply(X)
        self._counter.bump(X.shape[1])
        return out

    def _apply(self, X):
        raise NotImplementedError

    def to_dense(self):
        """Materialise the matrix (does not count as a pass). Test/oracle use only."""
        return self._apply(np.eye(self.n))

    def abs_max(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, nnz={self.nnz})"


class DenseOperator(SymmetricOperator):
    kind = "dense"

    def __init__(self, A, check=True):
        A = np.ascontiguousarray(A, dtype=np.float64)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"dense operator needs a square matrix, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("dense operator has non-finite entries")
        if check:
            scale = max(np.abs(A).max(), 1.0)
            if np.abs(A - A.T).max() > 1e-10 * scale:
                raise ValueError("dense operator is not symmetric")
        super().__init__(A.shape[0])
        self.A = A
        self.A.setflags(write=False)

    @property
    def nnz(self):
        return self.n * self.n

    def _apply(self, X):
        # one gemv per column so a block product matches single products bit for bit
        out = np.empty((self.n, X.shape[1]))
        for j in range(X.shape[1]):
            out[:, j] = self.A @ X[:, j]
        return out

    def to_dense(self):
        return self.A.copy()

    def abs_max(self):
        return float(np.abs(self.A).max())


class SparseSymmetricOperator(SymmetricOperator):
    """CSR storage of the full symmetric pattern, columns sorted within rows."""

    kind = "sparse-symmetric"

    def __init__(self, n, indptr, indices, data):
        super().__init__(n)
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        data = np.ascontiguousarray(data, dtype=np.float64)
        if indptr.shape != (self.n + 1,) or indptr[0] != 0 or indptr[-1] != indices.shape[0]:
            raise ValueError("malformed CSR row pointer")
        if indices.shape != data.shape:
            raise ValueError("CSR indices and data differ in length")
        if indices.size and (indices.min() < 0 or indices.max() >= self.n):
            raise ValueError("CSR column index out of range")
        if not np.all(np.isfinite(data)):
            raise ValueError("CSR data has non-finite entries")
        for a in (indptr, indices, data):
            a.setflags(write=False)
        self.indptr, self.indices, self.data = indptr, indices, data

    @classmethod
    def from_triplets(cls, n, rows, cols, vals):
        """Build from (row, col, value) triplets of the *upper or lower* triangle plus diagonal.

        Off-diagonal triplets are mirrored; duplicates keep the last value.
        """
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if rows.size and (min(rows.min(), cols.min()) < 0 or max(rows.max(), cols.max()) >= n):
            raise ValueError("triplet index out of range")
        # interleave each triplet with its mirror so "last wins" is positional
        r2 = np.stack([rows, cols], axis=1).ravel()
        c2 = np.stack([cols, rows], axis=1).ravel()
        v2 = np.repeat(vals, 2)
        keys = r2 * n + c2
        uniq, first_rev = np.unique(keys[::-1], return_index=True)
        last = keys.size - 1 - first_rev
        r_out = uniq // n
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, r_out + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(n, indptr, uniq % n, v2[last])

    @property
    def nnz(self):
        return int(self.indices.shape[0])

    def _apply(self, X):
        return kernels.csr_matmat(self.indptr, self.indices, self.data, np.ascontiguousarray(X))

    def abs_max(self):
        return float(np.abs(self.data).max()) if self.data.size else 0.0


class ModularityOperator(SymmetricOperator):
    """``M = A - d d^T / (2m)`` applied implicitly; ``A`` is a 0/1 adjacency."""

    kind = "modularity"

    def __init__(self, adjacency, degrees, edge_count):
        if edge_count < 1:
            raise ValueError("modularity needs at least one edge (2|E| would be zero)")
        super().__init__(adjacency.n)
        self.adjacency = adjacency
        self.degrees = np.ascontiguousarray(degrees, dtype=np.float64)
        self.degrees.setflags(write=False)
        if self.degrees.shape != (self.n,):
            raise ValueError("degree vector length differs from adjacency dimension")
        self.edge_count = int(edge_count)

    @property
    def nnz(self):
        return self.adjacency.nnz

    def _apply(self, X):
        AX = self.adjacency._apply(X)
        dX = np.array([self.degrees @ X[:, j] for j in range(X.shape[1])])
        return AX - np.outer(self.degrees, dX / (2.0 * self.edge_count))

    def abs_max(self):
        return max(1.0, float(self.degrees.max() ** 2 / (2.0 * self.edge_count)))


def matvec(op, x):
    return op.matvec(x)


def matmat(op, X):
    return op.matmat(X)


def modularity_from_graph(g):
    """Implicit modularity operator of an unsigned :class:`~spectral_sketch.graph.Graph`."""
    from .graph import adjacency

    if g.signed:
        raise ValueError("modularity is defined for unsigned graphs only")
    if g.edge_count < 1:
        raise ValueError("modularity needs at least one edge (2|E| would be zero)")
    return ModularityOperator(adjacency(g), g.degrees, g.edge_count)
