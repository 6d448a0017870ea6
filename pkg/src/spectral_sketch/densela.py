"""Small dense kernels: pivoted thin QR, Jacobi eigensolver, Lanczos baseline, Haar matrices."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import kernels

log = logging.getLogger(__name__)


class EmptyRangeError(ValueError):
    """Raised when a block has numerically zero column space."""


@dataclass
class ThinQR:
    """``Q @ R == Y[:, perm]`` with ``Q`` of orthonormal columns and ``R`` upper trapezoidal."""

    Q: np.ndarray
    R: np.ndarray
    perm: np.ndarray
    rank: int
    drop_tolerance: float

    def reconstruct(self):
        """The input block in its original column order (dropped directions omitted)."""
        out = np.empty((self.Q.shape[0], self.R.shape[1]))
        out[:, self.perm] = self.Q @ self.R
        return out


@dataclass
class SmallEig:
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


@dataclass
class LanczosResult:
    lambda1: float
    vector: np.ndarray
    iterations: int
    residual: float
    converged: bool
    restarts: int = 0


def householder_qr(Y, drop_tolerance=None):
    """Rank-revealing thin QR of an ``n x d`` block by Householder reflections with column pivoting.

    Pivoted columns whose remaining norm is at or below ``drop_tolerance``
    (default ``1e-12 * ||Y||_F``) are dropped, so ``Q`` spans the numerical
    range of ``Y``. Diagonal of ``R`` is made nonnegative.
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim != 2 or Y.shape[1] < 1:
        raise ValueError(f"expected a 2-d block with at least one column, got shape {Y.shape}")
    if not np.all(np.isfinite(Y)):
        raise ValueError("QR input has non-finite entries")
    fro = float(np.linalg.norm(Y))
    tol = 1e-12 * fro if drop_tolerance is None else float(drop_tolerance)
    if tol < 0:
        raise ValueError("drop_tolerance must be nonnegative")
    if fro == 0.0:
        raise EmptyRangeError("block is identically zero; its range is empty")
    Q, R, perm, rank = kernels.householder_qr_pivoted(np.ascontiguousarray(Y), tol)
    if rank == 0:
        raise EmptyRangeError("every column fell below the drop tolerance")
    return ThinQR(Q=Q, R=R, perm=perm, rank=int(rank), drop_tolerance=tol)


def jacobi_eigh(B, max_sweeps=30):
    """All eigenpairs of a small symmetric matrix by cyclic Jacobi rotations.

    The input is symmetrised first. Values come back in descending order.
    """
    B = np.asarray(B, dtype=np.float64)
    if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] < 1:
        raise ValueError(f"expected a nonempty square matrix, got shape {B.shape}")
    if not np.all(np.isfinite(B)):
        raise ValueError("eigensolver input has non-finite entries")
    B = 0.5 * (B + B.T)
    fro = float(np.linalg.norm(B))
    if fro == 0.0:
        r = B.shape[0]
        return SmallEig(np.zeros(r), np.eye(r), 0)
    vals, vecs, sweeps = kernels.jacobi_sweeps(np.ascontiguousarray(B), 1e-12 * fro, max_sweeps)
    order = np.argsort(-vals, kind="stable")
    return SmallEig(vals[order], np.ascontiguousarray(vecs[:, order]), int(sweeps))


def _seeded_unit(n, rng):
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def lanczos_top(op, max_iter=None, tol=1e-10, seed=0):
    """Algebraically largest eigenpair by Lanczos with full reorthogonalisation.

    Stops when the recomputed residual ``||A v - lambda v||`` is at most
    ``tol * |lambda|``. On breakdown (an invariant subspace was found before
    convergence) the iteration continues from a fresh seeded vector orthogonal
    to the current basis. ``converged`` is False if ``max_iter`` ran out; the
    best Ritz pair is returned regardless.
    """
    n = op.n
    if max_iter is None:
        max_iter = min(5 * n, 2000)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    max_basis = min(max_iter, n)
    rng = np.random.default_rng(seed)

    V = np.zeros((n, max_basis))
    alpha = np.zeros(max_basis)
    beta = np.zeros(max_basis)
    V[:, 0] = _seeded_unit(n, rng)
    restarts = 0
    theta, s = 0.0, np.ones(1)
    best = None
    k = 0
    for j in range(max_basis):
        w = op.matvec(V[:, j])
        alpha[j] = V[:, j] @ w
        basis = V[:, : j + 1]
        for _ in range(2):
            w = w - basis @ (basis.T @ w)
        b = float(np.linalg.norm(w))
        k = j + 1
        if k == 1:
            theta, s = alpha[0], np.ones(1)
        else:
            vals, vecs = eigh_tridiagonal(alpha[:k], beta[: k - 1], select="i", select_range=(k - 1, k - 1))
            theta, s = float(vals[0]), vecs[:, 0]
        est = b * abs(s[-1])
        scale = max(abs(theta), np.finfo(float).tiny)
        if est <= tol * scale or k == n:
            v = basis @ s
            v /= np.linalg.norm(v)
            res = float(np.linalg.norm(op.matvec(v) - theta * v))
            best = (theta, v, res)
            if res <= tol * scale or k == n:
                return LanczosResult(theta, v, k, res, res <= tol * scale or k == n, restarts)
        if k == max_basis:
            break
        if b <= 1e-14 * max(1.0, abs(theta)):
            restarts += 1
            log.debug("lanczos breakdown at step %d; restarting", k)
            fresh = _seeded_unit(n, rng)
            for _ in range(2):
                fresh = fresh - basis @ (basis.T @ fresh)
            nf = np.linalg.norm(fresh)
            if nf == 0.0:
                break
            V[:, j + 1] = fresh / nf
            beta[j] = 0.0
        else:
            V[:, j + 1] = w / b
            beta[j] = b

    v = V[:, :k] @ s
    v /= np.linalg.norm(v)
    res = float(np.linalg.norm(op.matvec(v) - theta * v))
    if best is None or res < best[2]:
        best = (theta, v, res)
    theta, v, res = best
    log.warning("lanczos did not converge in %d steps (residual %.3e)", k, res)
    return LanczosResult(theta, v, k, res, res <= tol * max(abs(theta), np.finfo(float).tiny), restarts)


def random_orthogonal(n, seed):
    """Haar-distributed orthogonal ``n x n`` matrix (QR of a Gaussian matrix, ``R[i, i] > 0``)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    G = np.random.default_rng(seed).standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    return Q * np.sign(np.diag(R))
