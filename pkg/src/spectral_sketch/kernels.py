"""Hot inner loops, each in two flavours.

``*_nb`` functions are plain loops compiled with numba; ``*_np`` functions are
vectorised numpy equivalents. The public names at the bottom of the module
point at one or the other depending on :data:`spectral_sketch._accel.USE_NUMBA`.
Both flavours follow the same arithmetic so results agree to roundoff (CSR
products agree bit for bit: both sum each row in ascending index order).
"""

import numpy as np

from ._accel import USE_NUMBA, njit

__all__ = [
    "csr_matmat",
    "householder_qr_pivoted",
    "jacobi_sweeps",
    "polarity_batch",
    "BACKEND",
]


# --------------------------------------------------------------------------
# CSR x dense block
# --------------------------------------------------------------------------


@njit
def csr_matmat_nb(indptr, indices, data, X):
    n = indptr.shape[0] - 1
    d = X.shape[1]
    out = np.zeros((n, d))
    for i in range(n):
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            w = data[k]
            for c in range(d):
                out[i, c] += w * X[j, c]
    return out


def csr_matmat_np(indptr, indices, data, X):
    n = indptr.shape[0] - 1
    rows = np.repeat(np.arange(n), np.diff(indptr))
    prod = data[:, None] * X[indices]
    out = np.empty((n, X.shape[1]))
    for c in range(X.shape[1]):
        # bincount accumulates in input order, i.e. row-ascending per row
        out[:, c] = np.bincount(rows, weights=prod[:, c], minlength=n)
    return out


# --------------------------------------------------------------------------
# Householder QR with column pivoting
# --------------------------------------------------------------------------


@njit
def householder_qr_nb(Y, tol):
    m, n = Y.shape
    A = Y.copy()
    perm = np.arange(n)
    kmax = min(m, n)
    V = np.zeros((m, kmax))
    vv = np.zeros(kmax)
    rank = 0
    for k in range(kmax):
        best = -1.0
        jbest = k
        for j in range(k, n):
            s = 0.0
            for i in range(k, m):
                s += A[i, j] * A[i, j]
            if s > best:
                best = s
                jbest = j
        if np.sqrt(best) <= tol:
            break
        if jbest != k:
            for i in range(m):
                tmp = A[i, k]
                A[i, k] = A[i, jbest]
                A[i, jbest] = tmp
            tmp_p = perm[k]
            perm[k] = perm[jbest]
            perm[jbest] = tmp_p
        normx = np.sqrt(best)
        x0 = A[k, k]
        alpha = -normx if x0 >= 0.0 else normx
        s2 = 0.0
        for i in range(k, m):
            V[i, k] = A[i, k]
        V[k, k] -= alpha
        for i in range(k, m):
            s2 += V[i, k] * V[i, k]
        vv[k] = s2
        for j in range(k, n):
            dot = 0.0
            for i in range(k, m):
                dot += V[i, k] * A[i, j]
            f = 2.0 * dot / s2
            for i in range(k, m):
                A[i, j] -= f * V[i, k]
        rank = k + 1
    Q = np.zeros((m, rank))
    for j in range(rank):
        Q[j, j] = 1.0
    for k in range(rank - 1, -1, -1):
        for j in range(rank):
            dot = 0.0
            for i in range(k, m):
                dot += V[i, k] * Q[i, j]
            f = 2.0 * dot / vv[k]
            for i in range(k, m):
                Q[i, j] -= f * V[i, k]
    R = np.zeros((rank, n))
    for i in range(rank):
        for j in range(i, n):
            R[i, j] = A[i, j]
    for i in range(rank):
        if R[i, i] < 0.0:
            for j in range(n):
                R[i, j] = -R[i, j]
            for r in range(m):
                Q[r, i] = -Q[r, i]
    return Q, R, perm, rank


def householder_qr_np(Y, tol):
    m, n = Y.shape
    A = np.array(Y, dtype=np.float64, copy=True)
    perm = np.arange(n)
    kmax = min(m, n)
    vs = []
    rank = 0
    for k in range(kmax):
        norms2 = np.einsum("ij,ij->j", A[k:, k:], A[k:, k:])
        j = int(np.argmax(norms2)) + k
        normx = np.sqrt(norms2[j - k])
        if normx <= tol:
            break
        if j != k:
            A[:, [k, j]] = A[:, [j, k]]
            perm[[k, j]] = perm[[j, k]]
        v = A[k:, k].copy()
        alpha = -normx if v[0] >= 0.0 else normx
        v[0] -= alpha
        s2 = v @ v
        A[k:, k:] -= np.outer(v, (2.0 / s2) * (v @ A[k:, k:]))
        vs.append((v, s2))
        rank = k + 1
    Q = np.eye(m, rank)
    for k in range(rank - 1, -1, -1):
        v, s2 = vs[k]
        Q[k:, :] -= np.outer(v, (2.0 / s2) * (v @ Q[k:, :]))
    R = np.triu(A[:rank, :])
    flip = np.diag(R) < 0.0
    R[flip, :] *= -1.0
    Q[:, flip] *= -1.0
    return Q, R, perm, rank


# --------------------------------------------------------------------------
# Jacobi eigenvalue sweeps
# --------------------------------------------------------------------------


@njit
def jacobi_nb(B, tol, max_sweeps):
    r = B.shape[0]
    A = B.copy()
    V = np.eye(r)
    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(r):
            for q in range(r):
                if p != q:
                    off += A[p, q] * A[p, q]
        if np.sqrt(off) <= tol:
            break
        sweeps = sweep + 1
        for p in range(r - 1):
            for q in range(p + 1, r):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(r):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(r):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - s * aqk
                    A[q, k] = s * apk + c * aqk
                A[p, q] = 0.0
                A[q, p] = 0.0
                for k in range(r):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    vals = np.empty(r)
    for i in range(r):
        vals[i] = A[i, i]
    return vals, V, sweeps


def _round_robin(r):
    """Disjoint index pairs for each round of a tournament schedule."""
    m = r + (r % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        rounds.append(
            np.array([(min(a, b), max(a, b)) for a, b in pairs if a < r and b < r], dtype=np.int64).reshape(-1, 2)
        )
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_np(B, tol, max_sweeps):
    r = B.shape[0]
    A = np.array(B, dtype=np.float64, copy=True)
    V = np.eye(r)
    rounds = _round_robin(r)
    sweeps = 0
    for sweep in range(max_sweeps):
        off = np.sqrt(np.sum((A - np.diag(np.diag(A))) ** 2))
        if off <= tol:
            break
        sweeps = sweep + 1
        for pairs in rounds:
            if len(pairs) == 0:
                continue
            p, q = pairs[:, 0], pairs[:, 1]
            apq = A[p, q]
            live = apq != 0.0
            if not live.any():
                continue
            p, q, apq = p[live], q[live], apq[live]
            with np.errstate(over="ignore", divide="ignore"):
                # a tiny apq gives tau = inf and hence t = 0
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            J = np.eye(r)
            J[p, p] = c
            J[q, q] = c
            J[p, q] = s
            J[q, p] = -s
            A = J.T @ A @ J
            A[p, q] = 0.0
            A[q, p] = 0.0
            V = V @ J
    return np.diag(A).copy(), V, sweeps


# --------------------------------------------------------------------------
# Batched polarity scores of rounded sign vectors
# --------------------------------------------------------------------------


@njit
def polarity_batch_nb(indptr, indices, data, R):
    T, n = R.shape
    out = np.empty(T)
    for t in range(T):
        num = 0.0
        den = 0.0
        for i in range(n):
            ri = R[t, i]
            if ri == 0:
                continue
            den += 1.0
            acc = 0.0
            for k in range(indptr[i], indptr[i + 1]):
                acc += data[k] * R[t, indices[k]]
            num += ri * acc
        out[t] = num / den if den > 0.0 else np.nan
    return out


def polarity_batch_np(indptr, indices, data, R):
    X = R.T.astype(np.float64)
    AX = csr_matmat_np(indptr, indices, data, X)
    num = np.einsum("ij,ij->j", X, AX)
    den = np.einsum("ij,ij->j", X, X)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.nan)


if USE_NUMBA:
    BACKEND = "numba"
    csr_matmat = csr_matmat_nb
    householder_qr_pivoted = householder_qr_nb
    jacobi_sweeps = jacobi_nb
    polarity_batch = polarity_batch_nb
else:
    BACKEND = "numpy"
    csr_matmat = csr_matmat_np
    householder_qr_pivoted = householder_qr_np
    jacobi_sweeps = jacobi_np
    polarity_batch = polarity_batch_np
