"""Randomized SVD and RandSum for the top eigenvector of a symmetric operator."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .densela import EmptyRangeError, householder_qr, jacobi_eigh
from .sketch import DEFAULT_P, Sketch, randsum_sketch


@dataclass
class RsvdConfig:
    q: int = 1
    d: int = 10
    p: Optional[float] = None
    seed: int = 0

    def validate(self, n):
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if not 1 <= self.d <= n:
            raise ValueError(f"d must lie in [1, n={n}], got {self.d}")
        if self.p is not None and not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        return self


@dataclass
class ApproxEigResult:
    u_hat: np.ndarray
    rayleigh: float
    ratio: Optional[float]
    passes: int
    effective_rank: int
    q: int
    d: int
    method: str = "rsvd"


def _fix_sign(u):
    i = int(np.argmax(np.abs(u)))
    return -u if u[i] < 0 else u


def ratio_of(result, lambda1):
    """``rayleigh / lambda1``; ``lambda1`` must be positive."""
    if not lambda1 > 0:
        raise ValueError(f"ratio needs lambda1 > 0, got {lambda1}")
    rayleigh = result.rayleigh if isinstance(result, ApproxEigResult) else float(result)
    return rayleigh / lambda1


def rsvd(op, sketch, q, lambda1=None):
    """Top-eigenvector estimate from the range of ``A^q S``.

    ``passes`` counts sweeps the algorithm needs: ``q`` for a single column
    (the power iterate is returned directly) and ``q + 1`` otherwise. For
    ``d == 1`` one extra product is spent to evaluate the Rayleigh quotient;
    it is visible in ``op.stats`` but not in ``passes``.
    """
    S = sketch.data if isinstance(sketch, Sketch) else np.asarray(sketch, dtype=np.float64)
    if S.ndim == 1:
        S = S[:, None]
    if S.shape[0] != op.n:
        raise ValueError(f"sketch has {S.shape[0]} rows but operator has n={op.n}")
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    d = S.shape[1]

    Y = np.array(S, dtype=np.float64)
    for _ in range(q):
        Y = op.matmat(Y)
        scale = np.linalg.norm(Y)
        if scale == 0.0 or not np.isfinite(scale):
            raise EmptyRangeError("A^q S vanished: the operator annihilates the sketch")
        # rescaling keeps range(Y), hence u_hat, unchanged
        Y /= scale

    if d == 1:
        u = _fix_sign(Y[:, 0] / np.linalg.norm(Y[:, 0]))
        rayleigh = float(u @ op.matvec(u))
        passes, rank = q, 1
    else:
        Q = householder_qr(Y).Q
        AQ = op.matmat(Q)
        eig = jacobi_eigh(Q.T @ AQ)
        a = eig.vectors[:, 0]
        u = Q @ a
        nrm = np.linalg.norm(u)
        u /= nrm
        Au = (AQ @ a) / nrm
        if u[int(np.argmax(np.abs(u)))] < 0:
            u, Au = -u, -Au
        rayleigh = float(u @ Au)
        passes, rank = q + 1, Q.shape[1]

    ratio = None if lambda1 is None else ratio_of(rayleigh, lambda1)
    return ApproxEigResult(u, rayleigh, ratio, passes, rank, int(q), int(d))


def randsum(op, q, d, p=DEFAULT_P, seed=0, lambda1=None):
    """RSVD on a half-Gaussian, half-Bernoulli(p) sketch."""
    if d < 2:
        raise ValueError(f"randsum needs d >= 2, got d={d}")
    res = rsvd(op, randsum_sketch(op.n, d, p, seed), q, lambda1=lambda1)
    res.method = "randsum"
    return res
