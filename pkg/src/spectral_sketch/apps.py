"""Spectral graph applications: 2-conflicting groups and 2-community detection."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .graph import adjacency, signed_adjacency
from .linop import modularity_from_graph
from .rsvd import randsum, rsvd
from .sketch import DEFAULT_P, derive_seed, gaussian_sketch

MAX_RESAMPLES = 64


@dataclass
class GroupAssignment:
    x: np.ndarray
    score: Optional[float] = None
    objective: Optional[str] = None

    @property
    def nonzero_count(self):
        return int(np.count_nonzero(self.x))


def _signs(v):
    return np.sign(v).astype(np.int8)


def _check_rounding_input(v):
    v = np.asarray(v, dtype=np.float64)
    if not np.any(v):
        raise ValueError("cannot round the zero vector")
    if np.max(np.abs(v)) > 1.0 + 1e-12:
        raise ValueError("rounding needs ||v||_inf <= 1")
    return v


def random_eigen_sign(v, seed=0, resample=True):
    """Keep ``sign(v_i)`` with probability ``|v_i|``, else 0, independently per coordinate.

    With ``resample`` an all-zero draw is redrawn with a fresh sub-seed (up to
    64 times); after that the single coordinate of largest magnitude is used.
    Resampling conditions on a nonzero draw, so marginals become
    ``sign(v_i) |v_i| / P(nonzero)``; ``resample=False`` gives the raw draw.
    """
    v = _check_rounding_input(v)
    p = np.abs(v)
    s = _signs(v)
    for attempt in range(MAX_RESAMPLES + 1 if resample else 1):
        rng = np.random.default_rng(derive_seed(seed, attempt))
        r = np.where(rng.random(v.size) < p, s, 0).astype(np.int8)
        if r.any() or not resample:
            return GroupAssignment(r)
    r = np.zeros(v.size, dtype=np.int8)
    i = int(np.argmax(p))
    r[i] = s[i]
    return GroupAssignment(r)


def random_eigen_sign_batch(v, trials, seed=0, resample=True):
    """``trials`` independent roundings as rows of an int8 matrix (all-zero rows redrawn unless ``resample`` is off)."""
    v = _check_rounding_input(v)
    p = np.abs(v)
    s = _signs(v)
    rng = np.random.default_rng(seed)
    R = np.where(rng.random((trials, v.size)) < p, s, 0).astype(np.int8)
    if not resample:
        return R
    for _ in range(MAX_RESAMPLES):
        empty = ~R.any(axis=1)
        if not empty.any():
            break
        R[empty] = np.where(rng.random((int(empty.sum()), v.size)) < p, s, 0)
    empty = ~R.any(axis=1)
    if empty.any():
        i = int(np.argmax(p))
        R[empty, i] = s[i]
    return R


def _vector(x):
    return np.asarray(x.x if isinstance(x, GroupAssignment) else x, dtype=np.float64)


def polarity(g, x, op=None):
    """``x^T A x / x^T x`` over the signed adjacency."""
    x = _vector(x)
    xx = float(x @ x)
    if xx == 0.0:
        raise ValueError("polarity of the zero assignment is undefined")
    op = signed_adjacency(g) if op is None else op
    return float(x @ op.matvec(x)) / xx


def polarity_batch(op, R):
    """Polarity of each row of ``R`` (rows in {-1, 0, 1}^n) against a sparse signed adjacency."""
    return kernels.polarity_batch(op.indptr, op.indices, op.data, np.ascontiguousarray(R, dtype=np.int8))


def _top_vector(op, q, d, method, p, seed):
    if method == "rsvd":
        return rsvd(op, gaussian_sketch(op.n, d, seed), q)
    if method == "randsum":
        return randsum(op, q, d, p, seed)
    raise ValueError(f"unknown method {method!r}")


def detect_conflicting_groups(g, q=1, d=10, method="rsvd", p=DEFAULT_P, seed=0, rounding_trials=50):
    """Best-scoring rounding of the approximate top eigenvector of the signed adjacency.

    Candidates are ``rounding_trials`` RandomEigenSign draws plus the
    deterministic sign vector of ``u_hat``; the one with largest polarity wins.
    """
    if rounding_trials < 1:
        raise ValueError("rounding_trials must be >= 1")
    op = signed_adjacency(g)
    d = min(d, g.n)
    res = _top_vector(op, q, d, method, p, seed)
    R = random_eigen_sign_batch(res.u_hat, rounding_trials, derive_seed(seed, 0x5151))
    R = np.vstack([R, _signs(res.u_hat)[None, :]])
    scores = polarity_batch(op, R)
    k = int(np.nanargmax(scores))
    return GroupAssignment(R[k].copy(), float(scores[k]), "polarity")


def modularity_score(g, x):
    """``x^T M x / (4|E|)`` for ``x`` in {-1, +1}^n."""
    x = _vector(x)
    if x.shape != (g.n,) or not np.all(np.abs(x) == 1.0):
        raise ValueError("modularity assignment must have entries in {-1, +1}")
    m = g.edge_count
    if m < 1:
        raise ValueError("modularity needs at least one edge")
    A = adjacency(g)
    dx = float(g.degrees @ x)
    return (float(x @ A.matvec(x)) - dx * dx / (2.0 * m)) / (4.0 * m)


def detect_communities(g, q=1, d=10, method="rsvd", p=DEFAULT_P, seed=0):
    """Split by the sign of the approximate top eigenvector of the modularity matrix (zeros go to +1).

    If that split scores below the trivial one-community assignment (score 0)
    the graph is reported indivisible and ``x`` is all ones.
    """
    op = modularity_from_graph(g)
    d = min(d, g.n)
    res = _top_vector(op, q, d, method, p, seed)
    x = np.where(res.u_hat < 0, -1, 1).astype(np.int8)
    score = modularity_score(g, x)
    if score < 0.0:
        x = np.ones(g.n, dtype=np.int8)
        score = modularity_score(g, x)
    return GroupAssignment(x, score, "modularity")


def write_assignment(assignment, path, labels=None):
    """One ``node_id value`` line per node."""
    x = assignment.x if isinstance(assignment, GroupAssignment) else np.asarray(assignment)
    with open(path, "w", encoding="utf-8") as fh:
        for i, val in enumerate(x.tolist()):
            name = labels[i] if labels is not None else i
            fh.write(f"{name} {int(val)}\n")
