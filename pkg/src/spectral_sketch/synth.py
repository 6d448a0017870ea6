"""Synthetic spectra and dense test matrices ``A = U diag(lambda) U^T``."""

import csv
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .densela import random_orthogonal
from .linop import DenseOperator
from .metrics import SpectrumSpec

MAX_DENSE_N = 20_000
HEAD_EXPONENT = -0.01

KINDS = ("type1", "type2", "type3", "type4", "worst_case", "custom")


@dataclass
class SpectrumKind:
    kind: str
    n: int = 2000
    i0: int = 100
    q: Optional[int] = None
    d: Optional[int] = None
    values: Optional[Sequence[float]] = None


class Realization(NamedTuple):
    op: DenseOperator
    lambda1: float
    u1: np.ndarray
    basis: Optional[np.ndarray]


def _head_tail(n, i0):
    i = np.arange(1, n + 1, dtype=np.float64)
    lam = np.empty(n)
    head = i < i0
    lam[head] = i[head] ** HEAD_EXPONENT
    return i, lam, ~head


def spectrum(kind, n=None, i0=None, q=None, d=None, values=None):
    """Eigenvalues of a named synthetic family, sorted descending (top eigenvalue first).

    Accepts either a :class:`SpectrumKind` or its fields as arguments.
    Breakpoints ``2n/3`` and ``n/2`` are floored; ranges are closed on the left.
    """
    if not isinstance(kind, SpectrumKind):
        kw = {k: v for k, v in dict(n=n, i0=i0, q=q, d=d, values=values).items() if v is not None}
        kind = SpectrumKind(kind, **kw)
    k, n, i0 = kind.kind, int(kind.n), int(kind.i0)

    if k == "custom":
        if kind.values is None:
            raise ValueError("custom spectrum needs explicit values")
        return SpectrumSpec(np.asarray(kind.values, dtype=np.float64), "custom")
    if k == "worst_case":
        if kind.q is None or kind.d is None or kind.q < 1:
            raise ValueError("worst_case spectrum needs q >= 1 and d")
        if not 1 <= kind.d <= n:
            raise ValueError("worst_case spectrum needs 1 <= d <= n")
        lam = np.full(n, (kind.d / n) ** (1.0 / (2 * kind.q + 1)))
        lam[0] = 1.0
        return SpectrumSpec(lam, f"worst_case(q={kind.q},d={kind.d})")
    if k not in KINDS:
        raise ValueError(f"unknown spectrum kind {k!r}")
    if not 1 <= i0 < n:
        raise ValueError(f"need 1 <= i0 < n, got i0={i0}, n={n}")

    i, lam, tail = _head_tail(n, i0)
    if k == "type1":
        lam[tail] = i[tail] ** -1.0
    elif k == "type2":
        lam[tail] = i[tail] ** (-1.0 / 7.0)
    elif k == "type3":
        brk = np.floor(2 * n / 3)
        if brk < i0:
            raise ValueError("type3 needs 2n/3 >= i0")
        pos = tail & (i <= brk)
        neg = i > brk
        lam[pos] = i[pos] ** (-1.0 / 3.0)
        lam[neg] = -((i[neg] - brk) ** -1.0)
    elif k == "type4":
        half = np.floor(n / 2)
        if half <= i0:
            raise ValueError("type4 needs n/2 > i0")
        pos = tail & (i <= half)
        mid = (i > half) & (i < n - i0)
        end = i >= n - i0
        lam[pos] = i[pos] ** -0.5
        lam[mid] = -0.9 * (i[mid] - half) ** -0.5
        lam[end] = -0.9 * i[end] ** HEAD_EXPONENT
    return SpectrumSpec(np.sort(lam)[::-1].copy(), k)


def realize(spec, basis="canonical", seed=None):
    """Dense ``U diag(lambda) U^T`` plus the exact top eigenpair.

    ``basis`` is ``"canonical"`` (``U = I``) or ``"haar"`` (needs ``seed``).
    """
    spec = spec if isinstance(spec, SpectrumSpec) else SpectrumSpec(spec)
    n = spec.n
    if n > MAX_DENSE_N:
        raise ValueError(f"n={n} exceeds the dense realisation limit of {MAX_DENSE_N}")
    lam = spec.values
    top = int(np.argmax(lam))
    if basis == "canonical":
        A = np.diag(lam)
        U = None
        u1 = np.zeros(n)
        u1[top] = 1.0
    elif basis == "haar":
        if seed is None:
            raise ValueError("haar basis needs a seed")
        U = random_orthogonal(n, seed)
        A = (U * lam) @ U.T
        A = 0.5 * (A + A.T)
        u1 = U[:, top].copy()
    else:
        raise ValueError(f"unknown basis {basis!r}")
    return Realization(DenseOperator(A, check=False), float(lam[top]), u1, U)


def write_spectrum_csv(spec, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "value"])
        for i, v in enumerate(spec.values, start=1):
            w.writerow([i, repr(float(v))])
