"""Edge-list graphs (signed or unsigned) and their adjacency operators.

File format: one edge per line, ``u v [w]`` separated by whitespace; lines
starting with ``#`` or ``%`` are comments; ``.gz`` files are decompressed
transparently. Node labels are mapped to ``0..n-1`` in order of first
appearance. Edges are undirected, self-loops are dropped and repeated pairs
keep the last weight.
"""

import gzip
from dataclasses import dataclass, field

import numpy as np

from .linop import SparseSymmetricOperator


class EdgeListError(ValueError):
    pass


@dataclass
class Graph:
    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    signed: bool = False
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=np.int64)
        self.v = np.asarray(self.v, dtype=np.int64)
        self.w = np.asarray(self.w, dtype=np.float64)
        if not (self.u.shape == self.v.shape == self.w.shape):
            raise ValueError("edge arrays differ in length")
        if self.u.size and (min(self.u.min(), self.v.min()) < 0 or max(self.u.max(), self.v.max()) >= self.n):
            raise ValueError("edge endpoint out of range")
        if not self.labels:
            self.labels = [str(i) for i in range(self.n)]

    @property
    def edge_count(self):
        return int(self.u.size)

    @property
    def degrees(self):
        deg = np.zeros(self.n)
        np.add.at(deg, self.u, 1.0)
        np.add.at(deg, self.v, 1.0)
        return deg

    @property
    def edges(self):
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.signed == other.signed
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.w, other.w)
        )


def from_edges(edges, signed=False, n=None):
    """Build a graph from ``(u, v[, w])`` tuples of integer node ids already in ``0..n-1``."""
    table = {}
    top = -1
    for e in edges:
        a, b = int(e[0]), int(e[1])
        wt = float(e[2]) if (signed and len(e) > 2) else 1.0
        top = max(top, a, b)
        if a == b:
            continue
        table[(min(a, b), max(a, b))] = wt
    n = top + 1 if n is None else int(n)
    keys = list(table)
    u = np.array([k[0] for k in keys], dtype=np.int64)
    v = np.array([k[1] for k in keys], dtype=np.int64)
    w = np.array([table[k] for k in keys], dtype=np.float64)
    return Graph(n, u, v, w, signed)


def _open(path):
    path = str(path)
    if path.endswith(".gz"):
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def load_edge_list(path, signed=False):
    ids = {}
    table = {}
    with _open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s[0] in "#%":
                continue
            parts = s.split()
            if len(parts) < 2 or len(parts) > 3:
                raise EdgeListError(f"{path}:{lineno}: expected 'u v [w]', got {s!r}")
            a, b = parts[0], parts[1]
            wt = 1.0
            if signed and len(parts) == 3:
                try:
                    wt = float(parts[2])
                except ValueError:
                    raise EdgeListError(f"{path}:{lineno}: bad weight {parts[2]!r}") from None
                if wt not in (1.0, -1.0):
                    raise EdgeListError(f"{path}:{lineno}: signed weights must be +1 or -1, got {parts[2]!r}")
            if a == b:
                continue
            ia = ids.setdefault(a, len(ids))
            ib = ids.setdefault(b, len(ids))
            table[(min(ia, ib), max(ia, ib))] = wt
    if not table:
        raise EdgeListError(f"{path}: no edges")
    keys = list(table)
    return Graph(
        len(ids),
        np.array([k[0] for k in keys]),
        np.array([k[1] for k in keys]),
        np.array([table[k] for k in keys]),
        signed,
        list(ids),
    )


def write_edge_list(g, path):
    """Write ``g`` using its dense ids; reloading gives an equal graph."""
    with open(path, "w", encoding="utf-8") as fh:
        for a, b, wt in g.edges:
            if g.signed:
                fh.write(f"{a} {b} {int(wt)}\n")
            else:
                fh.write(f"{a} {b}\n")


def signed_adjacency(g):
    if g.edge_count == 0:
        raise ValueError("graph has no edges")
    return SparseSymmetricOperator.from_triplets(g.n, g.u, g.v, g.w)


def adjacency(g):
    """0/1 adjacency (weights ignored)."""
    if g.edge_count == 0:
        raise ValueError("graph has no edges")
    return SparseSymmetricOperator.from_triplets(g.n, g.u, g.v, np.ones(g.edge_count))
