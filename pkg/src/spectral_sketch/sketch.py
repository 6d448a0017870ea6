"""Seeded random test matrices.

Every column is drawn from its own Philox stream keyed on ``(seed, tag,
column)``, so a column's values depend only on the seed and its position,
never on how many other columns were requested or in which order.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

_MASK64 = (1 << 64) - 1
_TAG_GAUSSIAN = 0x6A09E667F3BCC908
_TAG_BERNOULLI = 0xBB67AE8584CAA73B
# randsum sub-seeds: seed XOR these constants
_RANDSUM_GAUSSIAN_SALT = 0x9E3779B97F4A7C15
_RANDSUM_BERNOULLI_SALT = 0xBF58476D1CE4E5B9

DEFAULT_P = 0.5


@dataclass
class Sketch:
    data: np.ndarray
    kind: str
    seed: int
    p: Optional[float] = None

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def d(self):
        return self.data.shape[1]


def derive_seed(seed, *keys):
    """Deterministic 64-bit sub-seed from a parent seed and integer keys."""
    words = [int(seed) & _MASK64] + [int(k) & _MASK64 for k in keys]
    return int(np.random.SeedSequence(words).generate_state(1, np.uint64)[0])


def _uniform_column(seed, tag, col, size):
    # one 128-bit integer key; the two-word list form is not reliable for words >= 2**63
    bitgen = np.random.Philox(key=((int(seed) & _MASK64) << 64) | ((tag + col) & _MASK64))
    raw = bitgen.random_raw(size)
    # 53-bit mantissa uniforms on [0, 1)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def _box_muller(u1, u2):
    # u1 in (0, 1] keeps the log finite
    r = np.sqrt(-2.0 * np.log1p(-u1))
    return r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)


def _gaussian_block(n, d, seed):
    out = np.empty((n, d))
    half = (n + 1) // 2
    for j in range(d):
        u = _uniform_column(seed, _TAG_GAUSSIAN, j, 2 * half)
        z0, z1 = _box_muller(u[:half], u[half:])
        out[:, j] = np.concatenate([z0, z1])[:n]
    return out


def _bernoulli_block(n, d, p, seed):
    out = np.empty((n, d))
    for j in range(d):
        out[:, j] = _uniform_column(seed, _TAG_BERNOULLI, j, n) < p
    return out


def _check_shape(n, d):
    if d < 1:
        raise ValueError(f"sketch width must be >= 1, got d={d}")
    if d > n:
        raise ValueError(f"sketch width d={d} exceeds dimension n={n}")


def _check_p(p):
    if not 0.0 < p < 1.0:
        raise ValueError(f"bernoulli mean must lie in (0, 1), got p={p}")


def gaussian_sketch(n, d, seed):
    """``n x d`` matrix of i.i.d. standard normals (Box-Muller over Philox)."""
    _check_shape(n, d)
    return Sketch(_gaussian_block(n, d, seed), "gaussian", int(seed))


def bernoulli_sketch(n, d, p=DEFAULT_P, seed=0):
    """``n x d`` matrix of i.i.d. Bernoulli(p) entries in {0, 1}."""
    _check_shape(n, d)
    _check_p(p)
    return Sketch(_bernoulli_block(n, d, p, seed), "bernoulli", int(seed), float(p))


def randsum_sketch(n, d, p=DEFAULT_P, seed=0):
    """Gaussian block of ``ceil(d/2)`` columns followed by a Bernoulli(p) block of ``floor(d/2)``."""
    _check_shape(n, d)
    if d < 2:
        raise ValueError(f"randsum needs d >= 2, got d={d}")
    _check_p(p)
    seed = int(seed)
    g = _gaussian_block(n, (d + 1) // 2, (seed ^ _RANDSUM_GAUSSIAN_SALT) & _MASK64)
    b = _bernoulli_block(n, d // 2, p, (seed ^ _RANDSUM_BERNOULLI_SALT) & _MASK64)
    return Sketch(np.hstack([g, b]), "randsum", seed, float(p))


def make_sketch(kind, n, d, seed, p=DEFAULT_P):
    if kind == "gaussian":
        return gaussian_sketch(n, d, seed)
    if kind == "bernoulli":
        return bernoulli_sketch(n, d, p, seed)
    if kind == "randsum":
        return randsum_sketch(n, d, p, seed)
    raise ValueError(f"unknown sketch kind {kind!r}")
