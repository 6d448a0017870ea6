"""Measurements: Rayleigh quotients, projection lengths, spectrum diagnostics, power-law fits."""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .densela import householder_qr
from .sketch import Sketch


@dataclass
class SpectrumSpec:
    """Eigenvalues with the top (largest signed) one first."""

    values: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("a spectrum needs at least one eigenvalue")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectrum has non-finite values")

    @property
    def n(self):
        return self.values.size

    @property
    def lambda1(self):
        return float(self.values[0])

    @property
    def magnitudes(self):
        return np.sort(np.abs(self.values))[::-1]

    @property
    def is_psd(self):
        return bool(np.all(self.values >= 0))


@dataclass
class PowerLawFit:
    gamma: float
    i0: int
    C: float
    ks_distance: float
    tail_size: int
    poor: bool = False


@dataclass
class AssumptionReport:
    kappa: float
    kappa_prime: Optional[float] = None
    xi: Optional[np.ndarray] = None
    q_used: int = 1
    spectrum_size: int = 0
    extra: dict = field(default_factory=dict)


def _as_spec(spec):
    return spec if isinstance(spec, SpectrumSpec) else SpectrumSpec(spec)


def rayleigh(op, v):
    v = np.asarray(v, dtype=np.float64)
    vv = float(v @ v)
    if vv == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector is undefined")
    return float(v @ op.matvec(v)) / vv


def cos2_theta(v, S):
    """Squared cosine of the angle between ``v`` and ``range(S)``."""
    v = np.asarray(v, dtype=np.float64)
    vv = float(v @ v)
    if vv == 0.0:
        raise ValueError("projection angle of the zero vector is undefined")
    S = S.data if isinstance(S, Sketch) else np.asarray(S, dtype=np.float64)
    if S.ndim == 1:
        S = S[:, None]
    Q = householder_qr(S).Q
    c = Q.T @ v
    return float(c @ c) / vv


def _tail_ratio(tail, weights, q):
    p = 2 * q + 1
    num = float(np.sum(np.sign(tail) * np.abs(tail) ** p * weights))
    den = float(np.sum(np.abs(tail) ** p * weights))
    if den == 0.0:
        return 1.0
    return num / den


def kappa(spec, q):
    """Signed over absolute ``(2q+1)``-power mass of the non-leading eigenvalues."""
    spec = _as_spec(spec)
    if spec.n < 2:
        raise ValueError("kappa needs at least two eigenvalues")
    if not spec.lambda1 > 0:
        raise ValueError("kappa needs lambda1 > 0")
    tail = spec.values[1:]
    return _tail_ratio(tail, np.ones_like(tail), q)


def kappa_prime(spec, xi, q):
    """``kappa`` with per-eigenvalue weights ``xi`` (``xi`` aligned with ``spec.values``)."""
    spec = _as_spec(spec)
    xi = np.asarray(xi, dtype=np.float64)
    if spec.n < 2:
        raise ValueError("kappa_prime needs at least two eigenvalues")
    if xi.shape != spec.values.shape:
        raise ValueError("xi must have one weight per eigenvalue")
    if np.any(xi < 0):
        raise ValueError("xi weights must be nonnegative")
    return _tail_ratio(spec.values[1:], xi[1:], q)


def xi_weights(U, p, d):
    """Expected squared projection of ``S^T u_i`` on ``1_d / sqrt(d)`` for Bernoulli(p) sketches.

    Closed form ``p (1 - p + p d <u_i, 1>^2)`` for each column ``u_i`` of ``U``.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    if d < 1:
        raise ValueError("d must be >= 1")
    U = np.asarray(U, dtype=np.float64)
    if U.ndim == 1:
        U = U[:, None]
    s2 = U.sum(axis=0) ** 2
    return p * (1.0 - p + p * d * s2)


def _alpha(spec):
    spec = _as_spec(spec)
    if not spec.lambda1 > 0:
        raise ValueError("normalised eigenvalues need lambda1 > 0")
    return spec.values / spec.lambda1


def rbar(spec, proj2, q):
    """Projected ratio with absolute powers in the numerator."""
    alpha = _alpha(spec)
    w = np.asarray(proj2, dtype=np.float64)
    if np.any(w < 0):
        raise ValueError("squared projections must be nonnegative")
    den = float(np.sum(alpha ** (2 * q) * w))
    if den == 0.0:
        raise ValueError("zero denominator")
    return float(np.sum(np.abs(alpha) ** (2 * q + 1) * w)) / den


def ra(spec, proj2, q):
    """Signed projected ratio ``sum a^(2q+1) w / sum a^(2q) w`` (the Rayleigh quotient of ``Y a`` over lambda1)."""
    alpha = _alpha(spec)
    w = np.asarray(proj2, dtype=np.float64)
    den = float(np.sum(alpha ** (2 * q) * w))
    if den == 0.0:
        raise ValueError("zero denominator")
    return float(np.sum(alpha ** (2 * q + 1) * w)) / den


def assumption_report(spec, q, xi=None):
    spec = _as_spec(spec)
    kp = None if xi is None else kappa_prime(spec, xi, q)
    return AssumptionReport(kappa(spec, q), kp, None if xi is None else np.asarray(xi), q, spec.n)


def hoelder_chain_check(alpha, weights, q):
    """Check ``sum|a|^(2q+1) w / sum|a|^(2q) w >= (sum|a|^(2q) w / sum w)^(1/(2q))``.

    ``weights`` play the role of squared coordinates. Returns ``LHS >= RHS - 1e-12``.
    """
    a = np.abs(np.asarray(alpha, dtype=np.float64))
    w = np.asarray(weights, dtype=np.float64)
    if a.shape != w.shape:
        raise ValueError("alpha and weights differ in shape")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    if not np.any(a * w != 0):
        raise ValueError("need some i with alpha_i * w_i != 0")
    if not np.any(w != 0):
        raise ValueError("need some nonzero weight")
    m2q = float(np.sum(a ** (2 * q) * w))
    lhs = float(np.sum(a ** (2 * q + 1) * w)) / m2q
    rhs = (m2q / float(np.sum(w))) ** (1.0 / (2 * q))
    return lhs >= rhs - 1e-12


# --------------------------------------------------------------------------
# power-law tail fit
# --------------------------------------------------------------------------

_BETA_MIN = 1e-2  # gamma capped at 100
_BETA_MAX = 1e4


def _trunc_exp_mean(beta, L):
    # mean of density ~ exp(-beta y) on [0, L]
    x = beta * L
    if abs(x) < 1e-8:
        return L / 2.0 - beta * L * L / 12.0
    if x > 700:
        return 1.0 / beta
    return 1.0 / beta - L / math.expm1(x)


def _fit_tail(sig):
    """MLE decay rate and KS distance for one candidate tail (values descending).

    Under ``sigma_i ~ C i^-gamma`` the tail values have density proportional
    to ``x^(-1 - 1/gamma)`` between the smallest and largest tail value; in
    ``y = ln(x / x_min)`` that is a truncated exponential with rate
    ``beta = 1/gamma``, whose MLE matches the sample mean of ``y``.
    """
    y = np.log(sig / sig[-1])
    L = float(y[0])
    if L <= 0.0:
        return 0.0, 1.0
    ybar = float(y.mean())
    f = lambda b: _trunc_exp_mean(b, L) - ybar  # noqa: E731
    if f(_BETA_MIN) <= 0.0:
        beta = _BETA_MIN
    elif f(_BETA_MAX) >= 0.0:
        beta = _BETA_MAX
    else:
        beta = brentq(f, _BETA_MIN, _BETA_MAX, xtol=1e-12, rtol=1e-12)
    ys = np.sort(y)
    m = ys.size
    cdf = -np.expm1(-beta * ys) / -math.expm1(-beta * L)
    i = np.arange(1, m + 1)
    ks = float(max(np.max(i / m - cdf), np.max(cdf - (i - 1) / m)))
    return 1.0 / beta, ks


def _candidates(n, min_tail):
    hi = n - min_tail + 1
    if hi <= 2000:
        return np.arange(1, hi + 1)
    grid = np.unique(np.round(np.logspace(0, np.log10(hi), 600)).astype(np.int64))
    return grid[(grid >= 1) & (grid <= hi)]


def fit_power_law(sigvals, min_tail=10, ks_poor=0.1, candidates=None):
    """Fit ``sigma_i / sigma_1 <= C i^-gamma`` for ``i >= i0``.

    For each candidate tail start the decay rate is the MLE described in
    :func:`_fit_tail`; the tail start minimising the Kolmogorov-Smirnov
    distance wins. ``C`` is the smallest constant making the envelope hold on
    the tail. Fits with large KS distance or negligible decay are flagged
    ``poor``.
    """
    s = np.asarray(sigvals, dtype=np.float64)
    if s.ndim != 1 or s.size < max(10, min_tail):
        raise ValueError(f"need at least {max(10, min_tail)} values")
    if np.any(s <= 0) or not np.all(np.isfinite(s)):
        raise ValueError("values must be positive and finite")
    if np.any(np.diff(s) > 0):
        raise ValueError("values must be nonincreasing")
    n = s.size
    cands = _candidates(n, min_tail) if candidates is None else np.asarray(candidates, dtype=np.int64)
    fits = [(int(i0),) + _fit_tail(s[i0 - 1 :]) for i0 in cands]
    ks_min = min(f[2] for f in fits)
    # KS differences below one empirical-CDF step 1/m are noise: take the longest such tail
    i0, gamma, ks = next(f for f in fits if f[2] <= ks_min + 1.0 / (n - f[0] + 1))
    idx = np.arange(i0, n + 1, dtype=np.float64)
    C = float(np.max(s[i0 - 1 :] / s[0] * idx**gamma))
    return PowerLawFit(gamma, i0, C, ks, n - i0 + 1, poor=bool(ks > ks_poor or gamma < 0.05))
