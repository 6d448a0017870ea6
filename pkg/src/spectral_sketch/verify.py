"""Monte-Carlo and deterministic campaigns checking the projection-length and ratio bounds.

Window constants (0.3/3 for tightness, 0.1 for the power-law floor, 0.2 for
the Bernoulli all-ones projection) are calibrations, not theoretical
constants: the bounds being checked only hold up to unspecified factors.
"""

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .metrics import SpectrumSpec, cos2_theta
from .rsvd import rsvd
from .sketch import DEFAULT_P, bernoulli_sketch, derive_seed, gaussian_sketch
from .synth import realize, spectrum

MIN_TRIALS = 30


@dataclass
class TrialSummary:
    name: str
    trials: int
    mean: float
    median: float
    q05: float
    q95: float
    target: Optional[float]
    verdict: bool
    params: dict = field(default_factory=dict)
    samples: Optional[list] = None

    def to_json(self, include_samples=False):
        out = asdict(self)
        if not include_samples:
            out.pop("samples")
        return json.dumps(out, indent=2, sort_keys=True)


def summarize(name, samples, target, verdict, params, keep_samples=False):
    x = np.sort(np.asarray(samples, dtype=np.float64))
    return TrialSummary(
        name=name,
        trials=int(x.size),
        mean=float(x.mean()),
        median=float(np.median(x)),
        q05=float(np.quantile(x, 0.05)),
        q95=float(np.quantile(x, 0.95)),
        target=None if target is None else float(target),
        verdict=bool(verdict),
        params=params,
        samples=x.tolist() if keep_samples else None,
    )


def _test_vector(n, v_spec, rng):
    if v_spec == "e1":
        v = np.zeros(n)
        v[0] = 1.0
    elif v_spec == "uniform_unit":
        v = rng.standard_normal(n)
    elif v_spec == "ones_normalized":
        v = np.ones(n)
    elif v_spec == "orthogonal_to_ones":
        v = rng.standard_normal(n)
        v -= v.mean()
    else:
        raise ValueError(f"unknown test vector {v_spec!r}")
    return v / np.linalg.norm(v)


def empirical_cos2(n, d, dist="gaussian", v_spec="e1", trials=500, seed=0, p=DEFAULT_P, rel_tol=0.1,
                   floor=0.2, keep_samples=False):
    """Distribution of ``cos^2`` of the angle between a fixed unit vector and a random sketch range.

    Verdicts: Gaussian, mean within ``rel_tol`` of ``d/n``. Bernoulli with the
    all-ones direction, 5th percentile at least ``floor``. Bernoulli with any
    other direction, mean at most ``5 d / n``.
    """
    if d > n:
        raise ValueError("need n >= d")
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials")
    v = _test_vector(n, v_spec, np.random.default_rng(derive_seed(seed, 0xC0)))
    vals = []
    for t in range(trials):
        s = derive_seed(seed, t)
        S = gaussian_sketch(n, d, s) if dist == "gaussian" else bernoulli_sketch(n, d, p, s)
        vals.append(cos2_theta(v, S))
    vals = np.asarray(vals)
    target = d / n
    if dist == "gaussian":
        verdict = abs(vals.mean() - target) <= rel_tol * target
    elif dist == "bernoulli":
        if v_spec == "ones_normalized":
            target = floor
            verdict = np.quantile(vals, 0.05) >= floor
        else:
            target = 5 * d / n
            verdict = vals.mean() <= target
    else:
        raise ValueError(f"unknown distribution {dist!r}")
    params = dict(n=n, d=d, dist=dist, v_spec=v_spec, trials=trials, seed=seed, p=p)
    return summarize("empirical_cos2", vals, target, verdict, params, keep_samples)


def check_psd_pathwise(spec, q, d, trials=200, seed=0, slack=1e-9, keep_samples=False):
    """``R(u_hat)^(2q+1) >= cos^2(u_1, S)`` on every trial (canonical basis, Gaussian sketches).

    The recorded statistic is the margin ``R^(2q+1) - cos^2``.
    """
    spec = spec if isinstance(spec, SpectrumSpec) else SpectrumSpec(spec)
    if not spec.is_psd or not spec.lambda1 > 0:
        raise ValueError("pathwise bound needs a PSD spectrum with lambda1 > 0")
    real = realize(spec, "canonical")
    margins = []
    for t in range(trials):
        S = gaussian_sketch(spec.n, d, derive_seed(seed, t))
        res = rsvd(real.op, S, q, lambda1=real.lambda1)
        margins.append(res.ratio ** (2 * q + 1) - cos2_theta(real.u1, S))
    margins = np.asarray(margins)
    params = dict(n=spec.n, q=q, d=d, trials=trials, seed=seed, spectrum=spec.label)
    return summarize("psd_pathwise", margins, -slack, bool(np.all(margins >= -slack)), params, keep_samples)


def check_tightness(n, d, q, trials=100, seed=0, lo=0.3, hi=3.0, keep_samples=False):
    """Median ratio on the worst-case spectrum lies within ``[lo, hi] * (d/n)^(1/(2q+1))``."""
    if n < 4 * d and d != n:
        raise ValueError("tightness campaign needs n >= 4d")
    spec = spectrum("worst_case", n=n, q=q, d=d)
    real = realize(spec, "canonical")
    vals = np.array(
        [rsvd(real.op, gaussian_sketch(n, d, derive_seed(seed, t)), q, lambda1=1.0).ratio for t in range(trials)]
    )
    t = (d / n) ** (1.0 / (2 * q + 1))
    med = float(np.median(vals))
    params = dict(n=n, d=d, q=q, trials=trials, seed=seed, lo=lo, hi=hi)
    return summarize("tightness", vals, t, lo * t <= med <= hi * t, params, keep_samples)


def check_powerlaw_theorem(spec, i0, q, d, trials=100, seed=0, factor=0.1, basis="canonical",
                           median_floor=None, keep_samples=False):
    """5th percentile of the ratio is at least ``factor * (d/(d+i0))^(1/(2q+1))``.

    With ``median_floor`` set, the median must also reach it.
    """
    spec = spec if isinstance(spec, SpectrumSpec) else SpectrumSpec(spec)
    real = realize(spec, basis, seed=derive_seed(seed, 0xBA5E) if basis == "haar" else None)
    vals = np.array(
        [
            rsvd(real.op, gaussian_sketch(spec.n, d, derive_seed(seed, t)), q, lambda1=real.lambda1).ratio
            for t in range(trials)
        ]
    )
    bound = factor * (d / (d + i0)) ** (1.0 / (2 * q + 1))
    verdict = np.quantile(vals, 0.05) >= bound
    if median_floor is not None:
        verdict = verdict and np.median(vals) >= median_floor
    params = dict(n=spec.n, i0=i0, q=q, d=d, trials=trials, seed=seed, factor=factor,
                  median_floor=median_floor, spectrum=spec.label)
    return summarize("powerlaw_theorem", vals, bound, verdict, params, keep_samples)


def check_rounding_bound(g, u_hat, lambda1, trials=10_000, seed=0, keep_samples=False):
    """Mean polarity of RandomEigenSign roundings vs ``u^T A u / (2 + sqrt(n - 2))`` minus 3 standard errors."""
    from .apps import polarity_batch, random_eigen_sign_batch
    from .graph import signed_adjacency

    op = signed_adjacency(g)
    u = np.asarray(u_hat, dtype=np.float64)
    u = u / np.linalg.norm(u)
    rq = float(u @ op.matvec(u))
    scores = polarity_batch(op, random_eigen_sign_batch(u, trials, seed))
    se = float(scores.std(ddof=1) / np.sqrt(trials))
    bound = rq / (2.0 + np.sqrt(g.n - 2))
    params = dict(n=g.n, trials=trials, seed=seed, ratio=rq / lambda1, lambda1=lambda1, stderr=se)
    return summarize("rounding_bound", scores, bound, scores.mean() >= bound - 3 * se, params, keep_samples)
