"""Command-line harness.

Subcommands: run, synth, kappa, fit, cg, communities, verify, lambda1, bench.

``run`` CSV schema (header always present, UTF-8, comma separated)::

    axis_value,rep,R,rayleigh,passes,matvec_count[,wall_ms][,polarity|modularity]

One data row per (axis value, repetition), sorted by axis value then rep,
followed by one summary row per axis value with ``rep`` set to ``mean`` and
every numeric column averaged. ``R`` is rayleigh / lambda_1, ``passes`` the
algorithmic pass count, ``matvec_count`` the number of single-vector products
the operator actually performed. ``wall_ms`` is omitted with --no-timing.
Signed graphs add ``polarity`` (best of 50 roundings); ``--operator
modularity`` adds ``modularity``.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import apps, verify
from .densela import lanczos_top
from .graph import adjacency, load_edge_list, signed_adjacency
from .linop import modularity_from_graph
from .metrics import SpectrumSpec, assumption_report, fit_power_law, xi_weights
from .rsvd import randsum, rsvd
from .sketch import DEFAULT_P, derive_seed, gaussian_sketch
from .synth import realize, spectrum, write_spectrum_csv

log = logging.getLogger("spectral_sketch")

SWEEPS = {"d": ([1, 5, 10, 25, 50], 1), "q": ([1, 2, 4, 8, 16], 10)}
MATRIX_KINDS = ("type1", "type2", "type3", "type4", "worst_case")


@dataclass
class ExperimentConfig:
    matrix: Optional[str] = None
    graph: Optional[str] = None
    signed: bool = False
    operator: str = "adjacency"
    method: str = "rsvd"
    sweep: str = "d"
    values: List[int] = field(default_factory=list)
    fixed: Optional[int] = None
    reps: int = 100
    p: float = DEFAULT_P
    seed: int = 0
    n: int = 2000
    i0: int = 100
    basis: str = "haar"
    wc_q: int = 1
    wc_d: int = 5
    timing: bool = True

    def validate(self):
        if (self.matrix is None) == (self.graph is None):
            raise ValueError("give exactly one of --matrix or --graph")
        if self.sweep not in SWEEPS:
            raise ValueError(f"--sweep must be one of {sorted(SWEEPS)}")
        if self.reps < 1:
            raise ValueError("--reps must be >= 1")
        if self.method not in ("rsvd", "randsum"):
            raise ValueError("--method must be rsvd or randsum")
        if not self.values:
            self.values = list(SWEEPS[self.sweep][0])
        if self.fixed is None:
            self.fixed = SWEEPS[self.sweep][1]
        return self


def _threads():
    env = os.environ.get("SPECTRAL_SKETCH_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(4, os.cpu_count() or 1))


def _build_operator(cfg):
    """Return (operator, lambda1, graph-or-None)."""
    if cfg.matrix is not None:
        if cfg.matrix not in MATRIX_KINDS:
            raise ValueError(f"unknown --matrix {cfg.matrix!r}")
        kw = dict(n=cfg.n, i0=cfg.i0)
        if cfg.matrix == "worst_case":
            kw.update(q=cfg.wc_q, d=cfg.wc_d)
        spec = spectrum(cfg.matrix, **kw)
        basis_seed = derive_seed(cfg.seed, 0xBA5E) if cfg.basis == "haar" else None
        real = realize(spec, cfg.basis, seed=basis_seed)
        return real.op, real.lambda1, None
    g = load_edge_list(cfg.graph, signed=cfg.signed)
    if cfg.operator == "modularity":
        op = modularity_from_graph(g)
    elif cfg.signed:
        op = signed_adjacency(g)
    else:
        op = adjacency(g)
    lz = lanczos_top(op, seed=cfg.seed)
    if not lz.converged:
        raise RuntimeError(f"lanczos did not converge (residual {lz.residual:.3e}); aborting run")
    if not lz.lambda1 > 0:
        raise RuntimeError(f"top eigenvalue {lz.lambda1} is not positive; ratio undefined")
    return op, lz.lambda1, g


def _one_rep(cfg, op, lambda1, g, axis_value, rep):
    q, d = (cfg.fixed, axis_value) if cfg.sweep == "d" else (axis_value, cfg.fixed)
    handle = op.fork()
    seed = derive_seed(cfg.seed, rep)
    t0 = time.perf_counter()
    if cfg.method == "rsvd":
        res = rsvd(handle, gaussian_sketch(op.n, d, seed), q, lambda1=lambda1)
    else:
        res = randsum(handle, q, d, cfg.p, seed, lambda1=lambda1)
    wall = (time.perf_counter() - t0) * 1000.0
    row = {
        "axis_value": axis_value,
        "rep": rep,
        "R": res.ratio,
        "rayleigh": res.rayleigh,
        "passes": res.passes,
        "matvec_count": handle.stats.vectors_applied,
    }
    if cfg.timing:
        row["wall_ms"] = wall
    if g is not None and cfg.operator == "modularity":
        x = np.where(res.u_hat < 0, -1, 1)
        row["modularity"] = apps.modularity_score(g, x)
    elif g is not None and cfg.signed:
        R = apps.random_eigen_sign_batch(res.u_hat, 50, derive_seed(seed, 0x5151))
        R = np.vstack([R, np.sign(res.u_hat).astype(np.int8)[None, :]])
        row["polarity"] = float(np.nanmax(apps.polarity_batch(op, R)))
    return row


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return repr(float(v))


def cmd_run(cfg, out=None):
    """Run a sweep and write the CSV report. Returns the rows written (including summaries)."""
    cfg.validate()
    op, lambda1, g = _build_operator(cfg)
    jobs = []
    for a in cfg.values:
        d = a if cfg.sweep == "d" else cfg.fixed
        if d > op.n or (cfg.method == "randsum" and d < 2):
            log.warning("skipping axis value %s: d=%d invalid for method %s at n=%d", a, d, cfg.method, op.n)
            continue
        jobs.extend((a, r) for r in range(cfg.reps))
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda job: _one_rep(cfg, op, lambda1, g, *job), jobs))
    rows.sort(key=lambda r: (r["axis_value"], r["rep"]))
    header = list(rows[0].keys()) if rows else ["axis_value", "rep", "R", "rayleigh", "passes", "matvec_count"]
    summaries = []
    for a in sorted({r["axis_value"] for r in rows}):
        sel = [r for r in rows if r["axis_value"] == a]
        s = {"axis_value": a, "rep": "mean"}
        for k in header[2:]:
            s[k] = float(np.mean([r[k] for r in sel]))
        summaries.append(s)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows + summaries:
        w.writerow([_fmt(r[k]) for k in header])
    text = buf.getvalue()
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return rows + summaries


def _spec_from_args(args):
    kw = dict(n=args.n, i0=args.i0)
    if args.kind == "worst_case":
        kw.update(q=args.q, d=args.d)
    return spectrum(args.kind, **kw)


def _graph_spectrum(path, signed, limit=5000):
    g = load_edge_list(path, signed=signed)
    if g.n > limit:
        raise ValueError(f"graph has {g.n} nodes; dense spectrum limited to {limit}")
    A = (signed_adjacency(g) if signed else adjacency(g)).to_dense()
    vals, vecs = np.linalg.eigh(A)
    order = np.argsort(-vals)
    return SpectrumSpec(vals[order], os.path.basename(path)), vecs[:, order]


def cmd_synth(args):
    spec = _spec_from_args(args)
    if args.out in (None, "-"):
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["index", "value"])
        for i, v in enumerate(spec.values, start=1):
            w.writerow([i, repr(float(v))])
    else:
        write_spectrum_csv(spec, args.out)
    return 0


def cmd_kappa(args):
    if args.graph:
        spec, U = _graph_spectrum(args.graph, args.signed)
    else:
        spec = _spec_from_args(args)
        U = None
        if args.xi:
            U = realize(spec, "haar", seed=args.seed).basis
    xi = xi_weights(U, args.p, args.d) if (args.xi and U is not None) else None
    rep = assumption_report(spec, args.q, xi)
    out = {"kappa": rep.kappa, "q": rep.q_used, "spectrum_size": rep.spectrum_size, "spectrum": spec.label}
    if rep.kappa_prime is not None:
        out["kappa_prime"] = rep.kappa_prime
    print(json.dumps(out, indent=2))
    return 0


def cmd_fit(args):
    if args.values_file:
        vals = np.sort(np.abs(np.loadtxt(args.values_file, ndmin=1)))[::-1]
    elif args.graph:
        vals = _graph_spectrum(args.graph, args.signed)[0].magnitudes
    else:
        vals = _spec_from_args(args).magnitudes
    if args.top:
        vals = vals[: args.top]
    fit = fit_power_law(vals)
    print(json.dumps({k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in vars(fit).items()},
                     indent=2))
    return 0


def cmd_cg(args):
    g = load_edge_list(args.graph, signed=True)
    res = apps.detect_conflicting_groups(g, args.q, args.d, args.method, args.p, args.seed, args.trials)
    if args.out:
        apps.write_assignment(res, args.out, g.labels)
    print(json.dumps({"polarity": res.score, "nonzero": res.nonzero_count, "n": g.n}, indent=2))
    return 0


def cmd_communities(args):
    g = load_edge_list(args.graph, signed=False)
    res = apps.detect_communities(g, args.q, args.d, args.method, args.p, args.seed)
    if args.out:
        apps.write_assignment(res, args.out, g.labels)
    sizes = [int(np.sum(res.x == 1)), int(np.sum(res.x == -1))]
    print(json.dumps({"modularity": res.score, "sizes": sizes, "n": g.n}, indent=2))
    return 0


def cmd_verify(args):
    reports = []
    todo = ["cos2", "pathwise", "tightness", "powerlaw"] if args.campaign == "all" else [args.campaign]
    for c in todo:
        if c == "cos2":
            reports.append(verify.empirical_cos2(args.n, args.d, args.dist, args.v, args.trials, args.seed, args.p))
        elif c == "pathwise":
            spec = SpectrumSpec(np.sort(np.random.default_rng(args.seed).uniform(0, 1, args.n))[::-1])
            reports.append(verify.check_psd_pathwise(spec, args.q, args.d, args.trials, args.seed))
        elif c == "tightness":
            reports.append(verify.check_tightness(args.n, args.d, args.q, args.trials, args.seed))
        elif c == "powerlaw":
            spec = spectrum(args.kind if args.kind.startswith("type") else "type1", n=args.n, i0=args.i0)
            reports.append(verify.check_powerlaw_theorem(spec, args.i0, args.q, args.d, args.trials, args.seed))
    payload = [json.loads(r.to_json(args.samples)) for r in reports]
    text = json.dumps(payload if len(payload) > 1 else payload[0], indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(r.verdict for r in reports) else 1


def cmd_lambda1(args):
    if args.graph:
        g = load_edge_list(args.graph, signed=args.signed)
        op = modularity_from_graph(g) if args.operator == "modularity" else (
            signed_adjacency(g) if args.signed else adjacency(g))
    else:
        op = realize(_spec_from_args(args), args.basis, seed=args.seed).op
    res = lanczos_top(op, max_iter=args.max_iter, tol=args.tol, seed=args.seed)
    print(json.dumps({"lambda1": res.lambda1, "iterations": res.iterations, "residual": res.residual,
                      "converged": res.converged, "restarts": res.restarts}, indent=2))
    return 0 if res.converged else 2


def cmd_bench(args):
    from .bench import run_all

    run_all(size=args.size, repeat=args.repeat)
    return 0


def _add_spec_args(p, n=2000):
    p.add_argument("--kind", default="type1", choices=MATRIX_KINDS)
    p.add_argument("--n", type=int, default=n)
    p.add_argument("--i0", type=int, default=100)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--d", type=int, default=5)


def build_parser():
    ap = argparse.ArgumentParser(prog="spectral-sketch", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="sweep d or q and report R per repetition (CSV)",
                       description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    r.add_argument("--matrix", choices=MATRIX_KINDS)
    r.add_argument("--graph")
    r.add_argument("--signed", action="store_true")
    r.add_argument("--operator", choices=["adjacency", "modularity"], default="adjacency")
    r.add_argument("--method", choices=["rsvd", "randsum"], default="rsvd")
    r.add_argument("--sweep", choices=sorted(SWEEPS), default="d")
    r.add_argument("--values", type=int, nargs="+", help="override the sweep grid")
    r.add_argument("--fixed", type=int, help="value of the non-swept parameter (default q=1 or d=10)")
    r.add_argument("--reps", type=int, default=100)
    r.add_argument("--p", type=float, default=DEFAULT_P)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--n", type=int, default=2000)
    r.add_argument("--i0", type=int, default=100)
    r.add_argument("--basis", choices=["haar", "canonical"], default="haar")
    r.add_argument("--wc-q", type=int, default=1, help="q of the worst-case spectrum")
    r.add_argument("--wc-d", type=int, default=5, help="d of the worst-case spectrum")
    r.add_argument("--out", default="-")
    r.add_argument("--no-timing", action="store_true")

    s = sub.add_parser("synth", help="emit a synthetic spectrum as CSV (index,value)")
    _add_spec_args(s)
    s.add_argument("--out")

    k = sub.add_parser("kappa", help="print kappa (and kappa' with --xi)")
    _add_spec_args(k, n=2000)
    k.add_argument("--graph")
    k.add_argument("--signed", action="store_true")
    k.add_argument("--xi", action="store_true", help="also report kappa' with bernoulli weights from the eigenbasis")
    k.add_argument("--p", type=float, default=DEFAULT_P)
    k.add_argument("--seed", type=int, default=0)

    f = sub.add_parser("fit", help="power-law tail fit of singular values")
    _add_spec_args(f)
    f.add_argument("--values-file")
    f.add_argument("--graph")
    f.add_argument("--signed", action="store_true")
    f.add_argument("--top", type=int, help="keep only the largest TOP magnitudes")

    for name, helptext in (("cg", "2-conflicting-group detection on a signed graph"),
                           ("communities", "2-community detection by modularity")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("--graph", required=True)
        c.add_argument("--q", type=int, default=2)
        c.add_argument("--d", type=int, default=10)
        c.add_argument("--method", choices=["rsvd", "randsum"], default="rsvd")
        c.add_argument("--p", type=float, default=DEFAULT_P)
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--out", help="write 'node value' lines here")
        if name == "cg":
            c.add_argument("--trials", type=int, default=50)

    v = sub.add_parser("verify", help="run a verification campaign (JSON report)")
    v.add_argument("--campaign", choices=["cos2", "pathwise", "tightness", "powerlaw", "all"], default="all")
    _add_spec_args(v)
    v.add_argument("--dist", choices=["gaussian", "bernoulli"], default="gaussian")
    v.add_argument("--v", default="e1", choices=["e1", "uniform_unit", "ones_normalized", "orthogonal_to_ones"])
    v.add_argument("--p", type=float, default=DEFAULT_P)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", action="store_true", help="include raw samples in the report")
    v.add_argument("--out")

    lz = sub.add_parser("lambda1", help="Lanczos baseline for the top eigenvalue")
    _add_spec_args(lz)
    lz.add_argument("--graph")
    lz.add_argument("--signed", action="store_true")
    lz.add_argument("--operator", choices=["adjacency", "modularity"], default="adjacency")
    lz.add_argument("--basis", choices=["haar", "canonical"], default="canonical")
    lz.add_argument("--max-iter", type=int)
    lz.add_argument("--tol", type=float, default=1e-10)
    lz.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("bench", help="numba vs numpy kernel timings")
    b.add_argument("--size", type=int, default=2000)
    b.add_argument("--repeat", type=int, default=5)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = ExperimentConfig(
                matrix=args.matrix, graph=args.graph, signed=args.signed, operator=args.operator,
                method=args.method, sweep=args.sweep, values=args.values or [], fixed=args.fixed,
                reps=args.reps, p=args.p, seed=args.seed, n=args.n, i0=args.i0, basis=args.basis,
                wc_q=args.wc_q, wc_d=args.wc_d, timing=not args.no_timing,
            )
            cmd_run(cfg, args.out)
            return 0
        handler = {
            "synth": cmd_synth,
            "kappa": cmd_kappa,
            "fit": cmd_fit,
            "cg": cmd_cg,
            "communities": cmd_communities,
            "verify": cmd_verify,
            "lambda1": cmd_lambda1,
            "bench": cmd_bench,
        }[args.command]
        return handler(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"spectral-sketch {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
