"""Batch front end: single runs, gamma sweeps, side-by-side benchmarks and
synthetic dataset generation, with JSON/CSV reporting.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical error.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datasets import SYNTHETIC_KINDS, load_dataset, make_blobs, make_components, \
    make_moons, save_dataset
from .exceptions import ConvergenceError, DataError, NumericalError, ParameterError
from .metrics import acc, nmi
from .pipelines import run_kmeans, run_pca_then, run_spectral, run_ssc
from .shrink import ShrinkConfig

METHODS = ("ssc", "sc", "kmeans", "pca-kmeans", "pca-sc")

DEFAULT_GAMMA_GRID = (1e-6, 1e-3, 1.0, 1e3, 1e6)

DEFAULTS = {
    "k": 5,
    "gamma": 1.0,
    "restarts": 50,
    "epsilon": 1e-8,
    "tol": 1e-6,
    "max_iter": 100,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures map to exit code 1."""

    def error(self, message):
        raise UsageError(message)


@dataclass
class RunReport:
    method: str
    params: dict
    acc: float | None
    nmi: float | None
    inertia: float
    iterations: int
    converged: bool
    seed: int
    trace: list | None
    wall_time: float

    def to_dict(self):
        return {
            "method": self.method,
            "params": self.params,
            "acc": self.acc,
            "nmi": self.nmi,
            "inertia": self.inertia,
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed,
            "trace": self.trace,
            "wall_time": self.wall_time,
        }


def _resolve_params(method, params):
    merged = dict(DEFAULTS)
    merged.update({k: v for k, v in params.items() if v is not None})
    if merged["gamma"] <= 0:
        raise ParameterError(f"gamma must be positive, got {merged['gamma']}")
    if merged["k"] < 1:
        raise ParameterError("k must be at least 1")
    if merged["restarts"] < 1:
        raise ParameterError("restarts must be at least 1")
    return merged


def run_cluster(dataset, method, params=None, seed=0):
    """Execute one pipeline on a dataset and assemble its report."""
    if method not in METHODS:
        raise ParameterError(
            f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    params = _resolve_params(method, params or {})
    c = params.get("clusters")
    if not c:
        raise ParameterError("number of clusters is required")
    x = dataset.x
    start = time.perf_counter()
    if method == "kmeans":
        res = run_kmeans(x, c, restarts=params["restarts"], seed=seed)
    elif method == "sc":
        res = run_spectral(x, c, k=params["k"],
                           restarts=params["restarts"], seed=seed)
    elif method == "ssc":
        cfg = ShrinkConfig(gamma=params["gamma"], epsilon=params["epsilon"],
                           tol=params["tol"], max_iter=params["max_iter"])
        res = run_ssc(x, c, k=params["k"], cfg=cfg,
                      restarts=params["restarts"], seed=seed)
    else:
        inner = "kmeans" if method == "pca-kmeans" else "spectral"
        res = run_pca_then(inner, x, c, k=params["k"],
                           restarts=params["restarts"], seed=seed,
                           truth=dataset.labels)
    wall = time.perf_counter() - start

    used = {"clusters": c, "restarts": params["restarts"]}
    if method in ("sc", "ssc", "pca-sc"):
        used["k"] = params["k"]
    if method == "ssc":
        used.update(gamma=params["gamma"], epsilon=params["epsilon"],
                    tol=params["tol"], max_iter=params["max_iter"])
    if res.pca_dim is not None:
        used["pca_dim"] = res.pca_dim

    truth = dataset.labels
    trace = None
    converged = True
    if res.shrunk is not None:
        trace = [[int(i), float(j)] for i, j in res.shrunk.trace]
        converged = bool(res.shrunk.converged)
    return RunReport(
        method=method,
        params=used,
        acc=float(acc(res.labels, truth)) if truth is not None else None,
        nmi=float(nmi(res.labels, truth)) if truth is not None else None,
        inertia=float(res.inertia),
        iterations=int(res.iterations),
        converged=converged,
        seed=int(seed),
        trace=trace,
        wall_time=wall,
    )


def run_sweep(dataset, gamma_grid=DEFAULT_GAMMA_GRID, params=None, seed=0):
    """One ssc report per gamma, same seed throughout the grid."""
    grid = list(gamma_grid)
    if not grid:
        raise ParameterError("gamma grid must be nonempty")
    for g in grid:
        if g <= 0:
            raise ParameterError(f"gamma values must be positive, got {g}")
    reports = []
    for g in grid:
        p = dict(params or {})
        p["gamma"] = g
        reports.append(run_cluster(dataset, "ssc", p, seed=seed))
    return reports


def run_bench(dataset, methods=METHODS, repeats=10, params=None, seed=0):
    """Every method, repeated with seeds seed..seed+repeats-1."""
    if repeats < 1:
        raise ParameterError("repeats must be at least 1")
    reports = []
    for method in methods:
        for r in range(repeats):
            reports.append(run_cluster(dataset, method, dict(params or {}),
                                       seed=seed + r))
    return reports


def export_report(reports, out_path, format="json"):
    """JSON: array of report objects. CSV: one trace file per report."""
    out_path = Path(out_path)
    if format == "json":
        payload = [r.to_dict() for r in reports]
        try:
            out_path.parent.mkdir(parents=True, exist_ok=True)
            with open(out_path, "w") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise DataError(f"cannot write {out_path}: {exc}") from exc
        return [out_path]
    if format == "csv":
        written = []
        with_traces = [r for r in reports if r.trace is not None]
        for idx, report in enumerate(with_traces):
            path = out_path
            if len(with_traces) > 1:
                path = out_path.with_name(
                    f"{out_path.stem}_{idx}{out_path.suffix}")
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                with open(path, "w") as fh:
                    fh.write("iteration,objective\n")
                    for it, obj in report.trace:
                        fh.write(f"{it},{obj!r}\n")
            except OSError as exc:
                raise DataError(f"cannot write {path}: {exc}") from exc
            written.append(path)
        return written
    raise ParameterError(f"unknown format {format!r}")


def _summarize(reports, stream):
    by_method = {}
    for r in reports:
        by_method.setdefault(r.method, []).append(r)
    for method, runs in by_method.items():
        accs = [r.acc for r in runs if r.acc is not None]
        nmis = [r.nmi for r in runs if r.nmi is not None]
        inertias = [r.inertia for r in runs]
        line = f"{method:12s}"
        if accs:
            line += (f"  ACC {100 * np.mean(accs):5.1f} +- {100 * np.std(accs):4.1f}"
                     f"  NMI {100 * np.mean(nmis):5.1f} +- {100 * np.std(nmis):4.1f}")
        line += f"  inertia {np.mean(inertias):.6g}"
        print(line, file=stream)


def _build_parser():
    parser = _Parser(prog="shrunkclust",
                     description="Graph-shrunk spectral clustering toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_method=True):
        p.add_argument("data", help="CSV matrix, one sample per row")
        p.add_argument("--labels", help="ground-truth labels, one integer per line")
        p.add_argument("--clusters", type=int, required=True)
        if with_method:
            p.add_argument("--method", choices=METHODS, default="ssc")
        p.add_argument("--k", type=int, default=None,
                       help="neighborhood size (default 5)")
        p.add_argument("--gamma", type=float, default=None)
        p.add_argument("--epsilon", type=float, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--max-iter", type=int, default=None)
        p.add_argument("--restarts", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="report path")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    add_common(sub.add_parser("cluster", help="run one method once"))

    sweep = sub.add_parser("sweep", help="ssc over a gamma grid")
    add_common(sweep, with_method=False)
    sweep.add_argument("--gamma-grid",
                       default=",".join(repr(g) for g in DEFAULT_GAMMA_GRID),
                       help="comma-separated positive gammas")

    bench = sub.add_parser("bench", help="all methods side by side")
    add_common(bench, with_method=False)
    bench.add_argument("--methods", default=",".join(METHODS))
    bench.add_argument("--repeats", type=int, default=10)

    synth = sub.add_parser("synth", help="generate a labeled synthetic dataset")
    synth.add_argument("--kind", choices=sorted(SYNTHETIC_KINDS), required=True)
    synth.add_argument("--samples", type=int, default=300)
    synth.add_argument("--features", type=int, default=10)
    synth.add_argument("--clusters", type=int, default=3)
    synth.add_argument("--std", type=float, default=0.5)
    synth.add_argument("--noise", type=float, default=0.05)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True, help="output path prefix")
    return parser


def _params_from_args(args):
    return {
        "clusters": args.clusters,
        "k": args.k,
        "gamma": args.gamma,
        "epsilon": args.epsilon,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "restarts": args.restarts,
    }


def _cmd_cluster(args):
    dataset = load_dataset(args.data, args.labels)
    report = run_cluster(dataset, args.method, _params_from_args(args),
                         seed=args.seed)
    _summarize([report], sys.stdout)
    if not report.converged:
        print("note: shrink solver did not reach its stationarity tolerance",
              file=sys.stderr)
    if args.out:
        export_report([report], args.out, args.format)
    else:
        print(json.dumps(report.to_dict(), indent=2))
    return 0


def _cmd_sweep(args):
    dataset = load_dataset(args.data, args.labels)
    try:
        grid = [float(tok) for tok in args.gamma_grid.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad gamma grid: {args.gamma_grid!r}") from exc
    reports = run_sweep(dataset, grid, _params_from_args(args), seed=args.seed)
    print("gamma        ACC      NMI      inertia")
    for g, rep in zip(grid, reports):
        acc_s = f"{rep.acc:.4f}" if rep.acc is not None else "   -  "
        nmi_s = f"{rep.nmi:.4f}" if rep.nmi is not None else "   -  "
        print(f"{g:<12g} {acc_s}   {nmi_s}   {rep.inertia:.6g}")
    if args.out:
        export_report(reports, args.out, args.format)
    return 0


def _cmd_bench(args):
    dataset = load_dataset(args.data, args.labels)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}")
    reports = run_bench(dataset, methods, repeats=args.repeats,
                        params=_params_from_args(args), seed=args.seed)
    _summarize(reports, sys.stdout)
    if args.out:
        export_report(reports, args.out, args.format)
    return 0


def _cmd_synth(args):
    if args.kind == "blobs":
        x, y = make_blobs(n=args.samples, d=args.features, c=args.clusters,
                          std=args.std, seed=args.seed)
    elif args.kind == "moons":
        x, y = make_moons(n=args.samples, noise=args.noise, seed=args.seed)
    else:
        x, y = make_components(n=args.samples, d=args.features,
                               c=args.clusters, std=args.std, seed=args.seed)
    matrix_path, labels_path = save_dataset(x, y, args.out)
    print(f"wrote {matrix_path} and {labels_path}")
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "cluster": _cmd_cluster,
            "sweep": _cmd_sweep,
            "bench": _cmd_bench,
            "synth": _cmd_synth,
        }[args.command]
        return handler(args)
    except (UsageError, ParameterError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ConvergenceError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
