"""Command-line benchmark harness: generate, cluster, evaluate, sweep, theory.

Exit codes are a stable contract: 0 success, 2 usage error, 3 I/O failure,
4 recognized-but-unimplemented method, 5 algorithmic degeneracy (a cluster
that cannot be split further).  Every command is deterministic for fixed
arguments and seed; only wall-time fields vary between reruns.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import replace

import numpy as np

from .algorithm import (
    LescConfig,
    UnsplittableClusterError,
    lesc_bipartition,
    lesc_k,
    recursive_bipartition,
)
from .baselines import (
    BASELINE_METHODS,
    UNIMPLEMENTED_METHODS,
    UnimplementedMethodError,
    baseline_cluster,
)
from .dsbm import DsbmParams, MetaGraph, sample_dsbm2, sample_dsbm_meta
from .eigensolver import EigenConfig
from .graph import (
    Labeling,
    read_edge_list,
    read_labels,
    symmetric_normalize,
    write_edge_list,
    write_labels,
)
from .kmeans import KmeansConfig
from .metrics import ari, misclustering_error
from .theory import centroid_distance, eigengap_delta, error_bound, l_eta

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_UNIMPLEMENTED = 4
EXIT_DEGENERATE = 5

ALL_METHODS = BASELINE_METHODS + ("lesc",) + UNIMPLEMENTED_METHODS

WORKERS_ENV = "LESC_WORKERS"


class UsageError(ValueError):
    """Semantic argument error past argparse (maps to exit 2)."""


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if raw:
        return max(1, int(raw))
    return max(1, os.cpu_count() or 1)


def _derive_run_seed(*parts: int) -> int:
    entropy = tuple(int(p) & 0xFFFFFFFFFFFFFFFF for p in parts)
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _shuffle(g, labeling, seed):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(g.n)
    src, dst, w = g.edges()
    from .graph import build_graph

    shuffled = build_graph(g.n, zip(perm[src].tolist(), perm[dst].tolist(), w))
    new_labels = np.empty(g.n, dtype=np.int64)
    new_labels[perm] = labeling.assignments
    return shuffled, Labeling(new_labels, labeling.k)


# -- generate -------------------------------------------------------------

def _cmd_generate(args) -> int:
    if args.model == "dsbm2":
        params = DsbmParams((args.n1, args.n2), args.p, args.q, args.eta)
        g, labels = sample_dsbm2(params, args.seed)
    else:
        sizes = tuple(int(s) for s in args.sizes.split(","))
        params = DsbmParams(sizes, args.p, args.q, args.eta)
        with open(args.meta, "r", encoding="utf-8") as fh:
            meta = MetaGraph.from_json(fh.read())
        g, labels = sample_dsbm_meta(params, meta, args.seed)
    if args.shuffle:
        g, labels = _shuffle(g, labels, _derive_run_seed(args.seed, 1))
    write_edge_list(g, args.out_graph)
    write_labels(labels, args.out_labels)
    print(f"vertices: {g.n}  edges: {g.edge_count}")
    return 0


# -- cluster --------------------------------------------------------------

def _run_method(g, method, k, args):
    """Cluster and return (labeling, report fields)."""
    eigen = EigenConfig(tol=args.eigen_tol, max_iter=args.eigen_max_iter,
                        seed=args.seed)
    kmeans = KmeansConfig(restarts=args.kmeans_restarts, seed=args.seed)
    info = {}
    if method == "lesc":
        warm = read_labels(args.warm_labels) if args.warm_labels else None
        cfg = LescConfig(
            max_outer_iter=args.max_outer_iter,
            init=args.init,
            warm_labels=warm,
            eigen=eigen,
            kmeans=kmeans,
            seed=args.seed,
        )
        if k == 2:
            result = lesc_bipartition(g, cfg)
            labeling = result.labeling
            info["final_params"] = {"p": result.p, "q": result.q, "eta": result.eta}
            info["iterations"] = len(result.trace)
            info["trace"] = result.trace
        else:
            traces = []

            def split(sub, index):
                seed = cfg.seed if index == 0 else _derive_run_seed(cfg.seed, index, 3)
                res = lesc_bipartition(sub, replace(cfg, seed=seed))
                traces.append(res.trace)
                return res.labeling.assignments

            labeling = recursive_bipartition(g, k, split)
            info["iterations"] = sum(len(t) for t in traces)
            info["trace"] = traces[0]
        return labeling, info
    labeling = baseline_cluster(g, method, k, eigen=eigen, kmeans=kmeans,
                                seed=args.seed)
    return labeling, info


def _cmd_cluster(args) -> int:
    method = args.method
    if method in UNIMPLEMENTED_METHODS:
        raise UnimplementedMethodError(
            f"method '{method}' is recognized but not implemented; "
            f"available: {', '.join(BASELINE_METHODS + ('lesc',))}")
    if method not in BASELINE_METHODS + ("lesc",):
        raise UsageError(f"unknown method '{method}'")
    g = read_edge_list(args.graph)
    if args.normalize:
        g = symmetric_normalize(g)
    t0 = time.perf_counter()
    labeling, info = _run_method(g, method, args.k, args)
    wall = time.perf_counter() - t0
    write_labels(labeling, args.out_labels)
    report = {
        "method": method,
        "k": args.k,
        "seed": args.seed,
        "n": g.n,
        "edges": g.edge_count,
        "normalize": bool(args.normalize),
        "wall_seconds": wall,
    }
    if "iterations" in info:
        report["iterations"] = info["iterations"]
    if "final_params" in info:
        report["final_params"] = info["final_params"]
    if args.truth:
        truth = read_labels(args.truth)
        report["ari"] = ari(truth, labeling)
        report["misclustering_error"] = misclustering_error(truth, labeling)
    trace = info.get("trace")
    if args.trace and trace is not None:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            trace.write_csv(fh)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    print(json.dumps(report))
    return 0


# -- evaluate -------------------------------------------------------------

def _cmd_evaluate(args) -> int:
    truth = read_labels(args.truth)
    pred = read_labels(args.pred)
    err = misclustering_error(truth, pred)
    out = {
        "ari": ari(truth, pred),
        "misclustering_error": err,
        "error_rate": err / max(1, len(truth)),
    }
    print(json.dumps(out))
    return 0


# -- benchmark ------------------------------------------------------------

_RESULT_FIELDS = [
    "point", "p", "q", "eta", "method", "replicate", "graph_seed", "run_seed",
    "status", "ari", "error_rate", "iterations", "eigen_iterations",
    "eigen_seconds", "kmeans_seconds", "update_seconds", "wall_seconds",
]

_AGG_FIELDS = [
    "point", "p", "q", "eta", "method", "replicates", "mean_ari", "std_ari",
    "mean_error_rate", "mean_wall_seconds",
]


def _benchmark_points(config):
    """Cartesian sweep over whichever of eta/p/q carry grids."""
    base = config["model"]
    sweep = config.get("sweep", {})
    etas = sweep.get("eta", [base["eta"]])
    ps = sweep.get("p", [base["p"]])
    qs = sweep.get("q", [base["q"]])
    points = []
    for p in ps:
        for q in qs:
            for eta in etas:
                points.append({"p": float(p), "q": float(q), "eta": float(eta)})
    return points


def _run_replicate(task):
    """One (grid point, method, replicate) cell; returns a result row."""
    config, point_index, point, method, replicate = task
    model = config["model"]
    sizes = tuple(int(s) for s in model["sizes"])
    k = int(config.get("k", len(sizes)))
    base_seed = int(config.get("seed", 0))
    graph_seed = _derive_run_seed(base_seed, point_index, replicate, 0)
    run_seed = _derive_run_seed(base_seed, point_index, replicate, 1)
    row = {
        "point": point_index, "p": point["p"], "q": point["q"],
        "eta": point["eta"], "method": method, "replicate": replicate,
        "graph_seed": graph_seed, "run_seed": run_seed, "status": "ok",
        "ari": "", "error_rate": "", "iterations": "",
        "eigen_iterations": "", "eigen_seconds": "", "kmeans_seconds": "",
        "update_seconds": "", "wall_seconds": "",
    }
    try:
        params = DsbmParams(sizes, point["p"], point["q"], point["eta"])
        if "meta" in model and model["meta"] is not None:
            meta = MetaGraph(int(model["meta"]["k"]), tuple(
                (int(a), int(b)) for a, b in model["meta"].get("oriented_pairs", [])
            ))
            g, truth = sample_dsbm_meta(params, meta, graph_seed)
        else:
            g, truth = sample_dsbm2(params, graph_seed)
        lesc_opts = config.get("lesc", {})
        eigen = EigenConfig(
            tol=float(lesc_opts.get("eigen_tol", 1e-8)),
            max_iter=int(lesc_opts.get("eigen_max_iter", 5000)),
            seed=run_seed,
        )
        kmeans = KmeansConfig(seed=run_seed)
        t0 = time.perf_counter()
        if method == "lesc":
            cfg = LescConfig(
                max_outer_iter=int(lesc_opts.get("max_outer_iter", 20)),
                init=lesc_opts.get("init", "flow-matrix"),
                eigen=eigen, kmeans=kmeans, seed=run_seed,
            )
            if k == 2:
                res = lesc_bipartition(g, cfg)
                pred = res.labeling
                traces = [res.trace]
            else:
                traces = []

                def split(sub, index):
                    seed = cfg.seed if index == 0 else _derive_run_seed(cfg.seed, index, 3)
                    r = lesc_bipartition(sub, replace(cfg, seed=seed))
                    traces.append(r.trace)
                    return r.labeling.assignments

                pred = recursive_bipartition(g, k, split)
            rows = [it for t in traces for it in t.iterations]
            row["iterations"] = len(rows)
            row["eigen_iterations"] = sum(r.eigen_iterations for r in rows)
            row["eigen_seconds"] = sum(r.eigen_seconds for r in rows)
            row["kmeans_seconds"] = sum(r.kmeans_seconds for r in rows)
            row["update_seconds"] = sum(r.update_seconds for r in rows)
        elif method in BASELINE_METHODS:
            pred = baseline_cluster(g, method, k, eigen=eigen, kmeans=kmeans,
                                    seed=run_seed)
        else:
            raise UnimplementedMethodError(f"method '{method}' not implemented")
        row["wall_seconds"] = time.perf_counter() - t0
        row["ari"] = ari(truth, pred)
        row["error_rate"] = misclustering_error(truth, pred) / g.n
    except UnimplementedMethodError:
        raise
    except Exception as exc:  # per-replicate failures become rows
        row["status"] = f"error: {type(exc).__name__}: {exc}"
    return row


def _cmd_benchmark(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    methods = config.get("methods", ["lesc"])
    for m in methods:
        if m in UNIMPLEMENTED_METHODS:
            raise UnimplementedMethodError(
                f"method '{m}' is recognized but not implemented")
        if m not in BASELINE_METHODS + ("lesc",):
            raise UsageError(f"unknown method '{m}' in config")
    replicates = int(config.get("replicates", 1))
    if replicates < 1:
        raise UsageError("replicates must be at least 1")
    points = _benchmark_points(config)
    if not points:
        raise UsageError("empty sweep grid")
    out_path = args.out or config.get("output")
    if not out_path:
        raise UsageError("no output path (give --out or config 'output')")

    tasks = [
        (config, pi, point, method, rep)
        for pi, point in enumerate(points)
        for method in methods
        for rep in range(replicates)
    ]
    workers = min(_worker_count(), len(tasks))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_replicate, tasks, chunksize=1))
    else:
        rows = [_run_replicate(t) for t in tasks]
    # task order is already (point, method, replicate)-sorted
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_RESULT_FIELDS)
        writer.writeheader()
        writer.writerows(rows)

    agg_path = args.aggregate or config.get("aggregate_output")
    if agg_path:
        with open(agg_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=_AGG_FIELDS)
            writer.writeheader()
            for pi, point in enumerate(points):
                for method in methods:
                    cell = [r for r in rows
                            if r["point"] == pi and r["method"] == method
                            and r["status"] == "ok"]
                    aris = np.array([r["ari"] for r in cell], dtype=float)
                    errs = np.array([r["error_rate"] for r in cell], dtype=float)
                    walls = np.array([r["wall_seconds"] for r in cell], dtype=float)
                    writer.writerow({
                        "point": pi, "p": point["p"], "q": point["q"],
                        "eta": point["eta"], "method": method,
                        "replicates": len(cell),
                        "mean_ari": aris.mean() if len(cell) else "",
                        "std_ari": aris.std(ddof=0) if len(cell) else "",
                        "mean_error_rate": errs.mean() if len(cell) else "",
                        "mean_wall_seconds": walls.mean() if len(cell) else "",
                    })
    n_ok = sum(r["status"] == "ok" for r in rows)
    print(f"rows: {len(rows)}  ok: {n_ok}  output: {out_path}")
    return 0


# -- theory ---------------------------------------------------------------

def _cmd_theory(args) -> int:
    if args.eta_points < 1:
        raise UsageError("need at least one grid point")
    if args.eta_points == 1:
        grid = [args.eta_start]
    else:
        grid = np.linspace(args.eta_start, args.eta_stop, args.eta_points)
    rows = []
    for eta in grid:
        eta = float(eta)
        rows.append({
            "eta": eta,
            "l_eta": l_eta(eta) if eta > 0 else "",
            "delta": eigengap_delta(args.n1, args.n2, args.p, args.q, eta),
            "centroid_distance": centroid_distance(
                args.n1, args.n2, args.p, args.q, eta),
            "error_bound": error_bound(
                args.n1, args.n2, args.p, args.q, eta, args.epsilon),
        })
    out = args.out
    if out:
        fh = open(out, "w", encoding="utf-8", newline="")
    else:
        fh = sys.stdout
    try:
        writer = csv.DictWriter(
            fh, fieldnames=["eta", "l_eta", "delta", "centroid_distance",
                            "error_bound"])
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out:
            fh.close()
    return 0


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lesc",
        description="Directed-graph spectral clustering via likelihood "
                    "estimation: model generators, clustering methods, "
                    "benchmark sweeps, and theory curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a model graph to files")
    gensub = gen.add_subparsers(dest="model", required=True)
    g2 = gensub.add_parser("dsbm2", help="two-community source/sink model")
    g2.add_argument("--n1", type=int, required=True)
    g2.add_argument("--n2", type=int, required=True)
    meta = gensub.add_parser("meta", help="multi-community meta-graph model")
    meta.add_argument("--sizes", required=True,
                      help="comma-separated community sizes")
    meta.add_argument("--meta", required=True,
                      help="meta-graph JSON file: {\"k\":int,\"oriented_pairs\":[[a,b],...]}")
    for p in (g2, meta):
        p.add_argument("--p", type=float, required=True)
        p.add_argument("--q", type=float, required=True)
        p.add_argument("--eta", type=float, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--shuffle", action="store_true",
                       help="apply a seeded vertex permutation")
        p.add_argument("--out-graph", required=True)
        p.add_argument("--out-labels", required=True)
        p.set_defaults(func=_cmd_generate)

    clu = sub.add_parser("cluster", help="cluster an edge-list file")
    clu.add_argument("--graph", required=True)
    clu.add_argument("--method", required=True,
                     help=f"one of {', '.join(ALL_METHODS)}")
    clu.add_argument("--k", type=int, default=2)
    clu.add_argument("--seed", type=int, default=0)
    clu.add_argument("--normalize", action="store_true",
                     help="degree-normalize weights first")
    clu.add_argument("--truth", help="labels file for scoring")
    clu.add_argument("--out-labels", required=True)
    clu.add_argument("--report", help="write a JSON run report here")
    clu.add_argument("--trace", help="write the per-iteration CSV trace here")
    clu.add_argument("--init", default="flow-matrix",
                     choices=["random-params", "flow-matrix",
                              "total-flow-matrix", "warm-labels"])
    clu.add_argument("--warm-labels", help="labels file for warm-labels init")
    clu.add_argument("--max-outer-iter", type=int, default=20)
    clu.add_argument("--eigen-tol", type=float, default=1e-8)
    clu.add_argument("--eigen-max-iter", type=int, default=5000)
    clu.add_argument("--kmeans-restarts", type=int, default=10)
    clu.set_defaults(func=_cmd_cluster)

    ev = sub.add_parser("evaluate", help="score predicted labels against truth")
    ev.add_argument("--truth", required=True)
    ev.add_argument("--pred", required=True)
    ev.set_defaults(func=_cmd_evaluate)

    ben = sub.add_parser("benchmark", help="run a sweep from a JSON config")
    ben.add_argument("--config", required=True)
    ben.add_argument("--out", help="results CSV (overrides config 'output')")
    ben.add_argument("--aggregate",
                     help="per-point mean CSV (overrides config)")
    ben.set_defaults(func=_cmd_benchmark)

    th = sub.add_parser("theory", help="emit closed-form diagnostic curves")
    th.add_argument("--n1", type=int, required=True)
    th.add_argument("--n2", type=int, required=True)
    th.add_argument("--p", type=float, required=True)
    th.add_argument("--q", type=float, required=True)
    th.add_argument("--epsilon", type=float, default=1.0)
    th.add_argument("--eta-start", type=float, default=0.01)
    th.add_argument("--eta-stop", type=float, default=0.5)
    th.add_argument("--eta-points", type=int, default=100)
    th.add_argument("--out", help="CSV path (default stdout)")
    th.set_defaults(func=_cmd_theory)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnimplementedMethodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNIMPLEMENTED
    except UnsplittableClusterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
