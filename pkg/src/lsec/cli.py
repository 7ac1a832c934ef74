"""Command-line interface: ``lsec gen|run|eval|bench``.

Exit codes: 0 success, 1 runtime or I/O failure, 2 invalid arguments.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time

from threadpoolctl import threadpool_limits

from . import _backend
from .consensus import lsec
from .ensemble import EnsembleParams, dump_ensemble
from .errors import LSECError, ParamError
from .io import load_labels, load_matrix, save_labels, save_matrix
from .kmeans import kmeans
from .knn import approx_knn, build_affinity, estimate_sigma
from .landmarks import select_landmarks
from .metrics import acc, nmi
from .spectral import spectral_partition
from .synthetic import CLASS_COUNTS, gen_synthetic

log = logging.getLogger("lsec")

BENCH_COLUMNS = ["dataset", "n", "method", "seed", "acc", "nmi", "time_s"]
METHODS = ("lsec", "dnc-sc", "kmeans")


class UsageError(Exception):
    pass


def _k_list(text):
    try:
        ks = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad K list {text!r}") from None
    if not ks:
        raise argparse.ArgumentTypeError("K list is empty")
    return ks


def _add_ensemble_flags(sp):
    defaults = EnsembleParams()
    sp.add_argument("--m", type=int, default=defaults.m, help="number of base clusterings")
    sp.add_argument("--q", type=int, default=defaults.q, help="K values per landmark set")
    sp.add_argument("--K", type=_k_list, default=defaults.K_list,
                    help="comma-separated ascending K values; the q largest are used")
    sp.add_argument("--p", type=int, default=defaults.p, help="landmarks per set")
    sp.add_argument("--alpha", type=int, default=defaults.alpha, help="per-subproblem landmark bound")
    sp.add_argument("--c-min", type=int, default=defaults.c_min)
    sp.add_argument("--c-max", type=int, default=defaults.c_max)
    sp.add_argument("--kprime", type=int, default=None, help="candidate landmarks per search")


def _params(args, seed):
    return EnsembleParams(m=args.m, q=args.q, K_list=args.K, p=args.p, alpha=args.alpha,
                          c_min=args.c_min, c_max=args.c_max, seed=seed, K_prime=args.kprime)


def build_parser():
    parser = argparse.ArgumentParser(prog="lsec", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic 2-D dataset")
    g.add_argument("--shape", required=True, choices=sorted(CLASS_COUNTS))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--noise", type=float, default=0.05)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="matrix file (.csv or .bin)")
    g.add_argument("--labels", required=True, help="ground-truth label file")
    g.add_argument("--format", choices=["csv", "bin"], default=None)

    r = sub.add_parser("run", help="cluster a matrix with the spectral ensemble")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--format", choices=["csv", "bin"], default=None)
    r.add_argument("--clusters", type=int, required=True, help="number of consensus clusters")
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--out", required=True, help="consensus label file")
    r.add_argument("--report", default=None, help="JSON run report (default: OUT.report.json)")
    r.add_argument("--dump-ensemble", default=None, metavar="DIR")
    r.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_ensemble_flags(r)

    e = sub.add_parser("eval", help="score predicted labels against ground truth")
    e.add_argument("pred")
    e.add_argument("truth")
    e.add_argument("--csv", default=None, help="append a row to this CSV file")
    e.add_argument("--tag", default="", help="dataset/method tag for the CSV row")

    b = sub.add_parser("bench", help="run a benchmark spec and write a results CSV")
    b.add_argument("spec", help="JSON benchmark spec")
    b.add_argument("--out", required=True, help="results CSV")
    b.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    return parser


def cmd_gen(args):
    if args.n < 1:
        raise UsageError("--n must be positive")
    try:
        X, y = gen_synthetic(args.shape, args.n, args.noise, args.seed)
    except ParamError as exc:
        raise UsageError(str(exc)) from None
    save_matrix(X, args.out, args.format)
    save_labels(y, args.labels)
    print(f"wrote {args.shape} n={X.shape[0]} d={X.shape[1]} classes={CLASS_COUNTS[args.shape]} "
          f"-> {args.out}, {args.labels}")
    return 0


def cmd_run(args):
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    params = _params(args, args.seed)
    try:
        params.validate()
    except ParamError as exc:
        raise UsageError(str(exc)) from None
    if args.clusters < 2:
        raise UsageError("--clusters must be >= 2")
    data = load_matrix(args.input, args.format)
    old = _backend.set_num_threads(args.threads)
    try:
        result = lsec(data.values, params, args.clusters, workers=args.threads)
    finally:
        _backend.set_num_threads(old)
    save_labels(result.labels, args.out)
    if args.dump_ensemble:
        dump_ensemble(result.ensemble, args.dump_ensemble)
    report = {
        "input": os.path.abspath(args.input),
        "output": os.path.abspath(args.out),
        "n": data.n,
        "d": data.d,
        "clusters": args.clusters,
        "params": params.to_dict(),
        "K_used": list(params.ks),
        "backend": _backend.BACKEND,
        "threads": args.threads,
        "timings_s": result.timings,
        "consensus_eigenvalues": [float(v) for v in result.embedding.eigenvalues],
        "base_clusterings": [
            {"landmark_set": b.landmark_set, "K": b.K, "drawn_c": b.drawn_c, "c": b.c}
            for b in result.ensemble.base
        ],
        "counters": result.ensemble.stats,
    }
    report_path = args.report or args.out + ".report.json"
    with open(report_path, "w") as fh:
        json.dump(report, fh, indent=2)
    print(f"clustered n={data.n} into {args.clusters} clusters in "
          f"{result.timings['total_s']:.2f}s -> {args.out}")
    return 0


def cmd_eval(args):
    pred = load_labels(args.pred)
    truth = load_labels(args.truth)
    if pred.shape != truth.shape:
        print(f"error: {args.pred} has {pred.size} labels, {args.truth} has {truth.size}",
              file=sys.stderr)
        return 1
    a, m = acc(pred, truth), nmi(pred, truth)
    print(f"ACC={a:.4f} NMI={m:.4f}")
    if args.csv:
        fresh = not os.path.exists(args.csv)
        with open(args.csv, "a", newline="") as fh:
            w = csv.writer(fh)
            if fresh:
                w.writerow(["tag", "n", "acc", "nmi"])
            w.writerow([args.tag, pred.size, f"{a:.6f}", f"{m:.6f}"])
    return 0


def _bench_dataset(entry):
    if "shape" in entry:
        X, y = gen_synthetic(entry["shape"], int(entry["n"]), float(entry.get("noise", 0.05)),
                             int(entry.get("data_seed", 0)))
        name = entry.get("name", entry["shape"])
    else:
        X = load_matrix(entry["path"]).values
        y = load_labels(entry["labels"])
        name = entry.get("name", os.path.splitext(os.path.basename(entry["path"]))[0])
    clusters = int(entry.get("clusters", int(y.max()) + 1))
    return name, X, y, clusters


def run_method(method, X, clusters, params, seed):
    if method == "lsec":
        return lsec(X, params, clusters, seed=seed).labels
    if method == "kmeans":
        return kmeans(X, clusters, seed=seed).labels
    if method == "dnc-sc":
        # one landmark set, largest K, true cluster count
        ls = select_landmarks(X, params.p, params.alpha, seed)
        nb = approx_knn(X, ls, params.ks[-1], params.K_prime)
        return spectral_partition(build_affinity(nb, estimate_sigma(nb), ls.p), clusters,
                                  seed=seed, use_light=False)
    raise ParamError(f"unknown method {method!r}")


def cmd_bench(args):
    with open(args.spec) as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad benchmark spec: {exc}") from None
    datasets = spec.get("datasets") or []
    methods = spec.get("methods") or ["lsec"]
    seeds = spec.get("seeds") or []
    if not datasets or not seeds:
        raise UsageError("benchmark spec needs non-empty 'datasets' and 'seeds'")
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise UsageError(f"unknown methods {bad}; choose from {list(METHODS)}")
    base = EnsembleParams(**spec.get("params", {}))
    try:
        base.validate()
    except ParamError as exc:
        raise UsageError(str(exc)) from None

    failed = 0
    old = _backend.set_num_threads(args.threads)
    try:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(BENCH_COLUMNS)
            for entry in datasets:
                name, X, y, clusters = _bench_dataset(entry)
                for method in methods:
                    for seed in seeds:
                        t0 = time.perf_counter()
                        try:
                            with threadpool_limits(limits=1):
                                labels = run_method(method, X, clusters, base, int(seed))
                        except LSECError as exc:
                            log.error("%s/%s/seed %s failed: %s", name, method, seed, exc)
                            failed += 1
                            continue
                        dt = time.perf_counter() - t0
                        w.writerow([name, X.shape[0], method, seed, f"{acc(labels, y):.6f}",
                                    f"{nmi(labels, y):.6f}", f"{dt:.3f}"])
                        fh.flush()
    finally:
        _backend.set_num_threads(old)
    print(f"wrote {args.out}" + (f" ({failed} failed runs)" if failed else ""))
    return 1 if failed else 0


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "eval": cmd_eval, "bench": cmd_bench}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lsec {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (OSError, LSECError) as exc:
        print(f"lsec {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
