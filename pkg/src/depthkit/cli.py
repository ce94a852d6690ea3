"""Command-line front end.

Exit codes: 0 on success, 2 on usage errors (bad flags, unknown notion,
unsupported method), 3 on data errors (unreadable or invalid input).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .api import EXACT, NOTIONS, check_method, depth
from .dataset import (
    Dataset,
    DepthResult,
    load_dataset,
    load_dissimilarity,
    write_region,
    write_results,
    write_rows,
)
from .depth.projection import restricted_depth
from .depth.zonoid import zonoid_depth_imputed
from .errors import DataError, DepthkitError, LocalizationError, UnsupportedMethodError
from .experiments import (
    INVARIANCE_HEADER,
    RTD_HEADER,
    TIMING_HEADER,
    ExperimentPlan,
    run_invariance_suite,
    run_rtd_accuracy,
    run_timing,
)
from .local import beta_localized_depth, kernelized_spatial_depth
from .regions import depth_median, depth_region_members, onion_layers, prob_central_region, spatial_median, tukey_region_2d

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _keyed_float(key):
    """Parse ``key=value`` or a bare number."""
    def parse(text):
        name, sep, val = text.partition("=")
        if sep and name.strip() != key:
            raise argparse.ArgumentTypeError(f"expected {key}=<number>, got {text!r}")
        try:
            return float(val if sep else text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return parse


def _depth_flags(p):
    g = p.add_argument_group("depth")
    g.add_argument("--notion", help=f"one of: {', '.join(NOTIONS)} (default halfspace)")
    g.add_argument("--data", help="sample file (CSV or JSON)")
    g.add_argument("--id-column", help="CSV header column holding point labels")
    g.add_argument("--dissimilarity", help="CSV dissimilarity matrix (lens-ordinal)")
    g.add_argument("--p", type=float, default=2.0, help="exponent of the L_p depth")
    g.add_argument("--beta", type=float, default=2.0, help="beta of the skeleton depth")
    g.add_argument("--non-strict", action="store_true", help="closed instead of open skeleton regions")
    m = g.add_mutually_exclusive_group()
    m.add_argument("--exact", dest="method", action="store_const", const="exact")
    m.add_argument("--approx", dest="method", action="store_const", const="approx")
    g.add_argument("-k", type=int, help="directions or subsets for --approx (default 1000)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--mode", choices=("number", "portion"), default="number")
    g.add_argument("--portion", type=float, default=0.01)
    g.add_argument("--whiten", choices=("none", "cov", "mcd"), default="none")
    g.add_argument("--mcd-alpha", type=float, default=0.75)
    g.add_argument("--out", default="-", help="output CSV (default stdout)")
    g.add_argument("--threads", type=int, help="worker processes (default: available cores)")
    g.add_argument("--config", help="JSON file of flag defaults; explicit flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="depthkit", description="Multivariate data depth.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="depth of query points")
    _depth_flags(p)
    p.add_argument("--points", help="query file; default: the sample points")
    p.add_argument("--local", type=_keyed_float("beta"), metavar="beta=B",
                   help="beta-localized depth with neighbourhood mass B")
    p.add_argument("--kernelized", type=_keyed_float("h"), metavar="h=H",
                   help="kernelized spatial depth with bandwidth H")
    p.add_argument("--record-time", action="store_true",
                   help="fill elapsed_ns (otherwise 0 so reruns are byte-identical)")

    p = sub.add_parser("region", help="central region")
    _depth_flags(p)
    p.add_argument("--alpha", type=float, help="depth level of the region")
    p.add_argument("--prob-beta", type=float, help="probability content of the region")

    p = sub.add_parser("median", help="deepest point")
    _depth_flags(p)

    p = sub.add_parser("layers", help="onion layers")
    _depth_flags(p)

    p = sub.add_parser("bench", help="timing study")
    p.add_argument("--plan", help="JSON experiment plan")
    p.add_argument("--out", default="-")
    p.add_argument("--threads", type=int)
    p.add_argument("--config")

    p = sub.add_parser("rtd-study", help="random Tukey depth accuracy study")
    p.add_argument("--plan", help="JSON experiment plan")
    p.add_argument("--out", default="-")
    p.add_argument("--threads", type=int)
    p.add_argument("--config")

    p = sub.add_parser("invariance", help="invariance checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--out", default="-")
    p.add_argument("--threads", type=int)
    p.add_argument("--config")
    return parser


def parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise DataError(f"cannot read config: {exc.strerror}", path=args.config) from exc
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid JSON: {exc.msg}", path=args.config) from exc
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(k.replace("-", "_") for k in cfg) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


# ---------------------------------------------------------------- helpers

def _notion(args):
    notion = args.notion or "halfspace"
    if notion not in NOTIONS:
        raise UsageError(f"unknown notion {notion!r}; supported notions: {', '.join(NOTIONS)}")
    return notion


def _method(args, notion):
    if args.method == "exact" and args.k is not None:
        raise UsageError("-k only applies to --approx")
    method = args.method or ("exact" if notion in EXACT else "approx")
    check_method(notion, method)
    return method


def _params(args, method):
    kw = dict(p=args.p, beta=args.beta, strict=not args.non_strict, seed=args.seed,
              whiten=None if args.whiten == "none" else args.whiten, mcd_alpha=args.mcd_alpha)
    if method == "approx":
        kw.update(k=args.k if args.k is not None else 1000, mode=args.mode, portion=args.portion)
    return kw


def _load_sample(args, notion):
    if notion == "lens-ordinal":
        if not args.dissimilarity:
            raise UsageError("lens-ordinal needs --dissimilarity")
        D = load_dissimilarity(args.dissimilarity)
        n = D.shape[0]
        return Dataset(np.zeros((n, 1)), (), None, D)
    if not args.data:
        raise UsageError("--data is required")
    ds = load_dataset(args.data, id_column=args.id_column)
    if args.dissimilarity:
        ds = ds.with_dissimilarity(load_dissimilarity(args.dissimilarity))
    return ds


def _threads(args):
    return max(1, args.threads if args.threads else (os.cpu_count() or 1))


def _one(task):
    """Depth of one query; module-level so worker processes can run it."""
    q, data, notion, method, kw, local, kern = task
    t0 = time.perf_counter_ns()
    if kern is not None:
        v = kernelized_spatial_depth(q, data, h=kern)
        out = (v.value, v.raw)
    elif local is not None:
        v = beta_localized_depth(q, data, notion, local, method, **kw)
        out = (v.value, v.raw)
    elif notion != "lens-ordinal" and isinstance(q, np.ndarray) and np.isnan(q).any():
        v = restricted_depth(q, data, lambda a, b: depth(a, b, notion, method, **kw).value)
        out = (v, None)
    elif notion == "zonoid" and isinstance(data, Dataset) and data.has_missing:
        out = (zonoid_depth_imputed(q, data), None)
    else:
        v = depth(q, data, notion, method, **kw)
        out = (v.value, v.raw)
    return out + (time.perf_counter_ns() - t0,)


# ---------------------------------------------------------------- subcommands

def cmd_compute(args):
    if args.kernelized is not None:
        if args.notion not in (None, "spatial"):
            raise UsageError("--kernelized applies to spatial depth only")
        if args.local is not None:
            raise UsageError("--kernelized and --local are mutually exclusive")
        notion, method = "spatial", "exact"
        if args.method == "approx":
            raise UsageError("kernelized spatial depth has no approximate method")
    else:
        notion = _notion(args)
        method = _method(args, notion)
    kw = _params(args, method)
    ds = _load_sample(args, notion)
    if ds.has_missing and not (notion == "zonoid" and args.local is None and args.kernelized is None):
        raise DataError("missing values in the sample are only supported for zonoid depth (mean imputation)")
    data = ds if notion == "lens-ordinal" else (ds if ds.has_missing else np.asarray(ds.points))
    if notion == "lens-ordinal":
        if args.points:
            queries = list(np.asarray(load_dataset(args.points).points))
            ids = list(range(len(queries)))
        else:
            queries = list(range(ds.dissimilarity.shape[0]))
            ids = queries
    elif args.points:
        qs = load_dataset(args.points, id_column=args.id_column)
        if qs.d != ds.d:
            raise DataError(f"query dimension {qs.d} does not match sample dimension {ds.d}")
        queries = list(np.asarray(qs.points))
        ids = list(qs.ids) if qs.ids else list(range(qs.n))
    else:
        if ds.has_missing:
            raise UsageError("pass --points when the sample has missing values")
        queries = list(np.asarray(ds.points))
        ids = list(ds.ids) if ds.ids else list(range(ds.n))
    tasks = [(q, data, notion, method, kw, args.local, args.kernelized) for q in queries]
    workers = min(_threads(args), len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            vals = list(pool.map(_one, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        vals = [_one(t) for t in tasks]
    tag = "kernelized-spatial" if args.kernelized is not None else notion
    if args.local is not None:
        tag = f"{notion}-local"
    results = []
    for pid, (value, raw, ns) in zip(ids, vals):
        # onion results report the layer index
        shown = raw if notion == "onion" and raw is not None else value
        results.append(DepthResult(pid, tag, method, float(shown), ns if args.record_time else 0, raw))
    write_results(results, args.out)


def cmd_region(args):
    notion = _notion(args)
    method = _method(args, notion)
    if (args.alpha is None) == (args.prob_beta is None):
        raise UsageError("give exactly one of --alpha and --prob-beta")
    data = ds = _load_sample(args, notion)
    kw = _params(args, method)
    if args.alpha is not None:
        polygon = (notion == "halfspace" and method == "exact" and ds.d == 2
                   and kw["whiten"] is None and notion != "lens-ordinal")
        region = tukey_region_2d(ds, args.alpha) if polygon else \
            depth_region_members(data, notion, args.alpha, method, **kw)
    else:
        skel = kw.pop("beta")
        region = prob_central_region(data, notion, args.prob_beta, method, skeleton_beta=skel, **kw)
    write_region(region, args.out)


def cmd_median(args):
    notion = _notion(args)
    method = _method(args, notion)
    ds = _load_sample(args, notion)
    if notion == "lens-ordinal":
        raise UsageError("lens-ordinal depth has no point median; use region --prob-beta")
    if notion == "spatial" and args.whiten == "none":
        res = spatial_median(ds)
        point, value = res.point, res.objective
    else:
        res = depth_median(ds, notion, method, **_params(args, method))
        point, value = res.point, res.value
    header = ["notion", "value"]
    cols = list(ds.columns) if ds.columns else [f"x{j + 1}" for j in range(ds.d)]
    row = dict(zip(header, [notion, float(value)]))
    row.update({c: float(v) for c, v in zip(cols, point)})
    write_rows([row], args.out, header + cols)


def cmd_layers(args):
    ds = _load_sample(args, "onion")
    rows = []
    for region in onion_layers(ds):
        for i, pid in zip(region.members, region.ids):
            rows.append({"index": int(i), "point_id": pid, "layer": region.info["layer"]})
    rows.sort(key=lambda r: r["index"])
    write_rows(rows, args.out, ("index", "point_id", "layer"))


def _plan(args, **overrides):
    try:
        plan = ExperimentPlan.from_json(args.plan) if args.plan else ExperimentPlan(**overrides)
    except OSError as exc:
        raise DataError(f"cannot read plan: {exc.strerror}", path=args.plan) from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc.msg}", path=args.plan) from exc
    except TypeError as exc:
        raise DataError(f"invalid plan: {exc}", path=args.plan) from exc
    return plan


def cmd_bench(args):
    plan = _plan(args)
    plan.workers = min(plan.workers, _threads(args))
    unknown = [nt for nt in plan.notions if nt not in NOTIONS or nt == "lens-ordinal"]
    if unknown:
        raise UsageError(f"cannot time {', '.join(unknown)}; supported notions: "
                         f"{', '.join(n for n in NOTIONS if n != 'lens-ordinal')}")
    rows = run_timing(plan)
    write_rows(rows, args.out, TIMING_HEADER)


def cmd_rtd_study(args):
    plan = _plan(args, dims=(2, 3, 4, 5), sizes=(50, 100, 200, 300), replicates=10)
    write_rows(run_rtd_accuracy(plan), args.out, RTD_HEADER)


def cmd_invariance(args):
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rows = run_invariance_suite(args.seed, args.trials)
    write_rows(rows, args.out, INVARIANCE_HEADER)
    return EXIT_OK if all(r["passed"] == r["trials"] for r in rows) else 1


COMMANDS = {"compute": cmd_compute, "region": cmd_region, "median": cmd_median, "layers": cmd_layers,
            "bench": cmd_bench, "rtd-study": cmd_rtd_study, "invariance": cmd_invariance}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse(argv)
        return COMMANDS[args.command](args) or EXIT_OK
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, UnsupportedMethodError) as exc:
        print(f"depthkit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, LocalizationError, DepthkitError, ValueError) as exc:
        print(f"depthkit: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
