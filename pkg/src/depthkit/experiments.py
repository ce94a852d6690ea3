"""Computational studies: timing curves, random Tukey depth accuracy, invariance.

All studies draw standard normal samples from seeded streams, so a plan
and a seed determine every number except wall-clock times.
"""
from __future__ import annotations

import itertools
import json
import math
import multiprocessing as mp
import queue
import statistics
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .api import APPROX, EXACT, depth
from .approx import directions_for, ApproxConfig
from .dataset import as_points
from .depth import (
    beta_skeleton_depth,
    halfspace_count,
    halfspace_depth_all,
    lp_depth,
    mahalanobis_depth,
    oja_depth,
    onion_depth_raw,
    simplicial_count,
    spatial_depth,
    zonoid_depth,
)
from .depth._common import cofactor_normals
from .depth.halfspace import min_open_count
from .numerics import RandomSource
from .scatter import moment_scatter

TIMING_NOTIONS = ("mahalanobis", "lp", "spatial", "halfspace", "simplicial", "oja",
                  "zonoid", "skeleton", "onion", "projection")
TIMING_HEADER = ("notion", "method", "d", "n", "mean_time_ns", "sd_time_ns", "completed", "censored")
RTD_HEADER = ("d", "n", "replicates", "points", "hit_rate", "hit_rate_kind",
              "abs_err_min", "abs_err_q1", "abs_err_median", "abs_err_q3", "abs_err_max",
              "rel_err_min", "rel_err_q1", "rel_err_median", "rel_err_q3", "rel_err_max")
INVARIANCE_HEADER = ("notion", "transform", "expect", "trials", "passed", "max_deviation")


@dataclass
class ExperimentPlan:
    """Grid and budget of a study.

    JSON form: an object with any of the field names below, e.g.
    ``{"notions": ["halfspace"], "dims": [2, 3], "sizes": [50, 100],
    "replicates": 5, "queries": 10, "k": 1000, "seed": 1, "timeout": 30}``.
    """

    notions: tuple = TIMING_NOTIONS
    dims: tuple = (2, 3, 4, 5)
    sizes: tuple = (50, 100, 200, 400, 700, 1000)
    replicates: int = 30
    queries: int = 25
    k: int = 1000
    seed: int = 0
    timeout: float = 60.0          # seconds per timing cell
    inner_repeats: int = 3         # timing: median of this many runs per query
    workers: int = 1               # timing cells run concurrently
    exact_max_work: float = 1e8    # rtd study: exact depths while n^d stays below this

    def __post_init__(self):
        self.notions = tuple(self.notions)
        self.dims = tuple(int(d) for d in self.dims)
        self.sizes = tuple(int(n) for n in self.sizes)
        for name in ("replicates", "queries", "k", "inner_repeats", "workers"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be positive")
        if any(d < 1 for d in self.dims) or any(n < 1 for n in self.sizes):
            raise ValueError("dims and sizes must be positive")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")

    @classmethod
    def from_json(cls, path) -> "ExperimentPlan":
        with open(path) as fh:
            raw = json.load(fh)
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown plan fields: {', '.join(sorted(unknown))}")
        return cls(**raw)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def normal_sample(seed: int, *key: int, shape) -> np.ndarray:
    return RandomSource(seed).split(*key).generator().standard_normal(shape)


# ---------------------------------------------------------------- timing

def timing_method(notion: str) -> str:
    return "exact" if notion in EXACT else "approx"


def _timing_worker(notion, d, n, plan_dict, out):
    plan = ExperimentPlan(**plan_dict)
    method = timing_method(notion)
    try:
        for r in range(plan.replicates):
            X = normal_sample(plan.seed, d, n, r, 0, shape=(n, d))
            Q = normal_sample(plan.seed, d, n, r, 1, shape=(plan.queries, d))
            for q in Q:
                runs = []
                for _ in range(plan.inner_repeats):
                    t0 = time.perf_counter_ns()
                    depth(q, X, notion, method, k=plan.k, seed=plan.seed)
                    runs.append(time.perf_counter_ns() - t0)
                out.put(("t", int(statistics.median(runs))))
        out.put(("done", None))
    except Exception as exc:  # reported to the parent, which records the cell as failed
        out.put(("error", f"{type(exc).__name__}: {exc}"))


def _context():
    try:
        return mp.get_context("fork")
    except ValueError:
        return mp.get_context("spawn")


class _Cell:
    def __init__(self, ctx, notion, d, n, plan):
        self.notion, self.d, self.n = notion, d, n
        self.queue = ctx.Queue()
        self.proc = ctx.Process(target=_timing_worker, args=(notion, d, n, asdict(plan), self.queue),
                                daemon=True)
        self.times = []
        self.error = None
        self.finished = False
        self.proc.start()
        self.deadline = time.monotonic() + plan.timeout

    def drain(self, wait):
        try:
            kind, val = self.queue.get(timeout=wait)
        except queue.Empty:
            return
        if kind == "t":
            self.times.append(val)
        elif kind == "done":
            self.finished = True
        else:
            self.error = val
            self.finished = True

    def stop(self):
        if self.proc.is_alive():
            self.proc.terminate()
        self.proc.join(timeout=5)
        # pick up anything sent before termination
        while True:
            try:
                kind, val = self.queue.get_nowait()
            except (queue.Empty, OSError, EOFError):
                break
            if kind == "t":
                self.times.append(val)

    def row(self):
        t = self.times
        return {
            "notion": self.notion, "method": timing_method(self.notion), "d": self.d, "n": self.n,
            "mean_time_ns": float(np.mean(t)) if t else float("nan"),
            "sd_time_ns": float(np.std(t)) if t else float("nan"),
            "completed": len(t), "censored": not t,
            **({"error": self.error} if self.error else {}),
        }


def run_timing(plan: ExperimentPlan, progress=None) -> list[dict]:
    """Mean wall time per depth evaluation for every (notion, d, n) cell.

    Each cell runs in its own process on fresh standard normal samples and
    query points; a query's time is the median of ``inner_repeats`` runs.
    The parent stops a cell after ``timeout`` seconds. Cells that finish
    no evaluation in time are marked censored; partially finished cells
    report the mean over what completed (see ``completed``).
    """
    ctx = _context()
    todo = [(nt, d, n) for nt in plan.notions for d in plan.dims for n in plan.sizes]
    rows = {}
    running = []
    while todo or running:
        while todo and len(running) < plan.workers:
            running.append(_Cell(ctx, *todo.pop(0), plan))
        for cell in list(running):
            cell.drain(wait=0.05 / len(running))
            if cell.finished or time.monotonic() > cell.deadline:
                cell.stop()
                running.remove(cell)
                rows[(cell.notion, cell.d, cell.n)] = cell.row()
                if progress:
                    progress(rows[(cell.notion, cell.d, cell.n)])
    return [rows[(nt, d, n)] for nt in plan.notions for d in plan.dims for n in plan.sizes]


def slower(rows, a: str, b: str, d: int, n: int):
    """True if notion ``a`` took longer than ``b`` in cell (d, n); None if undecidable.

    A censored cell counts as slower than any completed one; two censored
    cells cannot be ordered.
    """
    ra = next(r for r in rows if r["notion"] == a and r["d"] == d and r["n"] == n)
    rb = next(r for r in rows if r["notion"] == b and r["d"] == d and r["n"] == n)
    if ra["censored"] and rb["censored"]:
        return None
    if ra["censored"]:
        return True
    if rb["censored"]:
        return False
    return ra["mean_time_ns"] > rb["mean_time_ns"]


# ---------------------------------------------------------------- RTD accuracy

def _loo_counts(X, U):
    """Leave-one-out univariate halfspace counts of every point on every direction, (n, k)."""
    n = X.shape[0]
    out = np.empty((n, U.shape[0]), dtype=np.int32)
    for s in range(0, U.shape[0], 256):
        P = X @ U[s:s + 256].T
        srt = np.sort(P, axis=0)
        for j in range(P.shape[1]):
            le = np.searchsorted(srt[:, j], P[:, j], side="right") - 1
            ge = n - np.searchsorted(srt[:, j], P[:, j], side="left") - 1
            out[:, s + j] = np.minimum(le, ge)
    return out


def _refine_count(y, S, u, rounds=8, m=16):
    """Smallest closed-halfspace count found around direction ``u``.

    Hyperplanes through ``y`` and d-1 of the ``m`` points closest to the
    current best hyperplane are tried in both orientations; the count of
    the open side is achievable for points in general position, so the
    result never drops below the exact count.
    """
    V = S - y
    n, d = V.shape
    best = int(min(np.count_nonzero(V @ u >= 0), np.count_nonzero(V @ u <= 0)))
    for _ in range(rounds):
        near = np.argsort(np.abs(V @ u))[:min(m, n)]
        combos = np.array(list(itertools.combinations(near, d - 1)))
        C = cofactor_normals(V[combos])
        norms = np.linalg.norm(C, axis=1)
        C = C[norms > 0] / norms[norms > 0, None]
        dots = C @ V.T
        tol = 1e-12 * np.abs(V).max()
        pos = np.count_nonzero(dots > tol, axis=1)
        neg = np.count_nonzero(dots < -tol, axis=1)
        cand = np.minimum(pos, neg)
        j = int(np.argmin(cand))
        if cand[j] >= best:
            break
        best = int(cand[j])
        u = C[j] if pos[j] <= neg[j] else -C[j]
    return best


def _quartiles(a):
    if a.size == 0:
        return [float("nan")] * 5
    return [float(v) for v in np.percentile(a, [0, 25, 50, 75, 100])]


def rtd_cell(d: int, n: int, plan: ExperimentPlan, replicates: int | None = None,
             search_directions: int = 20000, search_starts: int = 8) -> dict:
    """Accuracy of random Tukey depth on one (d, n) cell.

    For every sample point, its random Tukey depth (``plan.k`` directions)
    w.r.t. the other points is compared with the exact leave-one-out depth.
    When ``n^d`` exceeds ``plan.exact_max_work`` the exact depths are
    out of reach; a refined search (many more random directions, then
    local hyperplane enumeration started from the ``search_starts`` best
    of them) finds the smallest count it can. Its
    value lies between the exact depth and the random Tukey depth, so the
    hit rate becomes an upper bound (``hit_rate_kind = "upper_bound"``)
    and the errors become lower bounds.
    """
    reps = plan.replicates if replicates is None else replicates
    use_exact = float(n) ** d <= plan.exact_max_work
    hits, abs_err, rel_err = [], [], []
    for r in range(reps):
        X = normal_sample(plan.seed, d, n, r, shape=(n, d))
        U = directions_for(d, ApproxConfig(k=plan.k, seed=plan.seed + r))
        rtd = _loo_counts(X, U).min(axis=1)
        if use_exact:
            ref = np.array([min_open_count(np.delete(X, i, axis=0) - X[i]) for i in range(n)])
        else:
            W = np.vstack([U, directions_for(d, ApproxConfig(k=search_directions, seed=10**6 + plan.seed + r))])
            C = _loo_counts(X, W)
            ref = C.min(axis=1)
            starts = np.argpartition(C, search_starts, axis=1)[:, :search_starts]
            for i in range(n):
                S = np.delete(X, i, axis=0)
                for j in starts[i]:
                    ref[i] = min(ref[i], _refine_count(X[i], S, W[j]))
        hits.append(rtd == ref)
        abs_err.append((rtd - ref) / (n - 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = (rtd - ref) / ref
        rel_err.append(rel[ref > 0])
    hits = np.concatenate(hits)
    abs_err = np.concatenate(abs_err)
    rel_err = np.concatenate(rel_err)
    row = {"d": d, "n": n, "replicates": reps, "points": int(hits.size),
           "hit_rate": float(hits.mean()), "hit_rate_kind": "exact" if use_exact else "upper_bound"}
    for name, vals in (("abs_err", abs_err), ("rel_err", rel_err)):
        for key, v in zip(("min", "q1", "median", "q3", "max"), _quartiles(vals)):
            row[f"{name}_{key}"] = v
    return row


def run_rtd_accuracy(plan: ExperimentPlan, cells=None, progress=None) -> list[dict]:
    """Random Tukey depth hit rates and error quartiles over a (d, n) grid."""
    cells = cells if cells is not None else [(d, n) for d in plan.dims for n in plan.sizes]
    rows = []
    for d, n in cells:
        rows.append(rtd_cell(d, n, plan))
        if progress:
            progress(rows[-1])
    return rows


# ---------------------------------------------------------------- invariance

def random_affine(gen, d, cond_max=50.0):
    while True:
        A = gen.standard_normal((d, d))
        if np.linalg.cond(A) < cond_max:
            return A, gen.standard_normal(d)


def random_similarity(gen, d):
    Q, R = np.linalg.qr(gen.standard_normal((d, d)))
    Q = Q * np.sign(np.diag(R))
    return float(gen.uniform(0.2, 5.0)) * Q, gen.standard_normal(d)


def _push_out_vertex(X, gen):
    """Move one hull vertex outward without crossing a hyperplane through d other points.

    Returns the new sample and the moved index, or None if no vertex can be
    found quickly.
    """
    from scipy.spatial import ConvexHull

    n, d = X.shape
    verts = ConvexHull(X).vertices
    v = int(gen.choice(verts))
    c = X.mean(axis=0)
    direction = X[v] - c
    others = np.delete(np.arange(n), v)
    t_cross = np.inf
    for comb in itertools.combinations(others, d):
        P = X[list(comb)]
        normal = cofactor_normals((P[1:] - P[0])[None])[0]
        denom = normal @ direction
        if abs(denom) < 1e-14:
            continue
        # hyperplane <normal, z - P0> = 0 crossed at X[v] + s * direction
        s = normal @ (P[0] - X[v]) / denom
        if s > 1e-12:
            t_cross = min(t_cross, s)
    step = 1.0 if not np.isfinite(t_cross) else 0.5 * t_cross
    Y = X.copy()
    Y[v] = X[v] + step * direction
    return Y, v


def _close(a, b, rel=1e-9):
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def run_invariance_suite(seed: int = 0, trials: int = 50, n: int = 12) -> list[dict]:
    """Check the invariance matrix on randomized instances.

    Affine maps: halfspace, simplicial and onion counts must match exactly;
    zonoid, Mahalanobis (refitted), model-normalized Oja and the whitened
    L2 and spatial depths within 1e-9 relative. Plain Oja must change under
    a map with |det A| != 1. Similarity maps (orthogonal, shift, uniform
    scale): L2 (up to the scale factor, so compared on ranks), spatial and
    beta-skeleton depths. Combinatorial moves: pushing a hull vertex outward
    leaves halfspace, simplicial and onion depths of the other points
    unchanged.
    """
    gen = RandomSource(seed).split(99).generator()
    results = {}

    def record(notion, transform, expect, ok, dev):
        key = (notion, transform, expect)
        r = results.setdefault(key, {"notion": notion, "transform": transform, "expect": expect,
                                     "trials": 0, "passed": 0, "max_deviation": 0.0})
        r["trials"] += 1
        r["passed"] += int(ok)
        r["max_deviation"] = max(r["max_deviation"], float(dev))

    for t in range(trials):
        d = 2 + t % 2
        X = gen.standard_normal((n, d))
        y = 0.5 * gen.standard_normal(d)
        A, b = random_affine(gen, d)
        XA, yA = X @ A.T + b, A @ y + b

        for name, f in (("halfspace", halfspace_count), ("simplicial", simplicial_count),
                        ("onion", lambda q, S: onion_depth_raw(q, S)[0])):
            u, v = f(y, X), f(yA, XA)
            record(name, "affine", "invariant", u == v, abs(u - v))
        for name, f in (
            ("zonoid", zonoid_depth),
            ("mahalanobis", mahalanobis_depth),
            ("oja-normalized", lambda q, S: oja_depth(q, S, model=moment_scatter(S))),
            ("lp-whitened", lambda q, S: lp_depth(q, S, 2.0, model=moment_scatter(S))),
            ("spatial-whitened", lambda q, S: spatial_depth(q, S, model=moment_scatter(S))),
        ):
            u, v = f(y, X), f(yA, XA)
            record(name, "affine", "invariant", _close(u, v), abs(u - v))
        # plain Oja is not affine invariant once |det A| differs from 1
        A2 = A * (2.0 / abs(np.linalg.det(A))) ** (1.0 / d)
        u, v = oja_depth(y, X), oja_depth(A2 @ y + b, X @ A2.T + b)
        record("oja", "affine", "changes", not _close(u, v), abs(u - v))

        Q, c = random_similarity(gen, d)
        XQ, yQ = X @ Q.T + c, Q @ y + c
        for name, f in (("spatial", spatial_depth),
                        ("skeleton", lambda q, S: beta_skeleton_depth(q, S, 2.0)),
                        ("spherical", lambda q, S: beta_skeleton_depth(q, S, 1.0))):
            u, v = f(y, X), f(yQ, XQ)
            record(name, "similarity", "invariant", _close(u, v), abs(u - v))
        # L2 depth is invariant under rigid motions; uniform scaling keeps its ordering
        Qr, _ = np.linalg.qr(gen.standard_normal((d, d)))
        u, v = lp_depth(y, X), lp_depth(Qr @ y + c, X @ Qr.T + c)
        record("lp", "rigid", "invariant", _close(u, v), abs(u - v))
        s = float(np.linalg.norm(Q[:, 0]))
        du = np.array([lp_depth(x, X) for x in X])
        dv = np.array([lp_depth(x, XQ) for x in XQ])
        same_order = np.array_equal(np.argsort(du, kind="stable"), np.argsort(dv, kind="stable"))
        record("lp", "similarity-ranking", "invariant", same_order or math.isclose(s, 1.0), 0.0)

        Y, v_idx = _push_out_vertex(X, gen)
        others = [i for i in range(n) if i != v_idx]
        for name, f in (("halfspace", halfspace_count), ("simplicial", simplicial_count),
                        ("onion", lambda q, S: onion_depth_raw(q, S)[0])):
            dev = max(abs(f(X[i], X) - f(Y[i], Y)) for i in others)
            record(name, "combinatorial", "invariant", dev == 0, dev)
    return list(results.values())


# ---------------------------------------------------------------- robustness

def run_contamination_study(seed: int = 0, trials: int = 100, n: int = 40, d: int = 2) -> dict:
    """Effect of gross outliers on the zonoid median and the halfspace-deepest point.

    In each trial ``floor(n / (d + 2))`` randomly chosen points are replaced
    by points at 1e6 times the data diameter. Reports how often the mean
    (the zonoid median) moves by more than the diameter, how often the
    deepest sample point under halfspace depth changes identity (no overlap
    between the clean and contaminated sets of deepest points), and the
    largest shift of the halfspace-deepest point relative to the diameter.
    """
    gen = RandomSource(seed).split(7).generator()
    m = n // (d + 2)
    mean_moved = 0
    deepest_changed = 0
    max_shift = 0.0
    for _ in range(trials):
        X = gen.standard_normal((n, d))
        diam = float(np.linalg.norm(X.max(axis=0) - X.min(axis=0)))
        bad = gen.choice(n, size=m, replace=False)
        dirs = gen.standard_normal((m, d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        Y = X.copy()
        Y[bad] = X.mean(axis=0) + 1e6 * diam * dirs
        if np.linalg.norm(Y.mean(axis=0) - X.mean(axis=0)) > diam:
            mean_moved += 1
        clean = halfspace_depth_all(X)
        dirty = halfspace_depth_all(Y)
        keep = np.setdiff1d(np.arange(n), bad)
        best_clean = np.flatnonzero(clean == clean.max())
        best_dirty = keep[dirty[keep] == dirty[keep].max()]
        if not set(best_clean.tolist()) & set(best_dirty.tolist()):
            deepest_changed += 1
        shift = np.linalg.norm(Y[best_dirty].mean(axis=0) - X[best_clean].mean(axis=0)) / diam
        max_shift = max(max_shift, float(shift))
    return {"trials": trials, "n": n, "d": d, "replaced": m, "mean_moved_rate": mean_moved / trials,
            "deepest_changed_rate": deepest_changed / trials, "deepest_max_shift": max_shift}
