"""Dense-tableau primal simplex for small and medium linear programs.

Variables may carry finite or infinite bounds; bounds are handled implicitly
(nonbasic variables sit at a bound), so box constraints never become rows.
Phase 1 minimises the sum of artificial variables; phase 2 keeps the
artificials fixed at zero. Pivoting uses the largest reduced cost and falls
back to Bland's smallest-index rule after a run of degenerate pivots, which
rules out cycling.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"

_SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class LpProblem:
    """``minimize c @ x`` subject to ``A[i] @ x  (senses[i])  b[i]`` and bounds.

    ``lower``/``upper`` default to 0 and +inf. Use ``-np.inf`` for a free
    lower bound.
    """

    c: np.ndarray
    A: np.ndarray
    senses: Sequence[str]
    b: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        A = np.asarray(self.A, dtype=float)
        if A.ndim == 1 and A.size == 0:
            A = A.reshape(0, c.size)
        b = np.asarray(self.b, dtype=float).ravel()
        n = c.size
        if A.ndim != 2 or A.shape[1] != n:
            raise ValueError(f"constraint matrix shape {A.shape} does not match {n} variables")
        if b.size != A.shape[0] or len(self.senses) != A.shape[0]:
            raise ValueError("b and senses must have one entry per constraint row")
        for s in self.senses:
            if s not in _SENSES:
                raise ValueError(f"unknown constraint sense {s!r}")
        lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, float).ravel()
        upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, float).ravel()
        if lower.size != n or upper.size != n:
            raise ValueError("bounds must have one entry per variable")
        for arr in (c, A, b):
            if not np.all(np.isfinite(arr)):
                raise ValueError("LP coefficients must be finite")
        if np.any(lower == np.inf) or np.any(upper == -np.inf):
            raise ValueError("invalid bounds")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "senses", tuple(self.senses))
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def n_vars(self) -> int:
        return self.c.size

    def residuals(self, x: np.ndarray) -> np.ndarray:
        """Constraint violations of ``x`` (all entries <= 0 when feasible)."""
        ax = self.A @ x
        viol = []
        for i, s in enumerate(self.senses):
            if s == "<=":
                viol.append(ax[i] - self.b[i])
            elif s == ">=":
                viol.append(self.b[i] - ax[i])
            else:
                viol.append(abs(ax[i] - self.b[i]))
        viol.extend(self.lower - x)
        viol.extend(x - self.upper)
        return np.asarray(viol)


@dataclass
class LpSolution:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    iterations: int = 0
    reduced_costs: np.ndarray | None = None
    certified: bool = False
    info: dict = field(default_factory=dict)


class _Tableau:
    """Bounded-variable tableau over variables in ``[0, ub]``."""

    def __init__(self, A, b, ub, basis, cost, refactor_every=64, at_upper=None):
        self.A0 = A
        self.b0 = b
        self.ub = ub
        self.basis = np.array(basis)
        m, N = A.shape
        self.at_upper = np.zeros(N, dtype=bool) if at_upper is None else at_upper.copy()
        self.refactor_every = refactor_every
        self.pivots_since_refactor = 0
        self.refactor()
        self.set_cost(cost)

    def refactor(self):
        B = self.A0[:, self.basis]
        self.T = np.linalg.solve(B, self.A0)
        nonbasic_at_ub = np.where(self.at_upper, self.ub, 0.0)
        nonbasic_at_ub[self.basis] = 0.0
        rhs = self.b0 - self.A0 @ nonbasic_at_ub
        self.xB = np.linalg.solve(B, rhs)
        self.pivots_since_refactor = 0

    def set_cost(self, cost):
        self.cost = cost
        self.d = cost - cost[self.basis] @ self.T

    def values(self):
        x = np.where(self.at_upper, self.ub, 0.0)
        x[self.basis] = self.xB
        return x

    def pivot(self, r, j):
        T = self.T
        piv = T[r, j]
        T[r] /= piv
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.d -= self.d[j] * T[r]
        self.basis[r] = j
        self.pivots_since_refactor += 1
        if self.pivots_since_refactor >= self.refactor_every:
            self.refactor()
            self.set_cost(self.cost)


def _simplex(tab: _Tableau, allowed: np.ndarray, max_iter: int, tol: float,
             bland_after: int):
    """Run primal simplex iterations on ``tab``; returns (status, iterations)."""
    use_bland = bland_after <= 0
    degenerate_run = 0
    it = 0
    N = tab.T.shape[1]
    basic = np.zeros(N, dtype=bool)
    while it < max_iter:
        basic[:] = False
        basic[tab.basis] = True
        d = tab.d
        improving = allowed & ~basic & (
            ((~tab.at_upper) & (d < -tol) & (tab.ub > 0)) | (tab.at_upper & (d > tol))
        )
        cand = np.flatnonzero(improving)
        if cand.size == 0:
            return OPTIMAL, it
        if use_bland:
            j = int(cand[0])
        else:
            j = int(cand[np.argmax(np.abs(d[cand]))])
        direction = -1.0 if tab.at_upper[j] else 1.0
        # x_B(theta) = xB - direction * theta * T[:, j]
        col = direction * tab.T[:, j]
        ubB = tab.ub[tab.basis]
        theta = tab.ub[j]
        leave = -1
        leave_to_upper = False
        ptol = 1e-11
        with np.errstate(divide="ignore", invalid="ignore"):
            dec = col > ptol
            ratios_low = np.where(dec, tab.xB / np.where(dec, col, 1.0), np.inf)
            inc = (col < -ptol) & np.isfinite(ubB)
            ratios_up = np.where(inc, (ubB - tab.xB) / np.where(inc, -col, 1.0), np.inf)
        ratios_low = np.maximum(ratios_low, 0.0)
        ratios_up = np.maximum(ratios_up, 0.0)
        best = min(ratios_low.min(initial=np.inf), ratios_up.min(initial=np.inf))
        if best < theta:
            theta = best
            ties_low = np.flatnonzero(ratios_low <= best + 1e-12 * max(1.0, best))
            ties_up = np.flatnonzero(ratios_up <= best + 1e-12 * max(1.0, best))
            rows = np.concatenate([ties_low, ties_up])
            if use_bland:
                # smallest basic variable index among tied rows
                r = int(rows[np.argmin(tab.basis[rows])])
            else:
                # largest pivot magnitude among ties for stability
                r = int(rows[np.argmax(np.abs(col[rows]))])
            leave = r
            leave_to_upper = r in set(ties_up.tolist()) and r not in set(ties_low.tolist())
        if not np.isfinite(theta):
            return UNBOUNDED, it
        it += 1
        if theta <= 1e-12:
            degenerate_run += 1
            if not use_bland and degenerate_run >= bland_after:
                use_bland = True
        else:
            degenerate_run = 0
        tab.xB -= theta * col
        if leave < 0:
            # bound flip of the entering variable
            tab.at_upper[j] = not tab.at_upper[j]
            continue
        old = tab.basis[leave]
        entering_value = (tab.ub[j] - theta) if tab.at_upper[j] else theta
        tab.at_upper[old] = leave_to_upper
        tab.at_upper[j] = False
        tab.pivot(leave, j)
        tab.xB[leave] = entering_value
        if tab.pivots_since_refactor == 0:
            # refactor recomputed xB from scratch; keep it
            pass
    return ITERATION_LIMIT, it


def lp_solve(problem: LpProblem, *, max_iter: int = 50_000, tol: float = 1e-9,
             pivot_rule: str = "auto", start_at_upper=None) -> LpSolution:
    """Solve a linear program with the bounded-variable simplex method.

    ``pivot_rule`` is ``"bland"`` (smallest index throughout), ``"dantzig"``
    (largest reduced cost, Bland after 50 degenerate pivots in a row), or
    ``"auto"`` (same as ``"dantzig"``).

    Infeasible and unbounded problems are reported through ``status``.
    An optimal solution is returned with ``certified=True`` only if it
    satisfies every constraint and bound within 1e-9 (relative to the
    problem scale) and all reduced costs have the optimal sign within
    1e-9.

    ``start_at_upper`` optionally marks variables with two finite bounds
    that should start nonbasic at their upper bound instead of the lower
    one; a good guess shortens phase 1 considerably.
    """
    if pivot_rule not in ("auto", "bland", "dantzig"):
        raise ValueError(f"unknown pivot rule {pivot_rule!r}")
    bland_after = 0 if pivot_rule == "bland" else 50
    p = problem
    n = p.n_vars
    m = p.A.shape[0]

    # Map every original variable onto one or two variables in [0, ub].
    cols = []      # (orig index, sign, shift)
    new_ub = []
    shift = np.zeros(n)
    for k in range(n):
        lo, hi = p.lower[k], p.upper[k]
        if np.isfinite(lo):
            cols.append((k, 1.0))
            new_ub.append(hi - lo)
            shift[k] = lo
        elif np.isfinite(hi):
            cols.append((k, -1.0))
            new_ub.append(np.inf)
            shift[k] = hi
        else:
            cols.append((k, 1.0))
            new_ub.append(np.inf)
            cols.append((k, -1.0))
            new_ub.append(np.inf)
    if np.any(np.asarray(new_ub) < -tol):
        return LpSolution(INFEASIBLE, info={"reason": "empty bound interval"})
    new_ub = np.maximum(np.asarray(new_ub, dtype=float), 0.0)
    M = np.zeros((m, len(cols)))
    c2 = np.zeros(len(cols))
    for t, (k, s) in enumerate(cols):
        M[:, t] = s * p.A[:, k]
        c2[t] = s * p.c[k]
    rhs = p.b - p.A @ shift
    # slack / surplus columns
    n_slack = sum(1 for s in p.senses if s != "=")
    S = np.zeros((m, n_slack))
    q = 0
    for i, s in enumerate(p.senses):
        if s == "<=":
            S[i, q] = 1.0
            q += 1
        elif s == ">=":
            S[i, q] = -1.0
            q += 1
    A1 = np.hstack([M, S])
    ub1 = np.concatenate([new_ub, np.full(n_slack, np.inf)])
    c1 = np.concatenate([c2, np.zeros(n_slack)])
    up1 = np.zeros(A1.shape[1], dtype=bool)
    if start_at_upper is not None:
        start_at_upper = np.asarray(start_at_upper, dtype=bool).ravel()
        if start_at_upper.size != n:
            raise ValueError("start_at_upper needs one flag per variable")
        for t, (k, s_) in enumerate(cols):
            up1[t] = start_at_upper[k] and s_ > 0 and np.isfinite(ub1[t])
    # row signs are chosen so that the artificials start nonnegative
    rhs_start = rhs - A1[:, up1] @ ub1[up1]
    sign = np.where(rhs_start < 0, -1.0, 1.0)
    A1 = A1 * sign[:, None]
    rhs = rhs * sign
    N1 = A1.shape[1]
    if m == 0:
        # pure bound problem: each variable goes to the bound that lowers cost
        x1 = np.where(c1 < 0, ub1, 0.0)
        if np.any(~np.isfinite(x1)):
            return LpSolution(UNBOUNDED)
        return _finish(p, cols, shift, x1[: len(cols)], c1, 0, tol, np.asarray(c1))
    A_full = np.hstack([A1, np.eye(m)])
    ub_full = np.concatenate([ub1, np.full(m, np.inf)])
    basis = np.arange(N1, N1 + m)
    phase1_cost = np.concatenate([np.zeros(N1), np.ones(m)])
    tab = _Tableau(A_full, rhs, ub_full, basis, phase1_cost,
                   at_upper=np.concatenate([up1, np.zeros(m, dtype=bool)]))
    allowed = np.ones(N1 + m, dtype=bool)
    status, it1 = _simplex(tab, allowed, max_iter, tol, bland_after)
    if status == ITERATION_LIMIT:
        return LpSolution(ITERATION_LIMIT, iterations=it1)
    scale = max(1.0, float(np.abs(rhs).max(initial=0.0)))
    infeas = float(tab.values()[N1:].sum())
    if infeas > 1e-9 * scale:
        return LpSolution(INFEASIBLE, iterations=it1, info={"phase1_residual": infeas})
    # phase 2: artificials pinned at zero
    tab.ub = ub_full.copy()
    tab.ub[N1:] = 0.0
    tab.refactor()
    tab.set_cost(np.concatenate([c1, np.zeros(m)]))
    allowed[N1:] = False
    status, it2 = _simplex(tab, allowed, max_iter - it1, tol, bland_after)
    if status != OPTIMAL:
        return LpSolution(status, iterations=it1 + it2)
    tab.refactor()
    tab.set_cost(tab.cost)
    x_full = tab.values()
    return _finish(p, cols, shift, x_full[: len(cols)], c1, it1 + it2, tol,
                   tab.d[: len(cols)], tab=tab, n_struct=len(cols))


def _finish(p, cols, shift, xs, c_std, iterations, tol, d_struct, tab=None, n_struct=None):
    x = shift.copy()
    for t, (k, s) in enumerate(cols):
        x[k] += s * xs[t]
    obj = float(p.c @ x)
    scale = max(1.0, float(np.abs(p.b).max(initial=0.0)), float(np.abs(x).max(initial=0.0)))
    feasible = bool(np.all(p.residuals(x) <= 1e-9 * scale))
    optimal_signs = True
    if tab is not None:
        basic = np.zeros(tab.T.shape[1], dtype=bool)
        basic[tab.basis] = True
        dd = tab.d
        real = np.zeros_like(basic)
        real[: tab.T.shape[1] - tab.T.shape[0]] = True
        movable = real & ~basic & (tab.ub > 0)
        cscale = max(1.0, float(np.abs(tab.cost).max(initial=0.0)))
        bad = movable & (((~tab.at_upper) & (dd < -tol * cscale)) | (tab.at_upper & (dd > tol * cscale)))
        optimal_signs = not bool(bad.any())
    rc = np.zeros(p.n_vars)
    for t, (k, s) in enumerate(cols):
        rc[k] += s * d_struct[t] if t < len(d_struct) else 0.0
    return LpSolution(OPTIMAL, x=x, objective=obj, iterations=iterations,
                      reduced_costs=rc, certified=feasible and optimal_signs)
