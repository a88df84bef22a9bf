"""Dense two-phase simplex with Bland's rule, generic over the scalar field.

Float mode uses ordinary doubles with a fixed pivot tolerance; exact mode
runs the identical algorithm over Q(sqrt(2)) (``Rad2``), giving zero
duality gap and bit-reproducible optima.  Problem sizes here are tiny
(tens of rows), so a dense tableau is entirely adequate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..exactnum import Rad2

FLOAT_TOL = 1e-9


@dataclass
class LinearProgramInstance:
    """max objective . x  subject to  A_ub x <= b_ub,  A_eq x = b_eq.

    All variables are free unless ``bounds`` gives (lo, hi) pairs; ``None``
    means unbounded on that side.
    """

    objective: list
    a_ub: list = field(default_factory=list)
    b_ub: list = field(default_factory=list)
    a_eq: list = field(default_factory=list)
    b_eq: list = field(default_factory=list)
    bounds: list | None = None  # per-variable (lo, hi); None -> all free

    def __post_init__(self):
        n = len(self.objective)
        for row in list(self.a_ub) + list(self.a_eq):
            if len(row) != n:
                raise ValueError("constraint row has wrong width")
        if len(self.a_ub) != len(self.b_ub) or len(self.a_eq) != len(self.b_eq):
            raise ValueError("constraint matrix / rhs size mismatch")
        if self.bounds is not None and len(self.bounds) != n:
            raise ValueError("bounds size mismatch")

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass
class LPResult:
    status: str  # optimal | infeasible | unbounded
    optimum: object | None
    x: list | None
    dual_ub: list | None
    dual_eq: list | None
    residual: float = 0.0
    duality_gap: object = 0.0


def _to_exact(v):
    if isinstance(v, Rad2):
        return v
    if isinstance(v, (int, Fraction)):
        return Rad2(v)
    if isinstance(v, float):
        frac = Fraction(v).limit_denominator(10 ** 12)
        if float(frac) != v:
            raise ValueError(f"{v} is not exactly representable for exact mode")
        return Rad2(frac)
    raise TypeError(f"cannot use {v!r} in exact mode")


class _Tableau:
    """Simplex tableau over an abstract ordered field."""

    def __init__(self, rows, rhs, zero, tol):
        self.rows = rows          # list of lists, m x n
        self.rhs = rhs            # list, length m
        self.zero = zero
        self.tol = tol
        self.m = len(rows)
        self.n = len(rows[0]) if rows else 0
        self.basis = [None] * self.m

    def _is_pos(self, v):
        return v > self.tol

    def _is_neg(self, v):
        return v < -self.tol

    def pivot(self, r, c):
        piv = self.rows[r][c]
        inv = 1 / piv if isinstance(piv, Rad2) else 1.0 / piv
        self.rows[r] = [v * inv for v in self.rows[r]]
        self.rhs[r] = self.rhs[r] * inv
        for i in range(self.m):
            if i == r:
                continue
            f = self.rows[i][c]
            if f == self.zero:
                continue
            self.rows[i] = [a - f * b for a, b in zip(self.rows[i], self.rows[r])]
            self.rhs[i] = self.rhs[i] - f * self.rhs[r]
        self.basis[r] = c

    def reduced_costs(self, costs):
        """cost row z_j - c_j ... returned as c_j - sum_i c_B[i] rows[i][j]."""
        red = list(costs)
        offset = self.zero
        for i, bi in enumerate(self.basis):
            cb = costs[bi]
            if cb == self.zero:
                continue
            red = [rj - cb * aij for rj, aij in zip(red, self.rows[i])]
            offset = offset + cb * self.rhs[i]
        return red, offset

    def optimize(self, costs, allowed, never_unbounded=False):
        """Minimize costs over the current basic feasible solution.

        Bland's rule: entering variable is the lowest-index allowed column
        with negative reduced cost; leaving row breaks ratio ties by lowest
        basis index.  Returns "optimal" or "unbounded".

        With ``never_unbounded`` (phase 1, whose objective is bounded below
        by zero) a failed ratio test can only be floating-point noise in a
        degenerate column, so that column is retired and the walk continues.
        """
        allowed = list(allowed)
        while True:
            red, _ = self.reduced_costs(costs)
            enter = -1
            for j in range(self.n):
                if allowed[j] and self._is_neg(red[j]):
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best_ratio = None
            for i in range(self.m):
                a = self.rows[i][enter]
                if self._is_pos(a):
                    ratio = self.rhs[i] / a
                    if (best_ratio is None or ratio < best_ratio
                            or (ratio == best_ratio
                                and self.basis[i] < self.basis[leave])):
                        best_ratio = ratio
                        leave = i
            if leave < 0:
                if never_unbounded:
                    allowed[enter] = False
                    continue
                return "unbounded"
            self.pivot(leave, enter)


def solve_lp(problem: LinearProgramInstance, mode: str = "float") -> LPResult:
    """Solve an LP instance; ``mode`` is "float" or "exact_rad2"."""
    if mode not in ("float", "exact_rad2"):
        raise ValueError(f"unknown mode {mode!r}")
    exact = mode == "exact_rad2"
    conv = _to_exact if exact else float
    zero = Rad2() if exact else 0.0
    one = Rad2(1) if exact else 1.0
    tol = zero if exact else FLOAT_TOL

    n = problem.num_vars
    bounds = problem.bounds or [(None, None)] * n
    for lo, hi in bounds:
        if lo not in (None, 0) or hi is not None:
            raise NotImplementedError("only free or nonnegative variables")

    # Columns: for a free variable x -> x+ - x-; nonnegative -> single column.
    col_of_var = []   # var -> (plus_col, minus_col or None)
    ncols = 0
    for lo, _hi in bounds:
        if lo is None:
            col_of_var.append((ncols, ncols + 1))
            ncols += 2
        else:
            col_of_var.append((ncols, None))
            ncols += 1

    def expand_row(row):
        out = [zero] * ncols
        for v, a in enumerate(row):
            a = conv(a)
            plus, minus = col_of_var[v]
            out[plus] = out[plus] + a
            if minus is not None:
                out[minus] = out[minus] - a
        return out

    m_ub = len(problem.a_ub)
    m_eq = len(problem.a_eq)
    m = m_ub + m_eq
    slack0 = ncols
    ncols_slack = ncols + m_ub
    art0 = ncols_slack
    total = ncols_slack + m

    rows = []
    rhs = []
    for i in range(m_ub):
        row = expand_row(problem.a_ub[i]) + [zero] * (m_ub + m)
        row[slack0 + i] = one
        rows.append(row)
        rhs.append(conv(problem.b_ub[i]))
    for i in range(m_eq):
        row = expand_row(problem.a_eq[i]) + [zero] * (m_ub + m)
        rows.append(row)
        rhs.append(conv(problem.b_eq[i]))
    # normalize rhs >= 0 (pure re-scaling of the equations), then attach one
    # artificial per row; flips are remembered for dual sign recovery
    flipped = [False] * m
    for i in range(m):
        if rhs[i] < zero:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
            flipped[i] = True
        rows[i][art0 + i] = one

    tab = _Tableau(rows, rhs, zero, tol)
    for i in range(m):
        tab.basis[i] = art0 + i

    # Phase 1: drive artificials to zero.
    phase1 = [zero] * total
    for i in range(m):
        phase1[art0 + i] = one
    # price out the initial basis
    allowed = [True] * total
    status = tab.optimize(phase1, allowed, never_unbounded=True)
    assert status == "optimal"
    _, p1_val = tab.reduced_costs(phase1)
    art_sum = sum((tab.rhs[i] for i in range(m) if tab.basis[i] >= art0), zero)
    feas_tol = zero if exact else 1e-7
    if art_sum > feas_tol:
        return LPResult("infeasible", None, None, None, None)
    # pivot lingering artificials out of the basis where possible
    for i in range(m):
        if tab.basis[i] >= art0:
            for j in range(ncols_slack):
                if tab.rows[i][j] != zero and (exact or abs(tab.rows[i][j]) > 1e-7):
                    tab.pivot(i, j)
                    break

    # Phase 2: maximize the objective = minimize its negation.
    costs = [zero] * total
    obj = expand_row([conv(c) for c in problem.objective])
    for j in range(ncols):
        costs[j] = -obj[j]
    allowed = [True] * ncols_slack + [False] * m
    status = tab.optimize(costs, allowed)
    if status == "unbounded":
        return LPResult("unbounded", None, None, None, None)

    # Recover the solution.
    x = [zero] * n
    for v, (plus, minus) in enumerate(col_of_var):
        val = zero
        for i in range(m):
            if tab.basis[i] == plus:
                val = val + tab.rhs[i]
            elif minus is not None and tab.basis[i] == minus:
                val = val - tab.rhs[i]
        x[v] = val
    red, offset = tab.reduced_costs(costs)
    # offset accumulates c_B . rhs, the minimized value of -objective
    optimum = -offset

    # Duals of the original (max) problem from reduced costs of the zero-cost
    # artificial columns: for the minimized -objective the artificial of row i
    # has reduced cost -y'_i, and the max-problem dual is y_i = -y'_i = red.
    dual_ub = []
    for i in range(m_ub):
        y = red[art0 + i]
        dual_ub.append(-y if flipped[i] else y)
    dual_eq = []
    for i in range(m_eq):
        y = red[art0 + m_ub + i]
        dual_eq.append(-y if flipped[m_ub + i] else y)
    return _finalize(problem, tab, x, optimum, dual_ub, dual_eq, exact)


def _finalize(problem, tab, x, optimum, dual_ub, dual_eq, exact):
    zero = Rad2() if exact else 0.0
    # primal residuals
    def dot(row, xs):
        s = zero
        for a, v in zip(row, xs):
            s = s + (_to_exact(a) if exact else float(a)) * v
        return s

    resid = 0.0
    for row, b in zip(problem.a_ub, problem.b_ub):
        viol = float(dot(row, x)) - float(b)
        resid = max(resid, viol)
    for row, b in zip(problem.a_eq, problem.b_eq):
        resid = max(resid, abs(float(dot(row, x)) - float(b)))

    # duality gap via the dual objective  y_ub . b_ub + y_eq . b_eq
    dual_val = zero
    for y, b in zip(dual_ub, problem.b_ub):
        dual_val = dual_val + y * (_to_exact(b) if exact else float(b))
    for y, b in zip(dual_eq, problem.b_eq):
        dual_val = dual_val + y * (_to_exact(b) if exact else float(b))
    gap = dual_val - optimum
    return LPResult("optimal", optimum, x, dual_ub, dual_eq,
                    residual=resid, duality_gap=gap)
