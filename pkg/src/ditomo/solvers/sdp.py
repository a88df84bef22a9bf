"""Single-block real symmetric SDPs solved by first-order operator splitting.

The instances handled here have one PSD block of order ``dim``, a linear
objective over its entries, and sparse trace-equality constraints
(optionally a few trace inequalities).  The solve is delegated to SCS,
an ADMM-type operator-splitting solver that alternates a PSD-cone
projection (by eigen-decomposition) with an affine projection -- the
right regime for our moment-matrix programs, which have a medium-sized
block but tens of thousands of sparse equality constraints.

Accuracy is never claimed silently: every result carries the primal and
dual objectives, the feasibility residuals and the duality gap reported
by the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scs

SQRT2 = math.sqrt(2.0)

#: sparse symmetric matrix: list of (row, col, value) with row <= col; the
#: (col, row) mirror entry is implied and must not be given explicitly.
SparseSym = list


@dataclass
class SemidefiniteProgramInstance:
    """optimize Tr(C Gamma) over Gamma >= 0 (PSD) subject to trace constraints.

    ``objective`` and all constraint matrices are sparse symmetric
    (upper-triangle entry lists); ``sense`` is "max" or "min".
    Constraints read Tr(A Gamma) = rhs, inequalities Tr(A Gamma) >= rhs.
    """

    dim: int
    objective: SparseSym
    constraints: list = field(default_factory=list)    # (SparseSym, rhs)
    inequalities: list = field(default_factory=list)   # (SparseSym, rhs), >=
    sense: str = "max"

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        if self.dim < 1:
            raise ValueError("dim must be positive")
        for i, j, _v in self.objective:
            self._check_pos(i, j)
        for mat, _rhs in list(self.constraints) + list(self.inequalities):
            for i, j, _v in mat:
                self._check_pos(i, j)

    def _check_pos(self, i, j):
        if not (0 <= i <= j < self.dim):
            raise ValueError(f"entry ({i},{j}) outside upper triangle of "
                             f"order-{self.dim} block")


@dataclass
class SDPResult:
    status: str            # optimal | inaccurate | infeasible | unbounded | failed
    optimum: float | None
    gamma: np.ndarray | None
    primal_objective: float | None = None
    dual_objective: float | None = None
    residual_primal: float | None = None
    residual_dual: float | None = None
    duality_gap: float | None = None
    iterations: int | None = None

    @property
    def ok(self) -> bool:
        return self.status in ("optimal", "inaccurate")


def _svec_index(dim):
    """Map (i, j) with i <= j to the position in the scaled upper-tri vector."""
    idx = {}
    k = 0
    for i in range(dim):
        for j in range(i, dim):
            idx[(i, j)] = k
            k += 1
    return idx


def _svec_coeff(entries, idx):
    """Row of Tr(A .) as a functional on svec(Gamma).

    svec scales off-diagonal entries by sqrt(2) so that
    Tr(A B) = svec(A) . svec(B) for symmetric A, B.
    """
    cols, vals = [], []
    for i, j, v in entries:
        cols.append(idx[(i, j)])
        vals.append(v if i == j else SQRT2 * v)
    return cols, vals


def _mat_from_svec(x, dim):
    out = np.zeros((dim, dim))
    k = 0
    for i in range(dim):
        for j in range(i, dim):
            if i == j:
                out[i, i] = x[k]
            else:
                out[i, j] = out[j, i] = x[k] / SQRT2
            k += 1
    return out


def solve_sdp(p: SemidefiniteProgramInstance, tol: float = 1e-6,
              max_iters: int = 200_000, verbose: bool = False) -> SDPResult:
    """Solve the instance to target tolerance ``tol``.

    The reported optimum is certified only by the returned residuals and
    duality gap; callers with strict accuracy needs must inspect them.
    A max-iterations exit returns the partial result with status
    "inaccurate" (or "failed" when residuals are meaningless).
    """
    dim = p.dim
    nvar = dim * (dim + 1) // 2
    idx = _svec_index(dim)

    rows, cols, vals, b = [], [], [], []
    r = 0
    for mat, rhs in p.constraints:           # zero cone:  A x = b
        c_, v_ = _svec_coeff(mat, idx)
        rows.extend([r] * len(c_)); cols.extend(c_); vals.extend(v_)
        b.append(float(rhs))
        r += 1
    n_eq = r
    for mat, rhs in p.inequalities:          # positive cone:  b - (-A) x >= 0
        c_, v_ = _svec_coeff(mat, idx)
        rows.extend([r] * len(c_)); cols.extend(c_); vals.extend([-v for v in v_])
        b.append(-float(rhs))
        r += 1
    n_ineq = r - n_eq
    # PSD cone:  s = x  (i.e.  -I x + s = 0,  s in S_+)
    for k in range(nvar):
        rows.append(r + k); cols.append(k); vals.append(-1.0)
        b.append(0.0)
    m = r + nvar

    A = sp.csc_matrix((vals, (rows, cols)), shape=(m, nvar))
    c = np.zeros(nvar)
    sign = -1.0 if p.sense == "max" else 1.0
    obj_cols, obj_vals = _svec_coeff(p.objective, idx)
    for cc, vv in zip(obj_cols, obj_vals):
        c[cc] += sign * vv

    cone = {"z": n_eq, "l": n_ineq, "s": [dim]}
    solver = scs.SCS({"A": A, "b": np.asarray(b), "c": c}, cone,
                     eps_abs=tol, eps_rel=tol, max_iters=max_iters,
                     verbose=verbose)
    sol = solver.solve()
    info = sol["info"]
    status = info["status"].lower()

    if "infeasible" in status:
        return SDPResult("infeasible", None, None, iterations=info["iter"])
    if "unbounded" in status:
        return SDPResult("unbounded", None, None, iterations=info["iter"])
    if "solved" not in status:
        return SDPResult("failed", None, None, iterations=info["iter"])

    gamma = _mat_from_svec(sol["x"], dim)
    pobj, dobj = info["pobj"], info["dobj"]
    optimum = sign * pobj
    return SDPResult(
        "optimal" if status == "solved" else "inaccurate",
        float(optimum), gamma,
        primal_objective=float(pobj), dual_objective=float(dobj),
        residual_primal=float(info["res_pri"]),
        residual_dual=float(info["res_dual"]),
        duality_gap=float(abs(pobj - dobj)),
        iterations=int(info["iter"]),
    )
