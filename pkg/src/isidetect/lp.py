"""Linear programs of the form ``min c^T x  s.t.  A x <= b,  lo <= x <= hi``.

Two backends are available behind :func:`solve_lp`:

``"simplex"``
    A dense bounded-variable primal simplex written here. Boxes are handled
    natively (nonbasic variables sit at a bound), Dantzig pricing is used
    until degenerate pivots start repeating, then Bland's rule takes over
    until the objective moves again.
``"highs"``
    The HiGHS dual simplex through SciPy. It is much faster on the
    thousand-row relaxations produced for long blocks and also returns a
    basic (vertex) solution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

PIVOT_TOL = 1e-10
COST_TOL = 1e-9
FEAS_TOL = 1e-9


class LpError(RuntimeError):
    """The solver reached an unexpected status."""


@dataclass
class LinearProgram:
    c: np.ndarray
    A: sp.csr_matrix
    b: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = len(self.c)
        self.A = sp.csr_matrix(self.A, dtype=float)
        if self.A.shape[1] != n and self.A.shape[0] > 0:
            raise ValueError(f"constraint matrix has {self.A.shape[1]} columns, "
                             f"expected {n}")
        if self.A.shape[0] == 0:
            self.A = sp.csr_matrix((0, n))
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        self.lo = np.broadcast_to(np.asarray(self.lo, dtype=float), (n,)).copy()
        self.hi = np.broadcast_to(np.asarray(self.hi, dtype=float), (n,)).copy()
        if len(self.b) != self.A.shape[0]:
            raise ValueError("row count of A and length of b differ")
        if np.any(self.lo > self.hi):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @classmethod
    def from_rows(cls, num_vars, c, rows, lo=0.0, hi=1.0):
        """Build from ``rows``, an iterable of ``(indices, coefficients, rhs)``."""
        data, indices, indptr, rhs = [], [], [0], []
        for idx, coef, bound in rows:
            idx = list(idx)
            if any(i < 0 or i >= num_vars for i in idx):
                raise ValueError(f"row references a variable outside [0, {num_vars})")
            indices.extend(idx)
            data.extend(coef)
            indptr.append(len(indices))
            rhs.append(bound)
        A = sp.csr_matrix((data, indices, indptr), shape=(len(rhs), num_vars))
        return cls(np.asarray(c, dtype=float), A, np.asarray(rhs, dtype=float), lo, hi)

    def objective(self, x) -> float:
        return float(self.c @ np.asarray(x, dtype=float))

    def violation(self, x) -> float:
        """Largest constraint or bound violation at ``x`` (0 if feasible)."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.num_rows:
            worst = max(worst, float(np.max(self.A @ x - self.b)))
        worst = max(worst, float(np.max(self.lo - x)), float(np.max(x - self.hi)))
        return max(worst, 0.0)


@dataclass
class LpSolution:
    x: np.ndarray
    objective: float
    status: str
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def solve_lp(lp: LinearProgram, method: str = "simplex") -> LpSolution:
    if method == "simplex":
        return BoundedSimplex(lp).solve()
    if method == "highs":
        return _solve_highs(lp)
    raise ValueError(f"unknown LP method {method!r}")


def _solve_highs(lp: LinearProgram) -> LpSolution:
    from scipy.optimize import linprog

    res = linprog(lp.c, A_ub=lp.A if lp.num_rows else None,
                  b_ub=lp.b if lp.num_rows else None,
                  bounds=np.column_stack([lp.lo, lp.hi]), method="highs-ds")
    if res.status == 0:
        return LpSolution(np.asarray(res.x), float(res.fun), OPTIMAL, int(res.nit))
    if res.status == 2:
        return LpSolution(np.full(lp.num_vars, np.nan), np.nan, INFEASIBLE, int(res.nit))
    if res.status == 3:
        return LpSolution(np.full(lp.num_vars, np.nan), -np.inf, UNBOUNDED, int(res.nit))
    raise LpError(f"HiGHS failed: {res.message}")


class BoundedSimplex:
    """Dense tableau simplex for ``A x + s = b``, ``s >= 0``, ``lo <= x <= hi``.

    One instance solves one program; the tableau is private working state.
    """

    degenerate_streak_for_bland = 8

    def __init__(self, lp: LinearProgram, max_iter: int = 100_000):
        self.lp = lp
        self.max_iter = max_iter
        self.iterations = 0

    def solve(self) -> LpSolution:
        lp = self.lp
        nv, m = lp.num_vars, lp.num_rows
        A = lp.A.toarray()
        # nonbasic structural variables start at a finite bound (or 0 if free)
        x0 = np.where(np.isfinite(lp.lo), lp.lo, np.where(np.isfinite(lp.hi), lp.hi, 0.0))
        slack = lp.b - A @ x0
        art_rows = np.flatnonzero(slack < 0)
        na = len(art_rows)
        N = nv + m + na
        M = np.zeros((m, N))
        M[:, :nv] = A
        M[:, nv:nv + m] = np.eye(m)
        for k, i in enumerate(art_rows):
            M[i, nv + m + k] = -1.0
        lo = np.concatenate([lp.lo, np.zeros(m), np.zeros(na)])
        hi = np.concatenate([lp.hi, np.full(m, np.inf), np.full(na, np.inf)])
        value = np.concatenate([x0, np.zeros(m + na)])
        basis = np.arange(nv, nv + m)
        for k, i in enumerate(art_rows):
            basis[i] = nv + m + k
        # basis columns are +-unit vectors, so B^{-1} M is a row sign flip
        T = M.copy()
        T[art_rows] *= -1.0
        beta = np.where(slack < 0, -slack, slack)
        value[basis] = beta

        self.M, self.T, self.lo, self.hi = M, T, lo, hi
        self.value, self.basis = value, basis
        self.is_basic = np.zeros(N, dtype=bool)
        self.is_basic[basis] = True

        if na:
            cost = np.zeros(N)
            cost[nv + m:] = 1.0
            status = self._run(cost)
            if status != OPTIMAL:  # phase 1 is bounded below by 0
                raise LpError("phase 1 did not reach optimality")
            if cost @ self.value > 1e-7:
                return LpSolution(np.full(nv, np.nan), np.nan, INFEASIBLE, self.iterations)
            self.hi[nv + m:] = 0.0
            self.value[nv + m:] = np.where(self.is_basic[nv + m:], self.value[nv + m:], 0.0)
        cost = np.zeros(N)
        cost[:nv] = lp.c
        status = self._run(cost)
        if status == UNBOUNDED:
            return LpSolution(np.full(nv, np.nan), -np.inf, UNBOUNDED, self.iterations)
        x = self._refresh_values()[:nv]
        return LpSolution(x, float(lp.c @ x), OPTIMAL, self.iterations)

    def _refresh_values(self) -> np.ndarray:
        """Recompute basic values from the original columns for accuracy."""
        value = self.value.copy()
        nonbasic = ~self.is_basic
        rhs = self.lp.b - self.M[:, nonbasic] @ value[nonbasic]
        if len(self.basis):
            value[self.basis] = np.linalg.solve(self.M[:, self.basis], rhs)
        self.value = value
        return value

    def _run(self, cost) -> str:
        T, lo, hi = self.T, self.lo, self.hi
        streak = 0
        while True:
            if self.iterations >= self.max_iter:
                raise LpError("simplex iteration limit reached")
            d = cost - cost[self.basis] @ T
            v = self.value
            can_up = (~self.is_basic) & (v < hi - FEAS_TOL) & (d < -COST_TOL)
            can_down = (~self.is_basic) & (v > lo + FEAS_TOL) & (d > COST_TOL)
            eligible = np.flatnonzero(can_up | can_down)
            if len(eligible) == 0:
                return OPTIMAL
            bland = streak >= self.degenerate_streak_for_bland
            if bland:
                j = int(eligible[0])
            else:
                j = int(eligible[np.argmax(np.abs(d[eligible]))])
            direction = 1.0 if can_up[j] else -1.0

            col = T[:, j]
            step = direction * col  # basic values move by -theta * step
            theta = hi[j] - lo[j]
            leave_row, leave_var = -1, j
            with np.errstate(divide="ignore", invalid="ignore"):
                beta = v[self.basis]
                lim = np.full(len(col), np.inf)
                dec = step > PIVOT_TOL
                inc = step < -PIVOT_TOL
                lim[dec] = (beta[dec] - lo[self.basis][dec]) / step[dec]
                lim[inc] = (hi[self.basis][inc] - beta[inc]) / -step[inc]
            lim = np.maximum(lim, 0.0)
            if len(lim):
                best = float(np.min(lim))
                if best < theta or (best == theta and bland and np.isfinite(best)):
                    ties = np.flatnonzero(lim <= best + 1e-12)
                    if bland:
                        pick = ties[np.argmin(self.basis[ties])]
                    else:
                        pick = ties[np.argmax(np.abs(col[ties]))]
                    theta, leave_row = float(lim[pick]), int(pick)
                    leave_var = int(self.basis[pick])
            if not np.isfinite(theta):
                return UNBOUNDED
            self.iterations += 1
            streak = streak + 1 if theta <= 1e-12 else 0

            v[self.basis] -= theta * step
            v[j] += direction * theta
            if leave_row < 0:
                # bound flip, basis unchanged
                v[j] = hi[j] if direction > 0 else lo[j]
                continue
            # leaving variable lands exactly on the bound it hit
            out_step = step[leave_row]
            v[leave_var] = lo[leave_var] if out_step > 0 else hi[leave_var]
            piv = T[leave_row, j]
            T[leave_row] /= piv
            factor = T[:, j].copy()
            factor[leave_row] = 0.0
            T -= np.outer(factor, T[leave_row])
            self.is_basic[leave_var] = False
            self.is_basic[j] = True
            self.basis[leave_row] = j
