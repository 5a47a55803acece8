"""LP detection: the relaxed ML problem over info bits, state bits and code checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .channel import Channel, LambdaSet, gram_coefficients, matched_filter
from .ldpc import ParityCheckMatrix
from .lp import OPTIMAL, LinearProgram, LpError, solve_lp
from .tanner import TannerGraph, attach_code_layer, build_pr_graph

SNAP_TOL = 1e-6


@dataclass
class DetectorOutput:
    x_values: np.ndarray
    hard_bits: np.ndarray
    integral: bool
    fractional_set: tuple = ()
    ml_certificate: bool = False
    z_values: np.ndarray | None = None
    objective: float = float("nan")
    iterations: int = 0
    converged: bool = True
    snap_anomalies: int = 0
    max_snap_residual: float = 0.0
    method: str = ""
    extra: dict = field(default_factory=dict)


def odd_subset_rows(neighbors):
    """Rows ``sum_V x - sum_{N\\V} x <= |V| - 1`` for every odd ``V``."""
    nb = list(neighbors)
    rows = []
    for size in range(1, len(nb) + 1, 2):
        for V in combinations(range(len(nb)), size):
            coef = [-1.0] * len(nb)
            for i in V:
                coef[i] = 1.0
            rows.append((nb, coef, float(size - 1)))
    return rows


def _constraint_rows(g: TannerGraph):
    rows = []
    for nb in g.check_neighbors():
        rows.extend(odd_subset_rows(nb))
    return rows


def build_relaxation(q, lam: LambdaSet, H: ParityCheckMatrix | None = None) -> LinearProgram:
    """LP over ``[x_1..x_n, z...]``; z follows the Tanner graph's (t, j) order."""
    q = np.asarray(q, dtype=float)
    g = build_pr_graph(lam, len(q))
    if H is not None:
        g = attach_code_layer(g, H)
    c = np.concatenate([q, g.state_lambdas])
    return LinearProgram.from_rows(g.num_vars, c, _constraint_rows(g), lo=0.0, hi=1.0)


def snap(values, tol: float = SNAP_TOL):
    """Snap to the nearest of {0, 1/2, 1} when within ``tol``.

    Returns ``(snapped, anomalies, max_residual)``; values farther than
    ``tol`` are left untouched and counted.
    """
    values = np.asarray(values, dtype=float)
    target = np.clip(np.round(2.0 * values) / 2.0, 0.0, 1.0)
    resid = np.abs(values - target)
    ok = resid <= tol
    out = np.where(ok, target, values)
    return out, int(np.count_nonzero(~ok)), float(resid.max(initial=0.0))


class LpDetector:
    """Relaxation with a fixed constraint system; only the objective depends on ``r``."""

    def __init__(self, ch: Channel, n: int, H: ParityCheckMatrix | None = None,
                 method: str = "highs"):
        if H is not None and H.n != n:
            raise ValueError(f"code length {H.n} does not match block length {n}")
        self.ch, self.n, self.H, self.method = ch, n, H, method
        self.lam = gram_coefficients(ch, n)
        g = build_pr_graph(self.lam, n)
        if H is not None:
            g = attach_code_layer(g, H)
        self.graph = g
        template = LinearProgram.from_rows(g.num_vars, np.zeros(g.num_vars),
                                           _constraint_rows(g))
        self._A, self._b = template.A, template.b

    def relaxation(self, q) -> LinearProgram:
        c = np.concatenate([np.asarray(q, dtype=float), self.graph.state_lambdas])
        return LinearProgram(c, self._A, self._b, 0.0, 1.0)

    def detect(self, r) -> DetectorOutput:
        r = np.asarray(r, dtype=float)
        if len(r) != self.n + self.ch.memory:
            raise ValueError(f"expected {self.n + self.ch.memory} samples, got {len(r)}")
        q = matched_filter(r, self.ch)
        return self.detect_from_q(q)

    def detect_from_q(self, q) -> DetectorOutput:
        lp = self.relaxation(q)
        sol = solve_lp(lp, self.method)
        if sol.status != OPTIMAL:
            raise LpError(f"relaxation returned status {sol.status}")
        snapped, anomalies, resid = snap(sol.x)
        x, z = snapped[:self.n], snapped[self.n:]
        frac = tuple(int(i) for i in np.flatnonzero((x > 0) & (x < 1)))
        integral = not frac
        hard = (x > 0.5).astype(np.int8)
        return DetectorOutput(
            x_values=x, z_values=z, hard_bits=hard, integral=integral,
            fractional_set=frac, ml_certificate=integral, objective=sol.objective,
            iterations=sol.iterations, snap_anomalies=anomalies,
            max_snap_residual=resid, method="lp")


def lp_detect(r, ch: Channel, H: ParityCheckMatrix | None = None,
              method: str = "highs") -> DetectorOutput:
    n = len(r) - ch.memory
    return LpDetector(ch, n, H, method).detect(r)


def evaluate_projected_objective(x, q, lam: LambdaSet) -> float:
    """Convex piecewise-linear objective in the info bits alone.

    Differs from the LP optimum over z by the constant sum of the negative
    ``lambda_{t,j}``.
    """
    x = np.asarray(x, dtype=float)
    total = float(np.dot(q, x))
    for t, j, v in lam.nonzero():
        a, b = x[t - 1], x[t - 1 - j]
        if v > 0:
            total += v * abs(a - b)
        else:
            total += -v * abs(a + b - 1.0)
    return total


def projected_constant(lam: LambdaSet) -> float:
    return float(sum(v for _, _, v in lam.nonzero() if v < 0))
