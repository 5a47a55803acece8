"""Tanner graph of the partial-response layer, optionally merged with a code layer.

Node identifiers: info bits ``0..n-1``, then one state bit per retained
``(t, j)`` pair, then the PR checks in the same ``(t, j)`` order, then the
code checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .channel import LambdaSet
from .ldpc import ParityCheckMatrix

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class PrCheck:
    t: int          # 1-based time of the later bit
    j: int          # shift
    lam: float
    left: int       # info node of x_t
    right: int      # info node of x_{t-j}
    state: int      # state node z_{t,j}


@dataclass(frozen=True)
class TannerGraph:
    n: int
    pr_checks: tuple = ()
    code_checks: tuple = ()
    state_lambdas: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def num_state(self) -> int:
        return len(self.pr_checks)

    @property
    def num_vars(self) -> int:
        return self.n + self.num_state

    @property
    def num_checks(self) -> int:
        return len(self.pr_checks) + len(self.code_checks)

    def check_id(self, k: int) -> int:
        return self.num_vars + k

    def check_neighbors(self) -> list:
        """Variable neighbours of every check, PR checks first."""
        pr = [(c.left, c.right, c.state) for c in self.pr_checks]
        return pr + [tuple(row) for row in self.code_checks]

    def edges(self) -> list:
        """``(variable, check_index)`` pairs in check order."""
        return [(v, k) for k, nb in enumerate(self.check_neighbors()) for v in nb]

    def adjacency(self) -> dict:
        adj = {v: [] for v in range(self.num_vars + self.num_checks)}
        for v, k in self.edges():
            c = self.check_id(k)
            adj[v].append(c)
            adj[c].append(v)
        return adj

    def num_edges(self) -> int:
        return 3 * len(self.pr_checks) + sum(len(r) for r in self.code_checks)

    def num_nodes(self) -> int:
        return self.num_vars + self.num_checks

    def is_acyclic(self, layer: str = "all") -> bool:
        """Forest test with union-find; ``layer`` is ``"pr"``, ``"code"`` or ``"all"``."""
        parent = list(range(self.num_nodes()))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        npr = len(self.pr_checks)
        for v, k in self.edges():
            if (layer == "pr" and k >= npr) or (layer == "code" and k < npr):
                continue
            a, b = find(v), find(self.check_id(k))
            if a == b:
                return False
            parent[a] = b
        return True

    def to_dot(self) -> str:
        lines = ["graph tanner {"]
        for t in range(self.n):
            lines.append(f'  {t} [label="x{t + 1}", shape=circle];')
        for c in self.pr_checks:
            lines.append(f'  {c.state} [label="z{c.t},{c.j}", shape=circle];')
        for k, c in enumerate(self.pr_checks):
            lines.append(f'  {self.check_id(k)} [label="c{c.t},{c.j}", shape=box];')
        for k in range(len(self.code_checks)):
            lines.append(f'  {self.check_id(len(self.pr_checks) + k)} '
                         f'[label="p{k + 1}", shape=box];')
        for v, k in self.edges():
            lines.append(f"  {v} -- {self.check_id(k)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_pr_graph(lam: LambdaSet, n: int | None = None, tol: float = ZERO_TOL) -> TannerGraph:
    """One degree-3 check per nonzero ``lambda_{t,j}``."""
    n = lam.n if n is None else n
    kept = [(t, j, v) for t, j, v in lam.nonzero(tol) if t <= n]
    checks = tuple(PrCheck(t=t, j=j, lam=v, left=t - 1, right=t - 1 - j, state=n + k)
                   for k, (t, j, v) in enumerate(kept))
    return TannerGraph(n=n, pr_checks=checks,
                       state_lambdas=np.array([c.lam for c in checks], dtype=float))


def attach_code_layer(g: TannerGraph, H: ParityCheckMatrix) -> TannerGraph:
    if H.n != g.n:
        raise ValueError(f"code length {H.n} does not match graph length {g.n}")
    return replace(g, code_checks=tuple(g.code_checks) + tuple(H.rows))
