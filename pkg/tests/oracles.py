"""Reference implementations that share no code with the package.

Each oracle is deliberately naive: exhaustive enumeration or a direct
transcription of a definition.
"""
from itertools import combinations, product

import numpy as np


def conv_matrix(h, n):
    """Full-convolution matrix, (n + mu) x n."""
    h = np.asarray(h, dtype=float)
    M = np.zeros((n + len(h) - 1, n))
    for t in range(n):
        M[t:t + len(h), t] = h
    return M


def received(bits, h):
    return conv_matrix(h, len(bits)) @ (1.0 - 2.0 * np.asarray(bits, dtype=float))


def ml_brute(r, h, n):
    """argmin ||r - H(1-2x)|| over all 2^n words; lexicographically first on ties."""
    M = conv_matrix(h, n)
    best, best_x = np.inf, None
    for x in product((0, 1), repeat=n):
        d = np.sum((r - M @ (1.0 - 2.0 * np.array(x))) ** 2)
        if d < best - 1e-12:
            best, best_x = d, np.array(x)
    return best_x


def lambdas(h):
    """lambda_j = -sum_i h_i h_{i+j} for j = 0..mu."""
    h = np.asarray(h, dtype=float)
    mu = len(h) - 1
    return np.array([-sum(h[i] * h[i + j] for i in range(mu + 1 - j)) for j in range(mu + 1)])


def matched(r, h):
    h = np.asarray(h, dtype=float)
    n = len(r) - len(h) + 1
    return np.array([sum(h[i] * r[t + i] for i in range(len(h))) for t in range(n)])


def relaxed_objective(x, q, h):
    """min over z of q.x + sum lambda z, with z in the parity polytope of each check."""
    lam = lambdas(h)
    n = len(x)
    f = float(np.dot(q, x))
    for j in range(1, len(lam)):
        for t in range(j, n):
            a, b = x[t], x[t - j]
            if lam[j] > 0:
                f += lam[j] * abs(a - b)
            elif lam[j] < 0:
                f += lam[j] * min(a + b, 2 - a - b)
    return f


def vertex_lp(c, A, b, lo, hi, tol=1e-9):
    """min c.x s.t. A x <= b, lo <= x <= hi by enumerating basic solutions.

    A basic solution is fixed by a set R of tight rows and a set B of
    |R| basic variables; every other variable sits at one of its bounds.
    All 2^(n - |R|) bound patterns share one batched solve.  Returns
    ``(value, x)`` or ``(None, None)`` when infeasible.
    """
    c, A, b = np.asarray(c, float), np.asarray(A, float).reshape(-1, len(c)), np.asarray(b, float)
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    nv, m = len(c), len(b)
    best, best_x = None, None
    for s in range(0, min(m, nv) + 1):
        for R in combinations(range(m), s):
            for B in combinations(range(nv), s):
                N = [k for k in range(nv) if k not in B]
                pats = np.array(list(product((0, 1), repeat=len(N))), dtype=float).reshape(2 ** len(N), len(N))
                XN = lo[N] + pats * (hi[N] - lo[N])
                X = np.zeros((len(pats), nv))
                X[:, N] = XN
                if s:
                    M = A[np.ix_(R, B)]
                    if abs(np.linalg.det(M)) < 1e-10:
                        continue
                    rhs = b[list(R)][None, :] - XN @ A[np.ix_(R, N)].T
                    X[:, list(B)] = np.linalg.solve(M, rhs.T).T
                ok = np.all(X @ A.T <= b + tol, axis=1) & np.all(X >= lo - tol, axis=1) \
                    & np.all(X <= hi + tol, axis=1)
                if not ok.any():
                    continue
                vals = X[ok] @ c
                k = int(np.argmin(vals))
                if best is None or vals[k] < best:
                    best, best_x = float(vals[k]), X[ok][k]
    return best, best_x


def random_lp(rng, max_vars=8, max_rows=12):
    """Small boxed LP with integer data; degenerate and infeasible cases occur."""
    nv = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(1, max_rows + 1))
    A = rng.integers(-3, 4, size=(m, nv)).astype(float)
    c = rng.integers(-5, 6, nv).astype(float)
    lo = rng.integers(-2, 1, nv).astype(float)
    hi = lo + rng.integers(0, 4, nv)
    x0 = lo + rng.uniform(0, 1, nv) * (hi - lo)
    b = np.floor(A @ x0) + rng.integers(0, 3, m)
    if rng.random() < 0.1:
        b[0] = np.floor(np.minimum(A[0] * lo, A[0] * hi).sum()) - 1  # infeasible row
    return c, A, b, lo, hi


def bridges_nx(num_nodes, edges):
    """Bridge edge indices via networkx; parallel edges are never bridges."""
    import networkx as nx
    G = nx.MultiGraph()
    G.add_nodes_from(range(num_nodes))
    for k, (u, v) in enumerate(edges):
        G.add_edge(u, v, key=k)
    simple = nx.Graph(G)
    out = set()
    for u, v in nx.bridges(simple):
        ks = [k for k, (a, b) in enumerate(edges) if {a, b} == {u, v}]
        if len(ks) == 1:
            out.add(ks[0])
    return out


def min_distance_brute(lam, L):
    """min over nonempty F in [0, L) and signs of the error-event distance."""
    lam = np.asarray(lam, dtype=float)
    mu = len(lam) - 1
    best = np.inf
    for assign in product((0, 1, -1), repeat=L):
        F = [i for i in range(L) if assign[i]]
        if not F:
            continue
        d = len(F) * abs(lam[0])
        for a, s in enumerate(F):
            for t in F[a + 1:]:
                j = t - s
                if j <= mu:
                    d -= abs(lam[j]) + lam[j] * assign[s] * assign[t]
        best = min(best, d)
    return best
