"""Parity-check matrices: alist I/O, random regular construction, GF(2) encoding."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class AlistError(ValueError):
    pass


@dataclass(frozen=True)
class ParityCheckMatrix:
    """Sparse binary matrix; ``rows[c]`` lists the 0-based variables of check ``c``."""

    n: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(sorted(int(v) for v in row)) for row in self.rows)
        for c, row in enumerate(rows):
            if not row:
                raise ValueError(f"check {c} is empty")
            if len(set(row)) != len(row):
                raise ValueError(f"check {c} repeats a variable")
            if row[0] < 0 or row[-1] >= self.n:
                raise ValueError(f"check {c} references a variable outside [0, {self.n})")
        object.__setattr__(self, "rows", rows)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> list:
        cols = [[] for _ in range(self.n)]
        for c, row in enumerate(self.rows):
            for v in row:
                cols[v].append(c)
        return cols

    @property
    def design_rate(self) -> float:
        return 1.0 - self.m / self.n

    def to_dense(self) -> np.ndarray:
        H = np.zeros((self.m, self.n), dtype=np.uint8)
        for c, row in enumerate(self.rows):
            H[c, list(row)] = 1
        return H

    @classmethod
    def from_dense(cls, H) -> "ParityCheckMatrix":
        H = np.asarray(H)
        return cls(H.shape[1], tuple(tuple(np.flatnonzero(r)) for r in H))

    @classmethod
    def empty(cls, n: int) -> "ParityCheckMatrix":
        return cls(n, ())

    def syndrome(self, word) -> np.ndarray:
        word = np.asarray(word, dtype=np.int64)
        return np.array([int(word[list(r)].sum() & 1) for r in self.rows], dtype=np.int8)


def syndrome_check(word, H: ParityCheckMatrix) -> bool:
    word = np.asarray(word)
    if len(word) != H.n:
        raise ValueError(f"word length {len(word)} != code length {H.n}")
    return not H.syndrome(word).any()


# -- alist -----------------------------------------------------------------

def write_alist(H: ParityCheckMatrix) -> str:
    cols = H.columns
    col_deg = [len(c) for c in cols]
    row_deg = [len(r) for r in H.rows]
    dv, dc = max(col_deg, default=0), max(row_deg, default=0)

    def padded(entries, width):
        vals = [e + 1 for e in entries] + [0] * (width - len(entries))
        return " ".join(str(v) for v in vals)

    lines = [f"{H.n} {H.m}", f"{dv} {dc}",
             " ".join(map(str, col_deg)), " ".join(map(str, row_deg))]
    lines += [padded(c, dv) for c in cols]
    lines += [padded(r, dc) for r in H.rows]
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> ParityCheckMatrix:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    try:
        nums = [[int(v) for v in ln] for ln in lines]
    except ValueError as exc:
        raise AlistError("non-integer entry in alist") from exc
    if len(nums) < 4 or len(nums[0]) != 2 or len(nums[1]) != 2:
        raise AlistError("malformed alist header")
    n, m = nums[0]
    dv, dc = nums[1]
    col_deg, row_deg = nums[2], nums[3]
    if len(col_deg) != n or len(row_deg) != m:
        raise AlistError("degree list lengths do not match n and m")
    if sum(col_deg) != sum(row_deg):
        raise AlistError("column and row degree sums differ")
    if max(col_deg, default=0) > dv or max(row_deg, default=0) > dc:
        raise AlistError("degree exceeds the declared maximum")
    body = nums[4:]
    if len(body) != n + m:
        raise AlistError(f"expected {n + m} adjacency lines, found {len(body)}")

    def entries(line, deg, bound, what):
        nz = [v for v in line if v != 0]
        if len(nz) != deg or any(v != 0 for v in line[deg:]):
            raise AlistError(f"{what} adjacency does not match its degree")
        if any(v < 1 or v > bound for v in nz):
            raise AlistError(f"{what} index out of range")
        return [v - 1 for v in nz]

    cols = [entries(body[i], col_deg[i], m, f"column {i + 1}") for i in range(n)]
    rows = [entries(body[n + c], row_deg[c], n, f"row {c + 1}") for c in range(m)]
    edges_from_cols = {(c, v) for v, cs in enumerate(cols) for c in cs}
    edges_from_rows = {(c, v) for c, vs in enumerate(rows) for v in vs}
    if edges_from_cols != edges_from_rows:
        raise AlistError("row and column adjacency lists are inconsistent")
    return ParityCheckMatrix(n, tuple(tuple(r) for r in rows))


def load_alist(path) -> ParityCheckMatrix:
    return parse_alist(Path(path).read_text())


def save_alist(H: ParityCheckMatrix, path) -> None:
    Path(path).write_text(write_alist(H))


# -- construction ------------------------------------------------------------

def generate_regular(n: int, dv: int, dc: int, seed=None,
                     max_tries: int = 1000) -> ParityCheckMatrix:
    """Random (dv, dc)-regular matrix from a socket permutation.

    Double edges are repaired by swapping sockets with random partners; a few
    extra local swaps then try to break 4-cycles, without a guarantee.
    """
    if n < 1 or dv < 1 or dc < 1 or (n * dv) % dc:
        raise ValueError(f"n*dv = {n * dv} must be a positive multiple of dc = {dc}")
    if dc > n:
        raise ValueError("check degree exceeds code length")
    m = n * dv // dc
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        sockets = rng.permutation(np.repeat(np.arange(n), dv))
        rows = sockets.reshape(m, dc)
        if _repair_double_edges(rows, rng):
            _reduce_four_cycles(rows, rng)
            return ParityCheckMatrix(n, tuple(tuple(r) for r in rows))
    raise RuntimeError("could not build a regular matrix without double edges")


def _repair_double_edges(rows, rng, rounds: int = 200) -> bool:
    m, dc = rows.shape
    for _ in range(rounds):
        bad = [(c, k) for c in range(m) for k in range(dc)
               if rows[c, k] in rows[c, :k]]
        if not bad:
            return True
        for c, k in bad:
            c2, k2 = int(rng.integers(m)), int(rng.integers(dc))
            if c2 == c:
                continue
            a, b = rows[c, k], rows[c2, k2]
            if b not in rows[c] and a not in rows[c2]:
                rows[c, k], rows[c2, k2] = b, a
    return not any(rows[c, k] in rows[c, :k] for c in range(rows.shape[0])
                   for k in range(dc))


def _four_cycle_pairs(rows):
    seen = {}
    hits = []
    for c, row in enumerate(rows):
        r = sorted(row)
        for i in range(len(r)):
            for k in range(i + 1, len(r)):
                key = (r[i], r[k])
                if key in seen:
                    hits.append((seen[key], c, key))
                else:
                    seen[key] = c
    return hits


def _reduce_four_cycles(rows, rng, rounds: int = 50) -> None:
    m, dc = rows.shape
    for _ in range(rounds):
        hits = _four_cycle_pairs(rows)
        if not hits:
            return
        before = len(hits)
        _, c, (v, _) = hits[int(rng.integers(len(hits)))]
        k = int(np.flatnonzero(rows[c] == v)[0])
        c2, k2 = int(rng.integers(m)), int(rng.integers(dc))
        a, b = rows[c, k], rows[c2, k2]
        if c2 == c or b in rows[c] or a in rows[c2]:
            continue
        rows[c, k], rows[c2, k2] = b, a
        if len(_four_cycle_pairs(rows)) > before:
            rows[c, k], rows[c2, k2] = a, b


# -- encoding ----------------------------------------------------------------

@dataclass(frozen=True)
class Encoder:
    """Systematic encoder derived from the reduced row echelon form of H.

    ``info_positions`` are the free columns; ``parity_positions[i]`` is the
    pivot column of row ``i`` of ``reduced`` and equals the XOR of the
    info bits flagged in ``reduced[i, info_positions]``.
    """

    n: int
    rank: int
    info_positions: np.ndarray
    parity_positions: np.ndarray
    parity_map: np.ndarray

    @property
    def k(self) -> int:
        return self.n - self.rank

    @property
    def rate(self) -> float:
        return self.k / self.n

    def encode(self, info) -> np.ndarray:
        info = np.asarray(info, dtype=np.uint8)
        if len(info) != self.k:
            raise ValueError(f"expected {self.k} info bits, got {len(info)}")
        word = np.zeros(self.n, dtype=np.uint8)
        word[self.info_positions] = info
        if self.rank:
            word[self.parity_positions] = (self.parity_map.astype(np.int64) @ info) & 1
        return word


def gf2_rref(H) -> tuple:
    """Row-reduce a binary matrix. Returns ``(R, pivot_columns)``."""
    R = np.array(H, dtype=np.uint8) & 1
    m, n = R.shape
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        hit = np.flatnonzero(R[row:, col])
        if len(hit) == 0:
            continue
        p = row + int(hit[0])
        if p != row:
            R[[row, p]] = R[[p, row]]
        others = np.flatnonzero(R[:, col])
        others = others[others != row]
        R[others] ^= R[row]
        pivots.append(col)
        row += 1
    return R[:row], pivots


def build_encoder(H: ParityCheckMatrix) -> Encoder:
    R, pivots = gf2_rref(H.to_dense()) if H.m else (np.zeros((0, H.n), np.uint8), [])
    pivots = np.array(pivots, dtype=int)
    free = np.setdiff1d(np.arange(H.n), pivots)
    return Encoder(n=H.n, rank=len(pivots), info_positions=free,
                   parity_positions=pivots, parity_map=R[:, free])


def encode(info, enc: Encoder) -> np.ndarray:
    return enc.encode(info)


def codebook(H: ParityCheckMatrix, limit: int = 1 << 16) -> np.ndarray:
    """All codewords, for tiny codes only."""
    enc = build_encoder(H)
    if (1 << enc.k) > limit:
        raise ValueError(f"code has 2^{enc.k} words, above the limit of {limit}")
    infos = ((np.arange(1 << enc.k)[:, None] >> np.arange(enc.k)[::-1]) & 1).astype(np.uint8)
    return np.array([enc.encode(u) for u in infos], dtype=np.uint8).reshape(-1, H.n)
