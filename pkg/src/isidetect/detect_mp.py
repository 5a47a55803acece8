"""Min-sum and sum-product message passing on the combined Tanner graph.

LLR sign convention: positive favours bit 0. Schedule is flooding. In
selective mode an info node sends to PR-layer checks only its channel LLR
plus what arrived from the code layer, so messages cannot circulate inside
the PR layer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Channel, LambdaSet, gram_coefficients, matched_filter
from .detect_lp import DetectorOutput
from .ldpc import ParityCheckMatrix
from .tanner import TannerGraph, attach_code_layer, build_pr_graph

MIN_SUM = "min_sum"
SUM_PRODUCT = "sum_product"
MSA_RAW = "msa_raw"
SPA_NORMALIZED = "spa_normalized"
FIXED_POINT_RTOL = 1e-12


@dataclass(frozen=True)
class MpConfig:
    algorithm: str = MIN_SUM
    selective: bool = False
    max_iters: int = 50
    clip: float = 50.0
    early_stop: str = "auto"

    def __post_init__(self):
        if self.algorithm not in (MIN_SUM, SUM_PRODUCT):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.clip <= 0:
            raise ValueError("clip must be positive")
        if self.early_stop not in ("auto", "syndrome", "off"):
            raise ValueError(f"unknown early_stop rule {self.early_stop!r}")

    def syndrome_stop(self, g: TannerGraph) -> bool:
        """Whether a satisfied syndrome ends the iterations on graph ``g``.

        Without a code layer every info assignment extends to a valid word,
        so ``"auto"`` relies on the message fixed point there instead.
        """
        if self.early_stop == "auto":
            return bool(g.code_checks)
        return self.early_stop == "syndrome"


@dataclass(frozen=True)
class LlrAssignment:
    info: np.ndarray
    state: np.ndarray
    mode: str = MSA_RAW

    def all(self) -> np.ndarray:
        return np.concatenate([self.info, self.state])

    def scaled(self, c: float) -> "LlrAssignment":
        return LlrAssignment(self.info * c, self.state * c, self.mode)


def init_llrs(q, lam: LambdaSet, sigma: float | None = None,
              mode: str = MSA_RAW, graph: TannerGraph | None = None) -> LlrAssignment:
    """Objective coefficients as channel LLRs, scaled by ``2/sigma^2`` for SPA."""
    if mode == MSA_RAW:
        scale = 1.0
    elif mode == SPA_NORMALIZED:
        if sigma is None or sigma <= 0:
            raise ValueError("sum-product normalisation needs sigma > 0")
        scale = 2.0 / sigma ** 2
    else:
        raise ValueError(f"unknown LLR mode {mode!r}")
    q = np.asarray(q, dtype=float)
    g = graph if graph is not None else build_pr_graph(lam, len(q))
    return LlrAssignment(scale * q, scale * g.state_lambdas, mode)


def check_update(messages, algorithm: str = MIN_SUM, clip: float = 50.0) -> float:
    """Outgoing message of a check given the other incoming messages."""
    m = np.asarray(messages, dtype=float)
    if algorithm == MIN_SUM:
        sign = -1.0 if np.count_nonzero(m < 0) % 2 else 1.0
        return float(sign * np.min(np.abs(m)))
    prod = float(np.prod(np.tanh(m / 2.0)))
    return float(np.clip(2.0 * np.arctanh(np.clip(prod, -1.0, 1.0)), -clip, clip))


class _EdgeLayout:
    """Edge arrays of a Tanner graph grouped by check degree."""

    def __init__(self, g: TannerGraph):
        self.g = g
        nbrs = g.check_neighbors()
        npr = len(g.pr_checks)
        var, chk, code = [], [], []
        for k, nb in enumerate(nbrs):
            for v in nb:
                var.append(v)
                chk.append(k)
                code.append(k >= npr)
        self.var = np.array(var, dtype=np.int64)
        self.chk = np.array(chk, dtype=np.int64)
        self.is_code = np.array(code, dtype=bool)
        self.num_vars = g.num_vars
        # edges of checks with equal degree form a (checks x degree) block
        self.groups = []
        start = 0
        degs = [len(nb) for nb in nbrs]
        pos = np.cumsum([0] + degs)
        by_deg = {}
        for k, d in enumerate(degs):
            by_deg.setdefault(d, []).append(k)
        for d, ks in sorted(by_deg.items()):
            idx = np.array([np.arange(pos[k], pos[k] + d) for k in ks], dtype=np.int64)
            self.groups.append(idx.reshape(len(ks), d))
        del start
        self.code_edge = self.is_code
        self.pr_edge_into_info = (~self.is_code) & (self.var < g.n)


def _min_sum_block(m):
    a = np.abs(m)
    neg = m < 0
    parity = np.count_nonzero(neg, axis=1) % 2 == 1
    sign = np.where(parity[:, None] ^ neg, -1.0, 1.0)
    order = np.argsort(a, axis=1, kind="stable")
    rows = np.arange(len(m))
    min1 = a[rows, order[:, 0]]
    min2 = a[rows, order[:, 1]] if m.shape[1] > 1 else np.full(len(m), np.inf)
    mag = np.repeat(min1[:, None], m.shape[1], axis=1)
    mag[rows, order[:, 0]] = min2
    return sign * mag


def _sum_product_block(m, clip):
    t = np.tanh(m / 2.0)
    d = m.shape[1]
    left = np.ones_like(t)
    right = np.ones_like(t)
    for i in range(1, d):
        left[:, i] = left[:, i - 1] * t[:, i - 1]
        right[:, d - 1 - i] = right[:, d - i] * t[:, d - i]
    prod = np.clip(left * right, -1.0, 1.0)
    with np.errstate(divide="ignore"):
        out = 2.0 * np.arctanh(prod)
    return np.clip(out, -clip, clip)


def _syndrome_ok(g: TannerGraph, layout: _EdgeLayout, hard) -> bool:
    bits = hard[layout.var]
    parity = np.bincount(layout.chk, weights=bits, minlength=g.num_checks)
    return not np.any(parity.astype(np.int64) & 1)


def run_message_passing(g: TannerGraph, llrs, cfg: MpConfig = MpConfig(),
                        layout: _EdgeLayout | None = None) -> DetectorOutput:
    channel = llrs.all() if isinstance(llrs, LlrAssignment) else np.asarray(llrs, float)
    if len(channel) != g.num_vars:
        raise ValueError(f"need {g.num_vars} channel LLRs, got {len(channel)}")
    lay = layout if layout is not None else _EdgeLayout(g)
    E = len(lay.var)
    cv = np.zeros(E)
    hard = (channel < 0).astype(np.int8)
    use_syndrome = cfg.syndrome_stop(g)
    converged = use_syndrome and _syndrome_ok(g, lay, hard)
    stop = "syndrome" if converged else "max_iters"
    iterations = 0
    while not converged and iterations < cfg.max_iters:
        total = channel + np.bincount(lay.var, weights=cv, minlength=g.num_vars)
        vc = total[lay.var] - cv
        if cfg.selective:
            code_in = np.bincount(lay.var, weights=cv * lay.code_edge, minlength=g.num_vars)
            pr = lay.pr_edge_into_info
            vc[pr] = channel[lay.var[pr]] + code_in[lay.var[pr]]
        new_cv = np.empty(E)
        for idx in lay.groups:
            block = vc[idx]
            if cfg.algorithm == MIN_SUM:
                new_cv[idx] = _min_sum_block(block)
            else:
                new_cv[idx] = _sum_product_block(np.clip(block, -cfg.clip, cfg.clip), cfg.clip)
        # relative test: exact equality can cycle on last-bit rounding
        if np.max(np.abs(new_cv - cv), initial=0.0) <= FIXED_POINT_RTOL * np.max(
                np.abs(cv), initial=0.0):
            converged, stop = True, "fixed_point"
            break
        cv = new_cv
        iterations += 1
        total = channel + np.bincount(lay.var, weights=cv, minlength=g.num_vars)
        hard = (total < 0).astype(np.int8)
        if use_syndrome and _syndrome_ok(g, lay, hard):
            converged, stop = True, "syndrome"
    x = hard[:g.n]
    return DetectorOutput(
        x_values=x.astype(float), hard_bits=x, integral=True, ml_certificate=False,
        z_values=hard[g.n:].astype(float), iterations=iterations, converged=converged,
        method=cfg.algorithm + ("_selective" if cfg.selective else ""),
        extra={"stop": stop})


class MpDetector:
    """Message-passing detector with the graph and edge layout built once."""

    def __init__(self, ch: Channel, n: int, H: ParityCheckMatrix | None = None,
                 cfg: MpConfig = MpConfig()):
        self.ch, self.n, self.H, self.cfg = ch, n, H, cfg
        self.lam = gram_coefficients(ch, n)
        g = build_pr_graph(self.lam, n)
        if H is not None:
            g = attach_code_layer(g, H)
        self.graph = g
        self.layout = _EdgeLayout(g)

    def detect(self, r, sigma: float | None = None) -> DetectorOutput:
        r = np.asarray(r, dtype=float)
        if len(r) != self.n + self.ch.memory:
            raise ValueError(f"expected {self.n + self.ch.memory} samples, got {len(r)}")
        q = matched_filter(r, self.ch)
        mode = SPA_NORMALIZED if self.cfg.algorithm == SUM_PRODUCT else MSA_RAW
        llrs = init_llrs(q, self.lam, sigma, mode, graph=self.graph)
        return run_message_passing(self.graph, llrs, self.cfg, self.layout)


def mp_detect(r, ch: Channel, H: ParityCheckMatrix | None = None,
              cfg: MpConfig = MpConfig(), sigma: float | None = None) -> DetectorOutput:
    return MpDetector(ch, len(r) - ch.memory, H, cfg).detect(r, sigma)
