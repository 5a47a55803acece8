"""Exact ML references: Viterbi over the channel trellis and codebook search."""
from __future__ import annotations

import numpy as np

from .channel import Channel, convolve_symbols, modulate


def path_metric(r, bits, ch: Channel) -> float:
    """Squared Euclidean distance between ``r`` and the noiseless output of ``bits``."""
    y = convolve_symbols(modulate(bits), ch)
    return float(np.sum((np.asarray(r, dtype=float) - y) ** 2))


def viterbi_ml(r, ch: Channel) -> np.ndarray:
    """Minimise ``||r - y(x)||^2`` over all ``2^n`` blocks.

    The state before step ``t`` holds bits ``x_{t-1}..x_{t-mu}``, newest in
    the least significant position. Symbols outside the block are silent,
    so the last ``mu`` steps only flush the memory. Exact metric ties are
    resolved toward the lexicographically smaller bit block.
    """
    r = np.asarray(r, dtype=float)
    h = ch.h
    mu = ch.memory
    n = len(r) - mu
    if n < 1:
        raise ValueError("received block shorter than the channel memory")
    if mu == 0:
        return (r / h[0] < 0).astype(np.int8)
    S = 1 << mu
    states = np.arange(S)
    hist_sym = 1.0 - 2.0 * ((states[:, None] >> np.arange(mu)) & 1)  # [s, i-1] -> x_{t-i}
    # successor s has newest bit s & 1 and predecessors (s >> 1) | (k << (mu - 1))
    pred = np.stack([(states >> 1) | (k << (mu - 1)) for k in (0, 1)])
    metric = np.full(S, np.inf)
    metric[0] = 0.0
    steps = n + mu
    back = np.zeros((steps, S), dtype=np.int64)

    for t in range(steps):
        offsets = np.arange(1, mu + 1)
        valid = ((t - offsets >= 0) & (t - offsets < n)).astype(float)
        past_out = hist_sym @ (h[1:] * valid)
        new_bit = states & 1
        x_new = (1.0 - 2.0 * new_bit) if t < n else np.zeros(S)
        if t >= n:
            new_bit_allowed = new_bit == 0
        else:
            new_bit_allowed = np.ones(S, dtype=bool)
        # branch into successor s from predecessor p: output uses p's history
        cand = np.full((2, S), np.inf)
        for k in range(2):
            p = pred[k]
            y = h[0] * x_new + past_out[p]
            cand[k] = metric[p] + (r[t] - y) ** 2
        cand[:, ~new_bit_allowed] = np.inf
        choice = np.argmin(cand, axis=0)
        new_metric = cand[choice, states]
        tied = np.flatnonzero((cand[0] == cand[1]) & np.isfinite(cand[0]))
        back[t] = pred[choice, states]
        for s in tied:
            a, b = int(pred[0, s]), int(pred[1, s])
            back[t, s] = a if tuple(_trace(back[:t], a)) <= tuple(_trace(back[:t], b)) else b
        metric = new_metric

    best = np.flatnonzero(metric == metric.min())
    paths = [_trace(back, int(s))[:n] for s in best]
    return min(paths, key=lambda p: tuple(p))


def _trace(back, s: int) -> np.ndarray:
    n = back.shape[0]
    bits = np.zeros(n, dtype=np.int8)
    for t in range(n - 1, -1, -1):
        bits[t] = s & 1
        s = int(back[t, s])
    return bits


def exhaustive_ml(r, ch: Channel, words) -> np.ndarray:
    """Best word of an explicit codebook; ties go to the lexicographically smallest."""
    words = np.asarray(words, dtype=np.int8)
    if words.size == 0:
        raise ValueError("codebook is empty")
    words = words.reshape(len(words), -1)
    r = np.asarray(r, dtype=float)
    y = np.array([convolve_symbols(modulate(w), ch) for w in words])
    metric = np.sum((r - y) ** 2, axis=1)
    best = np.flatnonzero(metric == metric.min())
    return min((words[i] for i in best), key=lambda w: tuple(w)).copy()


exhaustive_ml_coded = exhaustive_ml


def all_words(n: int) -> np.ndarray:
    return ((np.arange(1 << n)[:, None] >> np.arange(n)[::-1]) & 1).astype(np.int8)
