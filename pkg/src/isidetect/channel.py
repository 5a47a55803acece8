"""Binary-input partial-response channel arithmetic.

Time indices in the docstrings are 1-based to match the usual channel
notation; arrays are 0-based. Symbols outside the block ``[1, n]`` are
treated as silent (bipolar value 0), so a block of ``n`` bits produces
``n + mu`` received samples.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InvalidChannelError(ValueError):
    """Raised for empty tap lists or a zero leading tap."""


@dataclass(frozen=True)
class Channel:
    """Impulse response ``h_0..h_mu`` of a discrete-time ISI channel."""

    taps: tuple

    def __post_init__(self):
        taps = tuple(float(h) for h in self.taps)
        if not taps:
            raise InvalidChannelError("channel needs at least one tap")
        if taps[0] == 0.0:
            raise InvalidChannelError("leading tap h_0 must be nonzero")
        object.__setattr__(self, "taps", taps)

    @property
    def memory(self) -> int:
        return len(self.taps) - 1

    @property
    def h(self) -> np.ndarray:
        return np.asarray(self.taps)

    @property
    def energy(self) -> float:
        return float(np.dot(self.h, self.h))

    def scaled(self, c: float) -> "Channel":
        return Channel(tuple(c * h for h in self.taps))

    def __str__(self):
        return "[" + ", ".join(f"{h:g}" for h in self.taps) + "]"


def build_channel(taps) -> Channel:
    return Channel(tuple(taps))


def parse_taps(text: str) -> Channel:
    """Parse a tap list such as ``"1,1,-1,-1"`` (commas or whitespace)."""
    parts = text.replace(",", " ").split()
    try:
        return build_channel(float(p) for p in parts)
    except ValueError as exc:
        if isinstance(exc, InvalidChannelError):
            raise
        raise InvalidChannelError(f"cannot parse taps {text!r}") from exc


def modulate(bits) -> np.ndarray:
    """Map bits to bipolar symbols, 0 -> +1 and 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


def demodulate(symbols) -> np.ndarray:
    return (np.asarray(symbols) < 0).astype(np.int8)


def convolve_symbols(symbols, ch: Channel) -> np.ndarray:
    """Full linear convolution of a bipolar (or arbitrary real) block."""
    return np.convolve(np.asarray(symbols, dtype=float), ch.h)


def transmit_noiseless(bits, ch: Channel) -> np.ndarray:
    """Noiseless channel output ``y_1..y_{n+mu}``."""
    return convolve_symbols(modulate(bits), ch)


def add_awgn(y, sigma: float, seed=None) -> np.ndarray:
    """Add i.i.d. N(0, sigma^2) noise. ``seed`` may be an int or a Generator."""
    if sigma < 0:
        raise ValueError(f"noise standard deviation must be >= 0, got {sigma}")
    y = np.asarray(y, dtype=float)
    if sigma == 0:
        return y.copy()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return y + sigma * rng.standard_normal(y.shape)


def matched_filter(r, ch: Channel) -> np.ndarray:
    """``q_t = sum_i h_i r_{t+i}`` for ``t = 1..n`` where ``len(r) = n + mu``."""
    r = np.asarray(r, dtype=float)
    n = len(r) - ch.memory
    if n < 1:
        raise ValueError(
            f"received block of length {len(r)} is too short for memory {ch.memory}")
    # correlation with the taps; 'valid' keeps exactly the n full windows
    return np.correlate(r, ch.h, mode="valid")


def convolution_matrix(ch: Channel, n: int) -> np.ndarray:
    """The ``(n + mu) x n`` Toeplitz matrix with ``y = H x~``."""
    mu = ch.memory
    H = np.zeros((n + mu, n))
    for t in range(n):
        H[t:t + mu + 1, t] = ch.h
    return H


def gram_matrix(ch: Channel, n: int, tail: bool = True) -> np.ndarray:
    """``P = H^T H``. With ``tail=False`` the tail rows of H are dropped (square H)."""
    H = convolution_matrix(ch, n)
    if not tail:
        H = H[:n]
    return H.T @ H


def autocorrelation(ch: Channel) -> np.ndarray:
    """Stationary ``lambda_j = -sum_i h_i h_{i+j}`` for ``j = 0..mu``."""
    h = ch.h
    mu = ch.memory
    return np.array([-float(np.dot(h[:mu + 1 - j], h[j:])) for j in range(mu + 1)])


@dataclass(frozen=True)
class LambdaSet:
    """Objective coefficients of the state bits.

    ``stationary[j]`` is ``lambda_j``; ``per_position[(t, j)]`` is ``lambda_{t,j}``
    for the 1-based pair ``(t, t-j)``, ``j = 1..mu``, ``t = j+1..n``.
    """

    stationary: np.ndarray
    n: int
    per_position: dict = field(repr=False)

    @property
    def memory(self) -> int:
        return len(self.stationary) - 1

    @property
    def lambda0(self) -> float:
        return float(self.stationary[0])

    def get(self, t: int, j: int) -> float:
        if j == 0:
            return self.lambda0
        return self.per_position.get((t, j), 0.0)

    def nonzero(self, tol: float = 1e-12):
        """``(t, j, lambda)`` triples with ``|lambda| >= tol`` in (t, j) order."""
        return [(t, j, lam) for (t, j), lam in sorted(self.per_position.items())
                if abs(lam) >= tol]

    def gram(self) -> np.ndarray:
        """Off-diagonal Gram entries ``P_{t,t-j} = -lambda_{t,j}``; diagonal ``-lambda_0``."""
        P = np.diag(np.full(self.n, -self.lambda0))
        for (t, j), lam in self.per_position.items():
            P[t - 1, t - 1 - j] = P[t - 1 - j, t - 1] = -lam
        return P


def gram_coefficients(ch: Channel, n: int, tail: bool = True) -> LambdaSet:
    """State-bit coefficients ``lambda_{t,j} = -P_{t,t-j}``.

    With ``tail=True`` (the default, matching a receiver that keeps all
    ``n + mu`` samples) ``P`` is the Gram matrix of the full convolution and
    every ``lambda_{t,j}`` equals the stationary ``lambda_j``. With
    ``tail=False`` the tail samples are discarded and the upper summation
    limit is truncated to ``min(mu - j, n - t)`` near the end of the block.
    """
    if n < 1:
        raise ValueError("block length must be >= 1")
    h = ch.h
    mu = ch.memory
    stationary = autocorrelation(ch)
    per_position = {}
    for j in range(1, mu + 1):
        for t in range(j + 1, n + 1):
            if tail:
                per_position[(t, j)] = float(stationary[j])
            else:
                top = min(mu - j, n - t)
                per_position[(t, j)] = -float(np.dot(h[:top + 1], h[j:j + top + 1]))
    return LambdaSet(stationary=stationary, n=n, per_position=per_position)
