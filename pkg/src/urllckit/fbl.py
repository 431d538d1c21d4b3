"""Finite-blocklength reliability over a band-limited AWGN link.

Short packets do not get the asymptotic capacity; the normal approximation
ties error probability to blocklength through the channel dispersion.  A
link observed over bandwidth B for latency T offers N = 2*B*T real channel
uses, and spreading a fixed transmit power over more bandwidth scales the
per-use SNR down as gamma = gamma0 * B0 / B.  This module carries the
resulting error calculus plus a minimum-bandwidth solver for a packet of
data and metadata bits, encoded jointly or separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .simcore import bisect, q_function

__all__ = [
    "LOG2E",
    "LinkBudget",
    "PacketSpec",
    "awgn_params",
    "error_prob",
    "snr_at_bandwidth",
    "asymptotic_bits",
    "success_probability",
    "min_bandwidth",
]

LOG2E = math.log2(math.e)

# analytic-ceiling guard band; near the boundary the grid scan decides
_CEILING_GUARD = 0.02

_N_MAX = 2 ** 22
_BRACKET_POINTS = 4096
_MODES = ("joint", "separate")


@dataclass(frozen=True)
class LinkBudget:
    """Reference operating point: SNR gamma0 at bandwidth b0_hz, latency latency_s."""

    gamma0: float
    b0_hz: float
    latency_s: float

    def __post_init__(self):
        for name in ("gamma0", "b0_hz", "latency_s"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    def channel_uses(self, b_hz):
        """Real channel uses available at bandwidth b_hz within the latency."""
        return 2.0 * np.asarray(b_hz, dtype=float) * self.latency_s


@dataclass(frozen=True)
class PacketSpec:
    """Payload sizes in bits; data and metadata can be coded together or apart."""

    data_bits: int
    metadata_bits: int = 0

    def __post_init__(self):
        if self.data_bits < 0 or self.metadata_bits < 0:
            raise ValueError("bit counts must be nonnegative")
        if self.data_bits + self.metadata_bits == 0:
            raise ValueError("packet must carry at least one bit")

    @classmethod
    def from_bytes(cls, data_bytes: int, metadata_bytes: int = 0) -> "PacketSpec":
        return cls(8 * data_bytes, 8 * metadata_bytes)

    @property
    def total_bits(self) -> int:
        return self.data_bits + self.metadata_bits


def awgn_params(gamma):
    """Capacity C and dispersion V per real channel use at SNR gamma.

    C(gamma) = 0.5*log2(1+gamma), V(gamma) = gamma*(gamma+2)/(2*(gamma+1)^2)
    in squared bits.  V grows from 0 toward log2(e)^2 / 2.
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("SNR must be nonnegative")
    c = 0.5 * np.log2(1.0 + g)
    v = g * (g + 2.0) / (2.0 * (g + 1.0) ** 2) * LOG2E ** 2
    if c.ndim == 0:
        return float(c), float(v)
    return c, v


def error_prob(n, gamma, bits):
    """Normal-approximation decoding error for `bits` over n real uses at SNR gamma.

    Q((n*C - bits + 0.5*log2(n)) / sqrt(n*V)); strictly increasing in bits.
    The zero-dispersion limit (gamma -> 0) degenerates to a hard threshold
    on the numerator sign.
    """
    n = np.asarray(n, dtype=float)
    if np.any(n <= 0):
        raise ValueError("blocklength must be positive")
    bits = np.asarray(bits, dtype=float)
    if np.any(bits < 0):
        raise ValueError("bits must be nonnegative")
    c, v = awgn_params(gamma)
    c = np.asarray(c, dtype=float)
    v = np.asarray(v, dtype=float)
    num = n * c - bits + 0.5 * np.log2(n)
    nv = n * v
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.where(nv > 0, num / np.sqrt(np.where(nv > 0, nv, 1.0)),
                       np.where(num > 0, np.inf, np.where(num < 0, -np.inf, 0.0)))
    eps = q_function(arg)
    if np.ndim(eps) == 0 and np.ndim(n) == 0 and np.ndim(bits) == 0:
        return float(eps)
    return eps


def snr_at_bandwidth(budget: LinkBudget, b_hz):
    """Per-use SNR when the reference power is spread over bandwidth b_hz."""
    b = np.asarray(b_hz, dtype=float)
    if np.any(b <= 0):
        raise ValueError("bandwidth must be positive")
    out = budget.gamma0 * budget.b0_hz / b
    return float(out) if out.ndim == 0 else out


def asymptotic_bits(budget: LinkBudget) -> float:
    """Infinite-bandwidth information limit gamma0 * B0 * T * log2(e) in bits."""
    return budget.gamma0 * budget.b0_hz * budget.latency_s * LOG2E


def success_probability(budget: LinkBudget, pkt: PacketSpec, n, mode: str = "joint"):
    """Packet success probability at n = 2*B*T real channel uses.

    joint: one codeword over all n uses carrying data+metadata.
    separate: metadata and data each get n/2 uses at the same per-use SNR,
    and both must decode.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    n = np.asarray(n, dtype=float)
    gamma = budget.gamma0 * 2.0 * budget.b0_hz * budget.latency_s / n
    if mode == "joint":
        out = 1.0 - error_prob(n, gamma, pkt.total_bits)
    else:
        half = n / 2.0
        out = (1.0 - error_prob(half, gamma, pkt.metadata_bits)) * \
              (1.0 - error_prob(half, gamma, pkt.data_bits))
    return float(out) if np.ndim(out) == 0 else out


def min_bandwidth(budget: LinkBudget, pkt: PacketSpec, eps_target: float,
                  mode: str = "joint", *, n_max: int = _N_MAX) -> float:
    """Smallest bandwidth (Hz) whose success probability reaches 1 - eps_target.

    Returns math.inf when infeasible: past the analytic ceiling (with a 2%
    guard band) or when no blocklength up to n_max succeeds.  The bracket
    comes from a geometric scan over n, refined by bisection to ~1e-6
    relative.
    """
    if mode not in _MODES:
        raise ValueError(f"mode must be one of {_MODES}, got {mode!r}")
    if not 0.0 < eps_target < 1.0:
        raise ValueError(f"eps_target must be in (0, 1), got {eps_target}")

    ceiling = asymptotic_bits(budget)
    if mode == "joint":
        required, available = pkt.total_bits, ceiling
    else:
        required, available = max(pkt.data_bits, pkt.metadata_bits), ceiling / 2.0
    if required >= available * (1.0 + _CEILING_GUARD):
        return math.inf

    target = 1.0 - eps_target
    grid = np.geomspace(2.0, float(n_max), _BRACKET_POINTS)
    succ = success_probability(budget, pkt, grid, mode)
    hits = np.nonzero(succ >= target)[0]
    if hits.size == 0:
        return math.inf
    idx = int(hits[0])
    if idx == 0:
        n_star = grid[0]
    else:
        lo, hi = float(grid[idx - 1]), float(grid[idx])
        n_star = bisect(
            lambda n: success_probability(budget, pkt, n, mode) - target,
            lo, hi, tol=1e-6 * lo,
        )
    return n_star / (2.0 * budget.latency_s)
