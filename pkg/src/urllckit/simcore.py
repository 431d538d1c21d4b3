"""Shared numerics and seeded Monte-Carlo plumbing.

Everything downstream leans on three numeric primitives (Gaussian tail,
regularized lower incomplete gamma, bisection) plus a reproducible stream
abstraction.  Streams are keyed Philox generators: the (master_seed,
substream_id) pair is the 128-bit key, so equal pairs give bit-identical
sequences and distinct pairs give independent counter-based streams.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special

__all__ = [
    "NoBracketError",
    "q_function",
    "log_q_function",
    "reg_lower_gamma",
    "bisect",
    "SeededStream",
    "MonteCarloConfig",
    "run_monte_carlo",
    "collect_monte_carlo",
]

_MASK64 = (1 << 64) - 1

# ndtr switches to exact 0.0 once the result drops below the subnormal
# range it can reach internally; beyond this point go through the log tail.
_Q_LOG_SWITCH = 12.0


class NoBracketError(ValueError):
    """Raised when a root finder is handed an interval with no sign change."""


def q_function(x):
    """Gaussian tail probability Pr[Z > x] for standard normal Z.

    Vectorized.  Uses the complementary-error-function route for moderate
    arguments and the log-domain tail beyond, so values stay positive
    (subnormal if need be) instead of underflowing to zero prematurely.
    """
    x = np.asarray(x, dtype=float)
    out = special.ndtr(-x)
    deep = x >= _Q_LOG_SWITCH
    if np.any(deep):
        out = np.where(deep, np.exp(special.log_ndtr(-x)), out)
    if out.ndim == 0:
        return float(out)
    return out


def log_q_function(x):
    """Natural log of the Gaussian tail, safe far beyond float underflow."""
    x = np.asarray(x, dtype=float)
    out = special.log_ndtr(-x)
    if out.ndim == 0:
        return float(out)
    return out


def reg_lower_gamma(n, x):
    """Regularized lower incomplete gamma P(n, x), vectorized."""
    return special.gammainc(n, x)


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
           max_iter: int = 200) -> float:
    """Root of f on [lo, hi] by bisection, to absolute interval width tol.

    Requires a sign change (or an exact zero) on the interval; otherwise
    raises NoBracketError rather than guessing.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise NoBracketError(f"no bracket: f({lo}) = {flo}, f({hi}) = {fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid == lo or mid == hi:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if math.copysign(1.0, fmid) == math.copysign(1.0, flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _mix64(v: int) -> int:
    # splitmix64 finalizer: good avalanche, used only to spread substream ids
    v = (v + 0x9E3779B97F4A7C15) & _MASK64
    v = ((v ^ (v >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    v = ((v ^ (v >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (v ^ (v >> 31)) & _MASK64


@dataclass(frozen=True)
class SeededStream:
    """Handle for one reproducible random stream.

    The pair (master_seed, substream_id) keys a Philox-4x64 generator.
    Block generators jump the counter in 2^128 strides, so any number of
    fixed-size Monte-Carlo blocks drawn from one stream never overlap and
    are independent of how blocks are scheduled across workers.
    """

    master_seed: int
    substream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "substream_id"):
            v = getattr(self, name)
            if not 0 <= v <= _MASK64:
                raise ValueError(f"{name} must fit in 64 bits, got {v}")

    def _key(self) -> np.ndarray:
        return np.array([self.master_seed, self.substream_id], dtype=np.uint64)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self._key()))

    def block_generator(self, block_index: int) -> np.random.Generator:
        # jumped(0) would alias generator(); offset keeps them disjoint
        bg = np.random.Philox(key=self._key()).jumped(block_index + 1)
        return np.random.Generator(bg)

    def derive(self, *indices: int) -> "SeededStream":
        """Child stream keyed by a path of integer indices (order matters)."""
        h = self.substream_id
        for ix in indices:
            h = _mix64(h ^ _mix64(int(ix) & _MASK64))
        return SeededStream(self.master_seed, h)


@dataclass(frozen=True)
class MonteCarloConfig:
    """Trial budget plus master seed for one Monte-Carlo estimate."""

    trials: int
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    def stream(self, *indices: int) -> SeededStream:
        return SeededStream(self.master_seed).derive(*indices)


def run_monte_carlo(
    trials: int,
    block_size: int,
    stream: SeededStream,
    block_fn: Callable[[np.random.Generator, int, int], Sequence],
    workers: int = 1,
):
    """Run block_fn over fixed-size trial blocks and reduce in block order.

    block_fn(rng, start, count) returns a tuple of accumulators (scalars or
    arrays) that add across blocks.  The block layout depends only on
    (trials, block_size) and each block owns a jumped substream, so the
    reduced result is bit-identical for every worker count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    n_blocks = (trials + block_size - 1) // block_size
    spans = [
        (b, b * block_size, min(block_size, trials - b * block_size))
        for b in range(n_blocks)
    ]

    def run_one(span):
        b, start, count = span
        return block_fn(stream.block_generator(b), start, count)

    if workers <= 1 or n_blocks == 1:
        partials = [run_one(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_one, spans))

    # stack per-slot accumulators and let numpy's pairwise sum reduce them
    # in block order, independent of completion order
    first = partials[0]
    reduced = []
    for slot in range(len(first)):
        stacked = np.stack([np.asarray(p[slot]) for p in partials])
        reduced.append(stacked.sum(axis=0))
    return tuple(reduced)


def collect_monte_carlo(
    trials: int,
    block_size: int,
    stream: SeededStream,
    block_fn: Callable[[np.random.Generator, int, int], Sequence[np.ndarray]],
    workers: int = 1,
):
    """Like run_monte_carlo, but block_fn returns per-trial sample arrays
    (leading axis = trials in the block), concatenated in block order."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    n_blocks = (trials + block_size - 1) // block_size
    spans = [
        (b, b * block_size, min(block_size, trials - b * block_size))
        for b in range(n_blocks)
    ]

    def run_one(span):
        b, start, count = span
        out = block_fn(stream.block_generator(b), start, count)
        for arr in out:
            if np.asarray(arr).shape[0] != count:
                raise ValueError("block_fn must return per-trial arrays")
        return out

    if workers <= 1 or n_blocks == 1:
        partials = [run_one(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_one, spans))

    return tuple(
        np.concatenate([np.asarray(p[slot]) for p in partials])
        for slot in range(len(partials[0]))
    )
