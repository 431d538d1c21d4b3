"""Frame synchronization: marker self-reproduction bounds and detection.

A packet is a fixed binary marker followed by random payload bits.  A
correlation detector can lock onto any window that reproduces the marker,
so the probability of correct sync is governed by the count C of payload
offsets (including those straddling the marker/payload boundary) whose
window equals the marker.  With ties broken uniformly the detector picks
the true position with probability 1/(C+1), giving the upper bound
sum_i Pr{C=i}/(i+1), and a list detector that keeps l candidates succeeds
whenever C < l plus l/(i+1) otherwise.

The distribution of C is computed exactly with a prefix-automaton dynamic
program over the payload bits; the automaton starts in the full-match
state so marker-suffix overlaps are handled without enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .simcore import MonteCarloConfig, SeededStream, run_monte_carlo

__all__ = [
    "CapExceededError",
    "Marker",
    "OccurrenceDistribution",
    "occurrence_distribution",
    "p_ub",
    "p_ub_list",
    "search_marker",
    "simulate_sync",
]

_SEARCH_TAG = 101
_SIM_TAG = 102

# targets ~2^22 doubles of scratch per simulation block
_SIM_BLOCK_ELEMS = 2 ** 22


class CapExceededError(ValueError):
    """Occurrence-count support exceeded the cap with tail lumping disabled."""


@dataclass(frozen=True)
class Marker:
    """Synchronization word as a tuple of 0/1 bits."""

    bits: tuple

    def __post_init__(self):
        if len(self.bits) == 0:
            raise ValueError("marker must have at least one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("marker bits must be 0 or 1")
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))

    @classmethod
    def from_string(cls, s: str) -> "Marker":
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"marker string must be nonempty over 0/1, got {s!r}")
        return cls(tuple(int(c) for c in s))

    @classmethod
    def alternating(cls, n_bits: int) -> "Marker":
        """The 1010... word of length n_bits; the search's baseline candidate."""
        if n_bits < 1:
            raise ValueError("n_bits must be >= 1")
        return cls(tuple((i + 1) % 2 for i in range(n_bits)))

    def __len__(self) -> int:
        return len(self.bits)

    def as_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    def symbols(self) -> np.ndarray:
        """Antipodal mapping bit 0 -> +1, bit 1 -> -1."""
        return 1.0 - 2.0 * np.asarray(self.bits, dtype=float)


@dataclass(frozen=True)
class OccurrenceDistribution:
    """Exact distribution of the false-sync occurrence count C.

    probs maps each count with positive mass to its probability; tail_mass
    is whatever sits above the cap (zero unless lumping kicked in).
    """

    marker: Marker
    payload_bits: int
    probs: dict = field(compare=False)
    tail_mass: float = 0.0

    def support(self) -> tuple:
        return tuple(sorted(self.probs))

    def total_mass(self) -> float:
        return sum(self.probs.values()) + self.tail_mass


def _prefix_automaton(bits: tuple) -> np.ndarray:
    """KMP-style transition table delta[state, bit] over states 0..m.

    State q < m means the last q bits read equal the marker prefix of
    length q; state m means a match just completed and continues from its
    longest proper border.
    """
    m = len(bits)
    fail = [0] * (m + 1)
    k = 0
    for i in range(1, m):
        while k and bits[i] != bits[k]:
            k = fail[k]
        if bits[i] == bits[k]:
            k += 1
        fail[i + 1] = k
    delta = np.zeros((m + 1, 2), dtype=np.intp)
    for q in range(m + 1):
        for b in (0, 1):
            if q < m and bits[q] == b:
                delta[q, b] = q + 1
            elif q == 0:
                delta[q, b] = 0
            else:
                delta[q, b] = delta[fail[q], b]
    return delta


def occurrence_distribution(marker: Marker, payload_bits: int,
                            count_cap: int = 32,
                            lump_tail: bool = True) -> OccurrenceDistribution:
    """Exact law of C for i.i.d. uniform payload bits behind the marker.

    Counts above count_cap are lumped into tail_mass (or rejected when
    lump_tail is False).  All probabilities are dyadic rationals, so for
    payloads up to ~50 bits the float arithmetic here is exact.
    """
    if payload_bits < 0:
        raise ValueError("payload_bits must be nonnegative")
    if count_cap < 1:
        raise ValueError("count_cap must be >= 1")
    m = len(marker)
    if payload_bits == 0:
        return OccurrenceDistribution(marker, 0, {0: 1.0}, 0.0)

    cap = min(count_cap, payload_bits)
    delta = _prefix_automaton(marker.bits)
    # per input bit: states whose transition completes a match vs not
    plain_rows, plain_targets, match_rows = [], [], []
    for b in (0, 1):
        targets = delta[:, b]
        hit = targets == m
        plain_rows.append(np.nonzero(~hit)[0])
        plain_targets.append(targets[~hit])
        match_rows.append(np.nonzero(hit)[0])

    # joint law over (automaton state, count bucket); last bucket is the tail
    prob = np.zeros((m + 1, cap + 2))
    prob[m, 0] = 1.0  # the marker itself was just read; its match is not counted
    for _ in range(payload_bits):
        nxt = np.zeros_like(prob)
        for b in (0, 1):
            rows = plain_rows[b]
            if rows.size:
                np.add.at(nxt, plain_targets[b], prob[rows])
            rows = match_rows[b]
            if rows.size:
                shifted = prob[rows].sum(axis=0)
                nxt[m, 1:cap + 1] += shifted[:cap]
                nxt[m, cap + 1] += shifted[cap] + shifted[cap + 1]
        prob = 0.5 * nxt

    by_count = prob.sum(axis=0)
    tail = float(by_count[cap + 1])
    if tail > 0.0 and not lump_tail:
        raise CapExceededError(
            f"occurrence support exceeds cap {count_cap} and lumping is disabled")
    total = float(by_count.sum())
    if abs(total - 1.0) > 1e-9:
        raise AssertionError(f"distribution mass drifted to {total}")
    probs = {int(i): float(p) for i, p in enumerate(by_count[:cap + 1]) if p > 0.0}
    return OccurrenceDistribution(marker, payload_bits, probs, tail)


def p_ub(dist: OccurrenceDistribution) -> float:
    """Correct-sync upper bound sum_i Pr{C=i}/(i+1).

    Tail mass above the cap contributes zero, which can only lower the
    bound (pessimistic).
    """
    return float(sum(p / (i + 1) for i, p in dist.probs.items()))


def p_ub_list(dist: OccurrenceDistribution, list_len: int) -> float:
    """List-detector bound: Pr{C < l} plus l/(i+1) weighted mass above.

    Equals p_ub at l = 1 and is nondecreasing in l.  Tail mass again
    contributes zero.
    """
    if list_len < 1:
        raise ValueError("list_len must be >= 1")
    acc = 0.0
    for i, p in dist.probs.items():
        acc += p if i < list_len else p * list_len / (i + 1)
    return float(acc)


def _marker_from_int(value: int, n_bits: int) -> Marker:
    return Marker(tuple((value >> (n_bits - 1 - k)) & 1 for k in range(n_bits)))


def _flip(marker: Marker, pos: int) -> Marker:
    bits = list(marker.bits)
    bits[pos] ^= 1
    return Marker(tuple(bits))


def search_marker(n_bits: int, payload_bits: int, budget: int = 2048,
                  seed: int = 0, count_cap: int = 32) -> Marker:
    """Best marker of length n_bits by the p_ub criterion.

    Exhaustive when the budget covers all 2^n_bits words (and n_bits is
    small enough for that to be sane); otherwise seeded hill climbing on
    single-bit flips with random restarts.  The alternating word is always
    evaluated first, so the result is never worse than it.
    """
    if n_bits < 1:
        raise ValueError("n_bits must be >= 1")
    if budget < 1:
        raise ValueError("budget must be >= 1")

    def score(marker: Marker) -> float:
        return p_ub(occurrence_distribution(marker, payload_bits, count_cap))

    if n_bits <= 16 and 2 ** n_bits <= budget:
        best, best_v = None, -1.0
        for value in range(2 ** n_bits):
            cand = _marker_from_int(value, n_bits)
            v = score(cand)
            if v > best_v:
                best, best_v = cand, v
        return best

    rng = SeededStream(seed).derive(_SEARCH_TAG, n_bits, payload_bits).generator()
    current = Marker.alternating(n_bits)
    current_v = score(current)
    best, best_v = current, current_v
    evals = 1
    stale = 0
    while evals < budget:
        if stale > 2 * n_bits:
            # restart: greedy flips stopped paying, try a fresh random word
            current = _marker_from_int(int(rng.integers(0, 2 ** n_bits)), n_bits)
            current_v = score(current)
            evals += 1
            stale = 0
            if current_v > best_v:
                best, best_v = current, current_v
            continue
        cand = _flip(current, int(rng.integers(0, n_bits)))
        v = score(cand)
        evals += 1
        if v > current_v:
            current, current_v = cand, v
            stale = 0
            if v > best_v:
                best, best_v = cand, v
        else:
            stale += 1
    return best


def simulate_sync(marker: Marker, payload_bits: int, snr_db,
                  mc: MonteCarloConfig, workers: int = 1) -> float:
    """Monte-Carlo correct-sync probability of the correlation detector.

    BPSK packet, sliding correlation over the in-packet offsets 0..payload
    (no samples outside the packet), argmax with uniform tie breaking.
    snr_db = None means noiseless reception, where the estimate converges
    to the p_ub bound exactly.
    """
    m = len(marker)
    n = payload_bits
    if n < 0:
        raise ValueError("payload_bits must be nonnegative")
    msym = marker.symbols()
    sigma = None if snr_db is None else 10.0 ** (-float(snr_db) / 20.0)
    block = max(1, _SIM_BLOCK_ELEMS // max(m + n, 1))

    def block_fn(rng: np.random.Generator, start: int, count: int):
        packet = np.empty((count, m + n))
        packet[:, :m] = msym
        if n:
            bits = rng.integers(0, 2, size=(count, n))
            packet[:, m:] = 1.0 - 2.0 * bits
        received = packet if sigma is None else packet + rng.normal(0.0, sigma, packet.shape)
        corr = np.empty((count, n + 1))
        for j in range(n + 1):
            corr[:, j] = received[:, j:j + m] @ msym
        peak = corr.max(axis=1)
        ties = (corr == peak[:, None]).sum(axis=1)
        at_true = corr[:, 0] == peak
        # uniform pick among tied peaks: the true offset wins w.p. 1/ties
        u = rng.random(count)
        wins = at_true & (u * ties < 1.0)
        return (wins.sum(),)

    stream = SeededStream(mc.master_seed).derive(_SIM_TAG, m, n)
    (wins,) = run_monte_carlo(mc.trials, block, stream, block_fn, workers=workers)
    return float(wins) / mc.trials
