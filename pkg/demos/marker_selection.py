"""Synchronization marker choice: exact bounds, then a detector check.

For a handful of marker lengths this searches a good word, prints the
correct-sync lower bound P_UB (and its list-decoding variants), and
confirms the bound against the correlation detector run noiselessly.

Usage:
    python demos/marker_selection.py
"""

from __future__ import annotations

from urllckit.framesync import (occurrence_distribution, p_ub, p_ub_list,
                                search_marker, simulate_sync)
from urllckit.simcore import MonteCarloConfig

PAYLOAD_BITS = 64
LENGTHS = (8, 12, 16, 20)
LIST_LENGTHS = (1, 2, 4)
TRIALS = 200_000


def main() -> None:
    print(f"payload {PAYLOAD_BITS} bits, {TRIALS} detector trials per marker")
    header = "  ".join(f"{'l=%d' % l:>7}" for l in LIST_LENGTHS)
    print(f"{'N_m':>4}  {'marker':<20}  {header:<27}  {'simulated':>9}")
    last = None
    for nm in LENGTHS:
        marker = search_marker(nm, PAYLOAD_BITS, budget=200, seed=0)
        dist = occurrence_distribution(marker, PAYLOAD_BITS)
        last = dist
        bounds = "  ".join(f"{p_ub_list(dist, l):.5f}" for l in LIST_LENGTHS)
        est = simulate_sync(marker, PAYLOAD_BITS, None,
                            MonteCarloConfig(TRIALS, master_seed=1))
        word = "".join(str(b) for b in marker.bits)
        print(f"{nm:>4}  {word:<20}  {bounds:<26}  {est:9.5f}")
    print("\nwithout noise the detector only fails on payload self-images of "
          "the marker, so the simulated rate tracks the l=1 bound; letting "
          "the receiver keep l candidates buys back most of the loss.")
    print(f"(exact bound at N_m={LENGTHS[-1]}: {p_ub(last):.7f})")


if __name__ == "__main__":
    main()
