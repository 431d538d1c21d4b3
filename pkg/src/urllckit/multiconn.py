"""End-to-end reliability algebra for multi-connectivity architectures.

A session crosses a wireless link, that interface's core network, and a far
leg shared by all interfaces.  Duplicating traffic over several interfaces
helps differently depending on where the flows merge: dual connectivity
(dc) merges before one anchor core, so only the links are diversified;
interface diversity (ifd) merges after the cores, so each link+core pair
fails independently.  single uses the first interface alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ARCHITECTURES",
    "Interface",
    "ReliabilityChain",
    "reliability",
    "outage_sweep",
]

ARCHITECTURES = ("single", "dc", "ifd")


def _check_prob(name: str, v: float) -> None:
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {v}")


@dataclass(frozen=True)
class Interface:
    """One access option: wireless link reliability and its core reliability."""

    r_link: float
    r_core: float

    def __post_init__(self):
        _check_prob("r_link", self.r_link)
        _check_prob("r_core", self.r_core)


@dataclass(frozen=True)
class ReliabilityChain:
    """Interfaces in preference order (first = anchor) plus the far leg."""

    interfaces: tuple
    r_far: float = 1.0

    def __post_init__(self):
        if len(self.interfaces) == 0:
            raise ValueError("need at least one interface")
        object.__setattr__(self, "interfaces", tuple(self.interfaces))
        for i in self.interfaces:
            if not isinstance(i, Interface):
                raise TypeError(f"interfaces must be Interface, got {type(i)!r}")
        _check_prob("r_far", self.r_far)


def reliability(chain: ReliabilityChain, arch: str) -> float:
    """End-to-end success probability under the given architecture.

    single: r_link1 * r_core1 * r_far
    dc:     (1 - prod(1 - r_link_i)) * r_core1 * r_far
    ifd:    (1 - prod(1 - r_link_i * r_core_i)) * r_far
    """
    if arch not in ARCHITECTURES:
        raise ValueError(f"arch must be one of {ARCHITECTURES}, got {arch!r}")
    first = chain.interfaces[0]
    if arch == "single":
        return first.r_link * first.r_core * chain.r_far
    if arch == "dc":
        miss = 1.0
        for i in chain.interfaces:
            miss *= 1.0 - i.r_link
        return (1.0 - miss) * first.r_core * chain.r_far
    miss = 1.0
    for i in chain.interfaces:
        miss *= 1.0 - i.r_link * i.r_core
    return (1.0 - miss) * chain.r_far


def outage_sweep(chain: ReliabilityChain, link_outages: Iterable[float],
                 archs: Sequence[str] = ARCHITECTURES,
                 vary_index: int = 0) -> list:
    """Sweep one interface's link outage; returns (link_outage, arch, e2e_outage) rows.

    The varied interface keeps its core reliability; all other parameters
    stay fixed.
    """
    if not 0 <= vary_index < len(chain.interfaces):
        raise ValueError(f"vary_index {vary_index} out of range")
    rows = []
    for q in np.asarray(list(link_outages), dtype=float):
        _check_prob("link outage", float(q))
        patched = list(chain.interfaces)
        patched[vary_index] = Interface(1.0 - float(q), patched[vary_index].r_core)
        varied = ReliabilityChain(tuple(patched), chain.r_far)
        for arch in archs:
            rows.append((float(q), arch, 1.0 - reliability(varied, arch)))
    return rows
