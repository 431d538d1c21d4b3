"""Access-protocol error budgets and retransmission latency profiles.

An access attempt is a chain of steps that must all succeed: synchronization,
optional grant signaling, data, and acknowledgment.  Scheduled (static)
access and grant-free access skip grant signaling entirely; four-step access
pays for both the grant request and the grant; three-step access folds the
request away.  The overall attempt error is one minus the product of the
per-step success probabilities, and repeated attempts turn that into a
staircase latency-reliability profile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SCHEMES",
    "AccessErrorProfile",
    "scheme_steps",
    "scheme_error",
    "RetransmissionModel",
    "LatencyCdf",
    "latency_cdf",
]

# step chains that must all succeed, per access scheme
_SCHEME_STEPS = {
    "static": ("sync", "data", "ack"),
    "four_step": ("sync", "request", "grant", "data", "ack"),
    "three_step": ("sync", "grant", "data", "ack"),
    "grant_free": ("sync", "data", "ack"),
}

SCHEMES = tuple(_SCHEME_STEPS)


@dataclass(frozen=True)
class AccessErrorProfile:
    """Per-step error probabilities, each in [0, 1]."""

    eps_sync: float = 0.0
    eps_request: float = 0.0
    eps_grant: float = 0.0
    eps_data: float = 0.0
    eps_ack: float = 0.0

    def __post_init__(self):
        for name, v in self.as_dict().items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")

    def as_dict(self) -> dict:
        return {
            "sync": self.eps_sync,
            "request": self.eps_request,
            "grant": self.eps_grant,
            "data": self.eps_data,
            "ack": self.eps_ack,
        }


def scheme_steps(scheme: str) -> tuple:
    if scheme not in _SCHEME_STEPS:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")
    return _SCHEME_STEPS[scheme]


def scheme_error(scheme: str, profile: AccessErrorProfile) -> float:
    """Overall attempt error: 1 - prod(1 - eps_step) over the scheme's steps."""
    eps = profile.as_dict()
    prod = 1.0
    for step in scheme_steps(scheme):
        prod *= 1.0 - eps[step]
    return 1.0 - prod


@dataclass(frozen=True)
class RetransmissionModel:
    """Independent retries: per-attempt success p, fixed attempt latency, cap."""

    p_attempt: float
    attempt_latency_s: float
    max_attempts: int

    def __post_init__(self):
        if not 0.0 <= self.p_attempt <= 1.0:
            raise ValueError(f"p_attempt must be in [0, 1], got {self.p_attempt}")
        if not self.attempt_latency_s > 0:
            raise ValueError("attempt_latency_s must be positive")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


@dataclass(frozen=True)
class LatencyCdf:
    """Right-continuous staircase of delivery probability vs deadline."""

    model: RetransmissionModel

    @property
    def attempt_times(self) -> np.ndarray:
        m = self.model
        return m.attempt_latency_s * np.arange(1, m.max_attempts + 1)

    @property
    def attempt_reliabilities(self) -> np.ndarray:
        m = self.model
        k = np.arange(1, m.max_attempts + 1)
        return 1.0 - (1.0 - m.p_attempt) ** k

    @property
    def residual_error(self) -> float:
        """Probability the packet is never delivered within the attempt cap."""
        m = self.model
        return (1.0 - m.p_attempt) ** m.max_attempts

    def reliability_at(self, deadline_s):
        """P(delivered by deadline); a deadline exactly on an attempt boundary
        includes that attempt (right-continuous)."""
        m = self.model
        t = np.asarray(deadline_s, dtype=float)
        # relative nudge so a deadline sitting on k*L lands on step k despite
        # float division noise
        ratio = t / m.attempt_latency_s
        k = np.clip(np.floor(ratio * (1.0 + 1e-12) + 1e-12), 0, m.max_attempts)
        out = 1.0 - (1.0 - m.p_attempt) ** k
        return float(out) if out.ndim == 0 else out


def latency_cdf(model: RetransmissionModel) -> LatencyCdf:
    """Latency-reliability staircase for independent capped retries.

    Step k sits at k * attempt_latency with height p*(1-p)^(k-1); the curve
    saturates at 1 - (1-p)^max_attempts.
    """
    return LatencyCdf(model)
