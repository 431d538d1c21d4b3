"""Covariance-based zero-forcing beamforming for two clustered terminals.

A large base-station array serves two terminals whose multipath lives in
narrow angular clusters, so each terminal's transmit covariance has low
rank.  The long-term structure alone pins down the zero-forcing part of
the precoder: projecting away the interferer's covariance support nulls
the cross channel for every fading realization, no instantaneous cross-CSI
needed.  What remains is how to spend the in-cluster degrees of freedom,
and that is where the methods differ:

  interference_free  coherent matched beamforming, nulling skipped
                     (genie upper bound, interference not counted)
  all_sv_coh         coherent combining across the projected covariance
                     eigenvectors (needs own-channel CSI)
  strongest_sv_inst  pick the single projected eigenvector with the
                     strongest current projection (partial CSI)
  all_sv_ncoh        fixed superposition of all projected eigenvectors,
                     amplitudes sqrt(eigenvalue) (no CSI)
  strongest_sv_av    the dominant projected eigenvector (no CSI)

Receivers: methods transmitting across all eigenvectors use a matched
filter on the aggregate effective channel; the strongest-vector methods
project on the dominant receive eigenvector.  Methods without full CSI
spend half the training, so they fit two packets per slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .simcore import (
    MonteCarloConfig,
    SeededStream,
    collect_monte_carlo,
    q_function,
    run_monte_carlo,
)

__all__ = [
    "METHODS",
    "ZF_METHODS",
    "DEFAULT_ATTEMPTS_PER_SLOT",
    "PathCluster",
    "ClusterChannelSpec",
    "CovariancePair",
    "Precoder",
    "MethodResult",
    "MimoEvaluation",
    "ula_steering",
    "random_cluster_spec",
    "covariance",
    "draw_channel",
    "draw_channels",
    "empirical_covariance",
    "build_precoder",
    "evaluate",
]

METHODS = (
    "interference_free",
    "all_sv_coh",
    "strongest_sv_inst",
    "all_sv_ncoh",
    "strongest_sv_av",
)
ZF_METHODS = METHODS[1:]

# full-CSI coherent methods train twice as long, so half the packets fit
DEFAULT_ATTEMPTS_PER_SLOT = {
    "interference_free": 1,
    "all_sv_coh": 1,
    "strongest_sv_inst": 2,
    "all_sv_ncoh": 2,
    "strongest_sv_av": 2,
}

_SCENARIO_TAG = 301
_EVAL_TAG = 302

_EVAL_BLOCK = 2048


def ula_steering(angles_deg, n_antennas: int) -> np.ndarray:
    """Unit-norm steering columns of a half-wavelength ULA, one per angle."""
    if n_antennas < 1:
        raise ValueError("n_antennas must be >= 1")
    a = np.deg2rad(np.atleast_1d(np.asarray(angles_deg, dtype=float)))
    k = np.arange(n_antennas)[:, None]
    return np.exp(1j * math.pi * k * np.sin(a)[None, :]) / math.sqrt(n_antennas)


@dataclass(frozen=True)
class PathCluster:
    """Planar paths of one terminal: departure/arrival angles and powers."""

    departure_deg: tuple
    arrival_deg: tuple
    powers: tuple

    def __post_init__(self):
        dep = tuple(float(v) for v in self.departure_deg)
        arr = tuple(float(v) for v in self.arrival_deg)
        pw = tuple(float(v) for v in self.powers)
        if not len(dep) == len(arr) == len(pw):
            raise ValueError("departure, arrival, powers must have equal length")
        if len(pw) == 0:
            raise ValueError("need at least one path")
        if any(p <= 0 for p in pw):
            raise ValueError("path powers must be positive")
        object.__setattr__(self, "departure_deg", dep)
        object.__setattr__(self, "arrival_deg", arr)
        object.__setattr__(self, "powers", pw)

    @property
    def n_paths(self) -> int:
        return len(self.powers)

    @property
    def total_power(self) -> float:
        return float(sum(self.powers))


@dataclass(frozen=True)
class ClusterChannelSpec:
    """Two-terminal downlink: M-antenna transmitter, N-antenna terminals."""

    tx_antennas: int
    rx_antennas: int
    clusters: tuple

    def __post_init__(self):
        if self.tx_antennas < 1 or self.rx_antennas < 1:
            raise ValueError("antenna counts must be >= 1")
        if len(self.clusters) != 2:
            raise ValueError("exactly two terminals expected")
        for c in self.clusters:
            if not isinstance(c, PathCluster):
                raise TypeError("clusters must be PathCluster instances")
        object.__setattr__(self, "clusters", tuple(self.clusters))


def random_cluster_spec(
    tx_antennas: int = 100,
    rx_antennas: int = 1,
    *,
    paths: int = 10,
    spread_deg: float = 10.0,
    arrival_spread_deg: Optional[float] = None,
    span_db: float = 20.0,
    departure_centers_deg: Sequence[float] = (-6.0, 6.0),
    arrival_centers_deg: Sequence[float] = (-30.0, 30.0),
    normalize_power: bool = True,
    seed: int = 1,
) -> ClusterChannelSpec:
    """Draw a two-terminal scenario: angles uniform within each cluster
    spread, powers decaying exponentially over span_db (strongest first).

    arrival_spread_deg defaults to spread_deg; setting it wider than the
    departure spread models terminals in rich local scattering seen through
    a narrow departure sector.
    """
    if paths < 1:
        raise ValueError("paths must be >= 1")
    arr_spread = spread_deg if arrival_spread_deg is None else arrival_spread_deg
    if spread_deg < 0 or arr_spread < 0 or span_db < 0:
        raise ValueError("spreads and span_db must be nonnegative")
    rng = SeededStream(seed).derive(_SCENARIO_TAG).generator()
    decay = np.power(10.0, -span_db / 10.0 * np.arange(paths) / max(paths - 1, 1))
    if normalize_power:
        decay = decay / decay.sum()
    clusters = []
    for dep_c, arr_c in zip(departure_centers_deg, arrival_centers_deg):
        dep = dep_c + spread_deg * (rng.random(paths) - 0.5)
        arr = arr_c + arr_spread * (rng.random(paths) - 0.5)
        clusters.append(PathCluster(tuple(dep), tuple(arr), tuple(decay)))
    return ClusterChannelSpec(tx_antennas, rx_antennas, tuple(clusters))


@dataclass(frozen=True, eq=False)
class CovariancePair:
    """Transmit/receive covariance of one terminal with eigenstructure.

    Eigenvalues are descending; *_rank counts the numerically nonzero ones
    and the support properties expose the matching orthonormal bases,
    computed from the power-weighted steering matrix so the span stays
    exact even when the covariance eigenproblem is ill conditioned.
    """

    r_tx: np.ndarray
    r_rx: np.ndarray
    tx_eigvals: np.ndarray
    tx_eigvecs: np.ndarray
    rx_eigvals: np.ndarray
    rx_eigvecs: np.ndarray
    tx_rank: int
    rx_rank: int

    @property
    def tx_support(self) -> np.ndarray:
        return self.tx_eigvecs[:, : self.tx_rank]

    @property
    def rx_support(self) -> np.ndarray:
        return self.rx_eigvecs[:, : self.rx_rank]

    @property
    def v_max(self) -> np.ndarray:
        return self.tx_eigvecs[:, 0]

    @property
    def u_max(self) -> np.ndarray:
        return self.rx_eigvecs[:, 0]


def _eig_from_weighted(a: np.ndarray, dim: int):
    """Eigenstructure of a*a^H from the thin factor a (dim x paths)."""
    u, s, _ = np.linalg.svd(a, full_matrices=True)
    svals = np.zeros(dim)
    svals[: s.size] = s
    rank = int(np.count_nonzero(s > s[0] * max(a.shape) * np.finfo(float).eps)) if s.size else 0
    return svals ** 2, u, max(rank, 1)


def covariance(spec: ClusterChannelSpec, terminal: int) -> CovariancePair:
    """Long-term transmit and receive covariance of one terminal (0 or 1)."""
    if terminal not in (0, 1):
        raise ValueError("terminal must be 0 or 1")
    cl = spec.clusters[terminal]
    sqrtp = np.sqrt(np.asarray(cl.powers))
    s_tx = ula_steering(cl.departure_deg, spec.tx_antennas)
    s_rx = ula_steering(cl.arrival_deg, spec.rx_antennas)
    a_tx = s_tx * sqrtp[None, :]
    a_rx = s_rx * sqrtp[None, :]
    tx_vals, tx_vecs, tx_rank = _eig_from_weighted(a_tx, spec.tx_antennas)
    rx_vals, rx_vecs, rx_rank = _eig_from_weighted(a_rx, spec.rx_antennas)
    return CovariancePair(
        r_tx=a_tx @ a_tx.conj().T,
        r_rx=a_rx @ a_rx.conj().T,
        tx_eigvals=tx_vals,
        tx_eigvecs=tx_vecs,
        rx_eigvals=rx_vals,
        rx_eigvecs=rx_vecs,
        tx_rank=tx_rank,
        rx_rank=rx_rank,
    )


def _steering_factors(spec: ClusterChannelSpec, terminal: int):
    cl = spec.clusters[terminal]
    return (
        ula_steering(cl.arrival_deg, spec.rx_antennas),
        ula_steering(cl.departure_deg, spec.tx_antennas),
        np.asarray(cl.powers),
    )


def draw_channels(spec: ClusterChannelSpec, terminal: int, count: int,
                  rng: np.random.Generator) -> np.ndarray:
    """count i.i.d. channel realizations, shape (count, N, M).

    Each path carries a circularly symmetric complex gain with variance
    equal to its power, so E||H||_F^2 = sum(powers).
    """
    s_rx, s_tx, powers = _steering_factors(spec, terminal)
    z = rng.standard_normal((count, 2, powers.size))
    alpha = (z[:, 0] + 1j * z[:, 1]) * np.sqrt(powers / 2.0)
    return np.einsum("ip,kp,jp->kij", s_rx, alpha, s_tx.conj(), optimize=True)


def draw_channel(spec: ClusterChannelSpec, terminal: int,
                 rng: np.random.Generator) -> np.ndarray:
    """One channel realization, shape (N, M)."""
    return draw_channels(spec, terminal, 1, rng)[0]


def empirical_covariance(spec: ClusterChannelSpec, terminal: int,
                         mc: MonteCarloConfig, workers: int = 1):
    """Monte-Carlo estimates of (R_tx, R_rx) for convergence checks."""
    def block_fn(rng, start, count):
        h = draw_channels(spec, terminal, count, rng)
        r_tx = np.einsum("kij,kil->jl", h.conj(), h)
        r_rx = np.einsum("kij,klj->kil", h, h.conj()).sum(axis=0) \
            if spec.rx_antennas > 1 else np.einsum("kij,kij->", h, h.conj()).reshape(1, 1)
        return r_tx, r_rx

    stream = SeededStream(mc.master_seed).derive(_EVAL_TAG, terminal, 1)
    r_tx_sum, r_rx_sum = run_monte_carlo(
        mc.trials, _EVAL_BLOCK, stream, block_fn, workers=workers)
    return r_tx_sum / mc.trials, r_rx_sum / mc.trials


@dataclass(frozen=True, eq=False)
class Precoder:
    """Single-stream beamforming weights, unit norm; power applied per user."""

    weights: np.ndarray
    method: str

    def __post_init__(self):
        n = float(np.linalg.norm(self.weights))
        if not math.isclose(n, 1.0, rel_tol=0, abs_tol=1e-9):
            raise ValueError(f"weights must be unit norm, got {n}")


class _PrecoderContext:
    """Static per-terminal quantities shared by every realization.

    null_basis is the interferer's transmit support (None for the
    interference-free bound); everything else lives in the own-cluster
    support projected away from it.
    """

    def __init__(self, own: CovariancePair, other: Optional[CovariancePair]):
        self.u_max = own.u_max
        v = own.tx_support
        lam = own.tx_eigvals[: own.tx_rank]
        if other is None:
            projected = v.copy()
        else:
            b = other.tx_support
            projected = v - b @ (b.conj().T @ v)
        norms = np.linalg.norm(projected, axis=0)
        keep = norms > 1e-12
        if not np.any(keep):
            raise ValueError(
                "own covariance support lies entirely in the interferer's span")
        # per-eigenvector unit directions (strongest-SV selection)
        self.directions = projected[:, keep] / norms[keep]
        self.dir_eigvals = lam[keep]
        # orthonormal basis of the projected subspace (coherent combining)
        q, s, _ = np.linalg.svd(projected[:, keep], full_matrices=False)
        r = int(np.count_nonzero(s > s[0] * max(projected.shape) * np.finfo(float).eps))
        self.basis = q[:, : max(r, 1)]
        # fixed non-coherent superposition, sqrt(eigenvalue) amplitudes
        f = projected[:, keep] @ np.sqrt(lam[keep])
        self.f_ncoh = f / np.linalg.norm(f)
        self.f_av = self.directions[:, 0]


def _top_right_singvec(g: np.ndarray) -> np.ndarray:
    """Right singular vectors of the dominant singular value, batched.

    g has shape (count, N, r); returns (count, r) unit vectors.
    """
    if g.shape[1] == 1:
        w = g[:, 0, :].conj()
        return w / np.linalg.norm(w, axis=1, keepdims=True)
    _, _, vh = np.linalg.svd(g, full_matrices=False)
    return vh[:, 0, :].conj()


def _batched_precoders(method: str, ctx: _PrecoderContext, h: np.ndarray,
                       est_noise: Optional[np.ndarray]) -> np.ndarray:
    """Unit-norm weights per realization, shape (count, M)."""
    count = h.shape[0]
    if method in ("interference_free", "all_sv_coh"):
        g = h @ ctx.basis
        w = _top_right_singvec(g)
        f = np.einsum("mr,kr->km", ctx.basis, w)
    elif method == "strongest_sv_inst":
        c = np.einsum("i,kij,jd->kd", ctx.u_max.conj(), h, ctx.directions,
                      optimize=True)
        if est_noise is not None:
            c = c + est_noise
        idx = np.argmax(np.abs(c), axis=1)
        f = ctx.directions[:, idx].T
    elif method == "all_sv_ncoh":
        f = np.broadcast_to(ctx.f_ncoh, (count, ctx.f_ncoh.size))
    elif method == "strongest_sv_av":
        f = np.broadcast_to(ctx.f_av, (count, ctx.f_av.size))
    else:
        raise ValueError(f"unknown method {method!r}")
    norms = np.linalg.norm(f, axis=1, keepdims=True)
    return f / norms


def build_precoder(method: str, own_cov: CovariancePair,
                   other_cov: CovariancePair,
                   csi: Optional[np.ndarray] = None,
                   estimation_noise_std: float = 0.0,
                   rng: Optional[np.random.Generator] = None) -> Precoder:
    """Beamforming weights for one terminal.

    Every zero-forcing method projects the interferer's transmit support
    away first; interference_free skips the projection.  csi (the own
    channel, N x M) is required for all_sv_coh, strongest_sv_inst, and
    interference_free; the purely statistical methods ignore it.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    other = None if method == "interference_free" else other_cov
    ctx = _PrecoderContext(own_cov, other)
    needs_csi = method in ("interference_free", "all_sv_coh", "strongest_sv_inst")
    if needs_csi and csi is None:
        raise ValueError(f"method {method!r} needs instantaneous CSI")
    noise = None
    if method == "strongest_sv_inst" and estimation_noise_std > 0.0:
        if rng is None:
            raise ValueError("estimation noise requires an rng")
        z = rng.standard_normal((1, 2, ctx.directions.shape[1]))
        noise = (z[:, 0] + 1j * z[:, 1]) * (estimation_noise_std / math.sqrt(2.0))
    h = None if csi is None else np.asarray(csi)[None, :, :]
    if not needs_csi:
        h = np.zeros((1, 1, own_cov.r_tx.shape[0]), dtype=complex)
    f = _batched_precoders(method, ctx, h, noise)[0]
    return Precoder(weights=f, method=method)


@dataclass(frozen=True, eq=False)
class MethodResult:
    """Per-method Monte-Carlo outcome for the observed terminal."""

    method: str
    sinr: np.ndarray
    mean_sinr: float
    sinr_ci: tuple
    mean_per: float
    per_slot: np.ndarray


@dataclass(frozen=True, eq=False)
class MimoEvaluation:
    spec: ClusterChannelSpec
    rho_db: float
    multiplexing: str
    payload_bits: int
    slots: int
    results: dict = field(repr=False)


def _per_attempt(sinr: np.ndarray, payload_bits: int) -> np.ndarray:
    pb = q_function(np.sqrt(2.0 * sinr))
    return -np.expm1(payload_bits * np.log1p(-np.minimum(pb, 1.0 - 1e-16)))


def evaluate(
    spec: ClusterChannelSpec,
    methods: Sequence[str],
    rho_db: float,
    multiplexing: str,
    mc: MonteCarloConfig,
    *,
    payload_bits: int = 100,
    slots: int = 10,
    attempts_per_slot: Optional[dict] = None,
    estimation_noise_std: float = 0.0,
    workers: int = 1,
) -> MimoEvaluation:
    """Monte-Carlo SINR and PER-vs-slot for terminal 0 under each method.

    Spatial multiplexing splits the total power equally between the two
    simultaneously served users and keeps the (nulled) cross interference
    in the SINR; time multiplexing gives the active user full power but
    only every other slot.  Uncoded BPSK over payload_bits gives the
    per-attempt PER, and slots multiply independent delivery opportunities
    (two per slot for methods that skip full CSI training).
    """
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    if multiplexing not in ("space", "time"):
        raise ValueError(f"multiplexing must be 'space' or 'time', got {multiplexing!r}")
    if payload_bits < 1 or slots < 1:
        raise ValueError("payload_bits and slots must be >= 1")
    aps = dict(DEFAULT_ATTEMPTS_PER_SLOT)
    if attempts_per_slot:
        aps.update(attempts_per_slot)

    covs = (covariance(spec, 0), covariance(spec, 1))
    # context per (terminal role, nulling flag); built once, reused per block
    ctx = {}
    for term in (0, 1):
        ctx[(term, True)] = _PrecoderContext(covs[term], covs[1 - term])
        ctx[(term, False)] = _PrecoderContext(covs[term], None)

    total_power = 10.0 ** (rho_db / 10.0)
    spatial = multiplexing == "space"
    user_power = total_power / 2.0 if spatial else total_power
    n_methods = len(methods)
    needs_inst_noise = estimation_noise_std > 0.0 and "strongest_sv_inst" in methods

    def block_fn(rng: np.random.Generator, start: int, count: int):
        h1 = draw_channels(spec, 0, count, rng)
        h2 = draw_channels(spec, 1, count, rng) if spatial else None
        est = None
        if needs_inst_noise:
            d = ctx[(0, True)].directions.shape[1]
            z = rng.standard_normal((count, 2, d))
            est = (z[:, 0] + 1j * z[:, 1]) * (estimation_noise_std / math.sqrt(2.0))
        sinr = np.empty((count, n_methods))
        for col, method in enumerate(methods):
            nulling = method != "interference_free"
            f1 = _batched_precoders(method, ctx[(0, nulling)], h1,
                                    est if method == "strongest_sv_inst" else None)
            heff = np.einsum("kij,kj->ki", h1, f1)
            aggregate_rx = method in ("interference_free", "all_sv_coh", "all_sv_ncoh")
            if aggregate_rx:
                sig = np.einsum("ki,ki->k", heff, heff.conj()).real
            else:
                u = ctx[(0, True)].u_max
                sig = np.abs(np.einsum("i,ki->k", u.conj(), heff)) ** 2
            interf = 0.0
            if spatial and nulling:
                f2 = _batched_precoders(method, ctx[(1, True)], h2, None)
                cross = np.einsum("kij,kj->ki", h1, f2)
                if aggregate_rx:
                    num = np.abs(np.einsum("ki,ki->k", heff.conj(), cross)) ** 2
                    den = np.maximum(sig, 1e-300)
                    interf = num / den
                else:
                    u = ctx[(0, True)].u_max
                    interf = np.abs(np.einsum("i,ki->k", u.conj(), cross)) ** 2
            sinr[:, col] = user_power * sig / (user_power * interf + 1.0)
        return (sinr,)

    stream = SeededStream(mc.master_seed).derive(_EVAL_TAG, 0)
    (sinr_all,) = collect_monte_carlo(
        mc.trials, _EVAL_BLOCK, stream, block_fn, workers=workers)

    k = mc.trials
    results = {}
    slot_axis = np.arange(1, slots + 1)
    for col, method in enumerate(methods):
        s = sinr_all[:, col]
        mean = float(s.mean())
        se = float(s.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
        per = _per_attempt(s, payload_bits)
        mean_per = float(per.mean())
        active = slot_axis if spatial else np.ceil(slot_axis / 2.0)
        attempts = aps[method] * active
        per_slot = np.power(mean_per, attempts)
        results[method] = MethodResult(
            method=method,
            sinr=s,
            mean_sinr=mean,
            sinr_ci=(mean - 1.96 * se, mean + 1.96 * se),
            mean_per=mean_per,
            per_slot=per_slot,
        )
    return MimoEvaluation(
        spec=spec,
        rho_db=rho_db,
        multiplexing=multiplexing,
        payload_bits=payload_bits,
        slots=slots,
        results=results,
    )
