"""Reliability analysis toolkit for low-latency wireless links.

Capabilities, one module each:

- :mod:`urllckit.fbl` -- short-packet error probability and the minimum
  bandwidth that meets a reliability target, with joint and separate
  data/metadata coding.
- :mod:`urllckit.access` -- connection-establishment error budgets and the
  retransmission latency-reliability staircase.
- :mod:`urllckit.framesync` -- exact distribution of marker
  self-reproductions in random payloads and the resulting bounds on
  frame-synchronization probability, plus a matching Monte-Carlo detector.
- :mod:`urllckit.mimo` -- covariance-based zero-forcing beamforming for two
  terminals sharing a cell, across CSI assumptions and receiver strategies.
- :mod:`urllckit.multiconn` -- closed-form end-to-end reliability of single,
  dual and interface-diversity connectivity chains.
- :mod:`urllckit.ratesel` -- rate selection from finite training with
  averaged-reliability and probably-correct-reliability back-off.
- :mod:`urllckit.simcore` -- shared numerics and reproducible stream
  splitting for all Monte-Carlo paths.

The batch interface in :mod:`urllckit.cli` turns these into CSV/JSON
emitters; results are byte-identical for a fixed seed regardless of the
worker count.
"""

from __future__ import annotations

from .access import (
    SCHEMES,
    AccessErrorProfile,
    LatencyCdf,
    RetransmissionModel,
    latency_cdf,
    scheme_error,
    scheme_steps,
)
from .fbl import (
    LinkBudget,
    PacketSpec,
    asymptotic_bits,
    awgn_params,
    error_prob,
    min_bandwidth,
    snr_at_bandwidth,
    success_probability,
)
from .framesync import (
    CapExceededError,
    Marker,
    OccurrenceDistribution,
    occurrence_distribution,
    p_ub,
    p_ub_list,
    search_marker,
    simulate_sync,
)
from .mimo import (
    METHODS,
    ClusterChannelSpec,
    CovariancePair,
    MethodResult,
    MimoEvaluation,
    PathCluster,
    Precoder,
    build_precoder,
    covariance,
    draw_channel,
    draw_channels,
    empirical_covariance,
    evaluate,
    random_cluster_spec,
    ula_steering,
)
from .multiconn import (
    ARCHITECTURES,
    Interface,
    ReliabilityChain,
    outage_sweep,
    reliability,
)
from .ratesel import (
    BackoffPolicy,
    NoFeasibleBackoffError,
    RayleighScenario,
    ThroughputResult,
    ar_epsilon,
    ar_outage_sup,
    ml_estimate,
    outage_capacity,
    outage_probability,
    pcr_epsilon,
    throughput_ratio,
)
from .simcore import (
    MonteCarloConfig,
    NoBracketError,
    SeededStream,
    bisect,
    collect_monte_carlo,
    log_q_function,
    q_function,
    run_monte_carlo,
)

__version__ = "0.1.0"

__all__ = [
    "SCHEMES",
    "AccessErrorProfile",
    "LatencyCdf",
    "RetransmissionModel",
    "latency_cdf",
    "scheme_error",
    "scheme_steps",
    "LinkBudget",
    "PacketSpec",
    "asymptotic_bits",
    "awgn_params",
    "error_prob",
    "min_bandwidth",
    "snr_at_bandwidth",
    "success_probability",
    "CapExceededError",
    "Marker",
    "OccurrenceDistribution",
    "occurrence_distribution",
    "p_ub",
    "p_ub_list",
    "search_marker",
    "simulate_sync",
    "METHODS",
    "ClusterChannelSpec",
    "CovariancePair",
    "MethodResult",
    "MimoEvaluation",
    "PathCluster",
    "Precoder",
    "build_precoder",
    "covariance",
    "draw_channel",
    "draw_channels",
    "empirical_covariance",
    "evaluate",
    "random_cluster_spec",
    "ula_steering",
    "ARCHITECTURES",
    "Interface",
    "ReliabilityChain",
    "outage_sweep",
    "reliability",
    "BackoffPolicy",
    "NoFeasibleBackoffError",
    "RayleighScenario",
    "ThroughputResult",
    "ar_epsilon",
    "ar_outage_sup",
    "ml_estimate",
    "outage_capacity",
    "outage_probability",
    "pcr_epsilon",
    "throughput_ratio",
    "MonteCarloConfig",
    "NoBracketError",
    "SeededStream",
    "bisect",
    "collect_monte_carlo",
    "log_q_function",
    "q_function",
    "run_monte_carlo",
    "__version__",
]
