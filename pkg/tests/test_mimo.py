"""Covariance-based beamforming: channel model, precoders, link evaluation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from urllckit.mimo import (
    DEFAULT_ATTEMPTS_PER_SLOT,
    METHODS,
    ClusterChannelSpec,
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
from urllckit.simcore import MonteCarloConfig

ZF_METHODS = tuple(m for m in METHODS if m != "interference_free")


def test_ula_steering_unit_columns():
    a = ula_steering([0.0, 17.0, -40.0], 16)
    assert a.shape == (16, 3)
    assert np.allclose(np.linalg.norm(a, axis=0), 1.0, atol=1e-12)
    # broadside steering is the constant vector
    assert np.allclose(a[:, 0], 1.0 / 4.0)
    with pytest.raises(ValueError):
        ula_steering([0.0], 0)


def test_path_cluster_validation():
    with pytest.raises(ValueError):
        PathCluster((0.0,), (0.0, 1.0), (1.0,))
    with pytest.raises(ValueError):
        PathCluster((), (), ())
    with pytest.raises(ValueError):
        PathCluster((0.0,), (0.0,), (0.0,))
    c = PathCluster((0.0, 5.0), (1.0, 2.0), (0.7, 0.3))
    assert c.n_paths == 2
    assert c.total_power == pytest.approx(1.0)


def test_channel_spec_validation():
    c = PathCluster((0.0,), (0.0,), (1.0,))
    with pytest.raises(ValueError):
        ClusterChannelSpec(4, 1, (c,))
    with pytest.raises(TypeError):
        ClusterChannelSpec(4, 1, (c, "not a cluster"))
    with pytest.raises(ValueError):
        ClusterChannelSpec(0, 1, (c, c))


def test_random_cluster_spec_reproducible():
    a = random_cluster_spec(seed=3)
    b = random_cluster_spec(seed=3)
    assert a == b
    assert a != random_cluster_spec(seed=4)


def test_random_cluster_spec_geometry():
    spec = random_cluster_spec(
        32, 2, paths=6, spread_deg=4.0, arrival_spread_deg=90.0,
        departure_centers_deg=(-10.0, 10.0), arrival_centers_deg=(0.0, 50.0),
        seed=9)
    assert spec.tx_antennas == 32
    assert spec.rx_antennas == 2
    for cl, dep_c, arr_c in zip(spec.clusters, (-10.0, 10.0), (0.0, 50.0)):
        assert cl.n_paths == 6
        assert cl.total_power == pytest.approx(1.0, rel=1e-12)
        assert all(abs(d - dep_c) <= 2.0 for d in cl.departure_deg)
        assert all(abs(a - arr_c) <= 45.0 for a in cl.arrival_deg)
        # exponential decay sorted strongest first
        assert all(p >= q for p, q in zip(cl.powers, cl.powers[1:]))


def test_random_cluster_spec_validation():
    with pytest.raises(ValueError):
        random_cluster_spec(paths=0)
    with pytest.raises(ValueError):
        random_cluster_spec(spread_deg=-1.0)


def test_covariance_trace_and_rank_one():
    single = ClusterChannelSpec(
        16, 1, (PathCluster((12.0,), (0.0,), (2.0,)),
                PathCluster((-20.0,), (0.0,), (1.0,))))
    cov = covariance(single, 0)
    assert np.trace(cov.r_tx).real == pytest.approx(2.0, abs=1e-10)
    assert cov.tx_rank == 1
    steer = ula_steering([12.0], 16)[:, 0]
    assert abs(np.vdot(cov.v_max, steer)) == pytest.approx(1.0, abs=1e-10)
    # single receive antenna: scalar covariance equal to the total power
    assert cov.r_rx.shape == (1, 1)
    assert cov.r_rx[0, 0].real == pytest.approx(2.0, abs=1e-12)


def test_covariance_orthogonal_paths():
    # sin spacing of 2/M makes the two steering vectors exactly orthogonal
    m = 8
    theta = math.degrees(math.asin(2.0 / m))
    spec = ClusterChannelSpec(
        m, 1, (PathCluster((0.0, theta), (0.0, 0.0), (0.5, 0.5)),
               PathCluster((60.0,), (0.0,), (1.0,))))
    cov = covariance(spec, 0)
    assert cov.tx_rank == 2
    assert cov.tx_eigvals[:2] == pytest.approx([0.5, 0.5], abs=1e-12)
    with pytest.raises(ValueError):
        covariance(spec, 2)


def test_draw_channels_statistics():
    spec = random_cluster_spec(24, 2, paths=5, seed=2)
    rng = np.random.default_rng(0)
    h = draw_channels(spec, 0, 20_000, rng)
    assert h.shape == (20_000, 2, 24)
    power = np.mean(np.sum(np.abs(h) ** 2, axis=(1, 2)))
    assert power == pytest.approx(spec.clusters[0].total_power, rel=0.05)


def test_draw_channels_reproducible_and_rank():
    spec = ClusterChannelSpec(
        8, 3, (PathCluster((5.0,), (10.0,), (1.0,)),
               PathCluster((-5.0,), (-10.0,), (1.0,))))
    a = draw_channels(spec, 0, 4, np.random.default_rng(7))
    b = draw_channels(spec, 0, 4, np.random.default_rng(7))
    assert np.array_equal(a, b)
    # one path leaves every realization rank one
    s = np.linalg.svd(a, compute_uv=False)
    assert np.all(s[:, 1:] < 1e-12)
    single = draw_channel(spec, 0, np.random.default_rng(1))
    assert single.shape == (3, 8)


def test_empirical_covariance_converges():
    spec = random_cluster_spec(16, 2, paths=4, seed=5)
    exact = covariance(spec, 0)
    r_tx, r_rx = empirical_covariance(spec, 0, MonteCarloConfig(20_000, 1))
    rel_tx = np.linalg.norm(r_tx - exact.r_tx) / np.linalg.norm(exact.r_tx)
    rel_rx = np.linalg.norm(r_rx - exact.r_rx) / np.linalg.norm(exact.r_rx)
    assert rel_tx < 0.05
    assert rel_rx < 0.05


def test_build_precoder_unit_norm_and_nulling():
    spec = random_cluster_spec(seed=1)
    cov0, cov1 = covariance(spec, 0), covariance(spec, 1)
    rng = np.random.default_rng(3)
    h = draw_channels(spec, 0, 50, rng)
    for method in METHODS:
        for k in range(0, 50, 10):
            pre = build_precoder(method, cov0, cov1, csi=h[k])
            assert np.linalg.norm(pre.weights) == pytest.approx(1.0, abs=1e-9)
            if method != "interference_free":
                leak = np.linalg.norm(cov1.tx_support.conj().T @ pre.weights)
                assert leak < 1e-10


def test_build_precoder_needs_csi():
    spec = random_cluster_spec(seed=1)
    cov0, cov1 = covariance(spec, 0), covariance(spec, 1)
    for method in ("interference_free", "all_sv_coh", "strongest_sv_inst"):
        with pytest.raises(ValueError):
            build_precoder(method, cov0, cov1)
    # statistical methods work without instantaneous CSI
    pre = build_precoder("all_sv_ncoh", cov0, cov1)
    assert pre.method == "all_sv_ncoh"
    with pytest.raises(ValueError):
        build_precoder("best", cov0, cov1)


def test_build_precoder_estimation_noise_needs_rng():
    spec = random_cluster_spec(seed=1)
    cov0, cov1 = covariance(spec, 0), covariance(spec, 1)
    h = draw_channel(spec, 0, np.random.default_rng(0))
    with pytest.raises(ValueError):
        build_precoder("strongest_sv_inst", cov0, cov1, csi=h,
                       estimation_noise_std=0.5)
    pre = build_precoder("strongest_sv_inst", cov0, cov1, csi=h,
                         estimation_noise_std=0.5,
                         rng=np.random.default_rng(4))
    assert np.linalg.norm(pre.weights) == pytest.approx(1.0, abs=1e-9)


def test_precoder_rejects_non_unit_weights():
    with pytest.raises(ValueError):
        Precoder(weights=np.array([1.0, 1.0], dtype=complex), method="x")


def test_zero_forcing_costs_nothing_for_disjoint_supports():
    # clusters far apart: the projection removes (almost) nothing
    spec = random_cluster_spec(departure_centers_deg=(-40.0, 40.0), seed=2)
    cov0, cov1 = covariance(spec, 0), covariance(spec, 1)
    h = draw_channels(spec, 0, 20, np.random.default_rng(0))
    for k in range(20):
        f_zf = build_precoder("all_sv_coh", cov0, cov1, csi=h[k]).weights
        f_if = build_precoder("interference_free", cov0, cov1, csi=h[k]).weights
        assert abs(np.vdot(f_zf, f_if)) > 0.98


def test_evaluate_pointwise_sinr_ordering():
    # shared channel draws make these orderings exact per realization, not
    # just in the mean
    spec = random_cluster_spec(seed=1)
    ev = evaluate(spec, METHODS, 0.0, "space", MonteCarloConfig(2000, 11))
    r = ev.results
    if_sinr = r["interference_free"].sinr
    coh = r["all_sv_coh"].sinr
    assert np.all(if_sinr >= coh * (1.0 - 1e-9))
    for sub in ("strongest_sv_inst", "all_sv_ncoh", "strongest_sv_av"):
        assert np.all(coh >= r[sub].sinr * (1.0 - 1e-9))


def test_evaluate_mean_ordering_multiantenna():
    spec = random_cluster_spec(rx_antennas=2, seed=1)
    ev = evaluate(spec, METHODS, 0.0, "space", MonteCarloConfig(4000, 5))
    r = ev.results
    assert r["interference_free"].mean_sinr >= r["all_sv_coh"].mean_sinr
    for sub in ("strongest_sv_inst", "all_sv_ncoh", "strongest_sv_av"):
        assert r["all_sv_coh"].mean_sinr >= r[sub].mean_sinr


def test_evaluate_result_fields_and_per_slot():
    spec = random_cluster_spec(seed=1)
    ev = evaluate(spec, ("all_sv_ncoh",), 5.0, "space",
                  MonteCarloConfig(3000, 2), slots=6)
    res = ev.results["all_sv_ncoh"]
    assert res.sinr.shape == (3000,)
    assert res.sinr_ci[0] <= res.mean_sinr <= res.sinr_ci[1]
    aps = DEFAULT_ATTEMPTS_PER_SLOT["all_sv_ncoh"]
    expected = res.mean_per ** (aps * np.arange(1, 7))
    assert np.allclose(res.per_slot, expected, rtol=1e-12)
    assert np.all(np.diff(res.per_slot) <= 0.0)


def test_evaluate_time_multiplexing_staircase():
    spec = random_cluster_spec(seed=1)
    ev = evaluate(spec, ("all_sv_ncoh",), 0.0, "time",
                  MonteCarloConfig(2000, 11), slots=4)
    ps = ev.results["all_sv_ncoh"].per_slot
    # the user transmits every other slot, so slots pair up
    assert ps[0] == ps[1]
    assert ps[2] == ps[3]
    assert ps[2] < ps[0]


def test_evaluate_time_multiplexing_uses_full_power():
    spec = random_cluster_spec(seed=1)
    mc = MonteCarloConfig(2000, 11)
    space = evaluate(spec, ("all_sv_coh",), 10.0, "space", mc)
    time_ = evaluate(spec, ("all_sv_coh",), 10.0, "time", mc)
    assert time_.results["all_sv_coh"].mean_sinr > \
        space.results["all_sv_coh"].mean_sinr


def test_evaluate_attempts_per_slot_override():
    spec = random_cluster_spec(seed=1)
    ev = evaluate(spec, ("all_sv_coh",), 5.0, "space", MonteCarloConfig(1000, 3),
                  slots=3, attempts_per_slot={"all_sv_coh": 3})
    res = ev.results["all_sv_coh"]
    assert np.allclose(res.per_slot, res.mean_per ** (3 * np.arange(1, 4)),
                       rtol=1e-12)


def test_evaluate_interference_free_wins_at_high_power():
    spec = random_cluster_spec(seed=1)
    ev = evaluate(spec, ("interference_free",), 30.0, "space",
                  MonteCarloConfig(2000, 11))
    assert ev.results["interference_free"].mean_per < 1e-12


def test_evaluate_deterministic_and_worker_invariant():
    spec = random_cluster_spec(seed=1)
    mc = MonteCarloConfig(5000, 7)
    a = evaluate(spec, ("all_sv_coh", "strongest_sv_av"), 0.0, "space", mc,
                 workers=1)
    b = evaluate(spec, ("all_sv_coh", "strongest_sv_av"), 0.0, "space", mc,
                 workers=3)
    for m in ("all_sv_coh", "strongest_sv_av"):
        assert np.array_equal(a.results[m].sinr, b.results[m].sinr)
        assert a.results[m].mean_per == b.results[m].mean_per


def test_evaluate_estimation_noise_perturbs_selection():
    spec = random_cluster_spec(seed=1)
    mc = MonteCarloConfig(2000, 3)
    clean = evaluate(spec, ("strongest_sv_inst",), 0.0, "space", mc)
    noisy = evaluate(spec, ("strongest_sv_inst",), 0.0, "space", mc,
                     estimation_noise_std=2.0)
    c = clean.results["strongest_sv_inst"]
    n = noisy.results["strongest_sv_inst"]
    assert not np.array_equal(c.sinr, n.sinr)
    assert n.mean_sinr <= c.mean_sinr


def test_evaluate_validation():
    spec = random_cluster_spec(seed=1)
    mc = MonteCarloConfig(10, 0)
    with pytest.raises(ValueError):
        evaluate(spec, ("unknown",), 0.0, "space", mc)
    with pytest.raises(ValueError):
        evaluate(spec, ("all_sv_coh",), 0.0, "frequency", mc)
    with pytest.raises(ValueError):
        evaluate(spec, ("all_sv_coh",), 0.0, "space", mc, payload_bits=0)
