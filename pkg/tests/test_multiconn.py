"""Multi-connectivity reliability algebra."""

from __future__ import annotations

import numpy as np
import pytest

from urllckit.multiconn import (
    ARCHITECTURES,
    Interface,
    ReliabilityChain,
    outage_sweep,
    reliability,
)

# two-interface baseline: a good link behind a good core, a weaker link
# behind a weaker core, one shared far leg
_BASELINE = ReliabilityChain(
    (Interface(0.99, 0.999), Interface(0.9, 0.99)), r_far=0.9999)


def test_reliability_baseline_values():
    assert reliability(_BASELINE, "single") == pytest.approx(0.988911099, rel=1e-12)
    assert reliability(_BASELINE, "dc") == pytest.approx(0.9979011999, rel=1e-12)
    assert reliability(_BASELINE, "ifd") == pytest.approx(0.998702209791, rel=1e-12)


def test_reliability_ordering():
    r = {a: reliability(_BASELINE, a) for a in ARCHITECTURES}
    assert r["single"] < r["dc"] < r["ifd"]


def test_single_interface_collapses_architectures():
    chain = ReliabilityChain((Interface(0.97, 0.995),), r_far=0.999)
    s = reliability(chain, "single")
    assert reliability(chain, "dc") == pytest.approx(s, rel=1e-15)
    assert reliability(chain, "ifd") == pytest.approx(s, rel=1e-15)


def test_perfect_chain():
    chain = ReliabilityChain((Interface(1.0, 1.0), Interface(1.0, 1.0)))
    for arch in ARCHITECTURES:
        assert reliability(chain, arch) == 1.0


def test_ifd_dc_gap_identity_two_interfaces():
    # with equal cores, the advantage of merging after the cores is exactly
    # r_far * r_core * (1 - r_core) * r_link1 * r_link2
    rng = np.random.default_rng(17)
    for _ in range(1000):
        l1, l2, c, f = rng.random(4)
        chain = ReliabilityChain((Interface(l1, c), Interface(l2, c)), r_far=f)
        gap = reliability(chain, "ifd") - reliability(chain, "dc")
        assert gap == pytest.approx(f * c * (1.0 - c) * l1 * l2, abs=1e-12)


def test_ifd_beats_dc_only_for_good_anchor_links():
    # with unequal cores the ordering flips once the anchor link degrades
    # past r_link1 = (c1 - c2) / (c1 * (1 - c2)); check both sides
    threshold = (0.999 - 0.99) / (0.999 * (1.0 - 0.99))
    good = ReliabilityChain(
        (Interface(threshold + 0.01, 0.999), Interface(0.9, 0.99)), r_far=0.9999)
    bad = ReliabilityChain(
        (Interface(threshold - 0.01, 0.999), Interface(0.9, 0.99)), r_far=0.9999)
    assert reliability(good, "ifd") > reliability(good, "dc")
    assert reliability(bad, "ifd") < reliability(bad, "dc")


def test_equal_ultra_reliable_cores_make_dc_and_ifd_close():
    # with both cores at 0.9999 the dc/ifd gap is negligible next to the
    # gain either brings over a single link
    chain = ReliabilityChain(
        (Interface(0.99, 0.9999), Interface(0.9, 0.9999)), r_far=0.9999)
    grid = np.geomspace(1e-4, 0.05, 50)
    rows = outage_sweep(chain, grid)
    outage = {}
    for q, arch, e2e in rows:
        outage[(q, arch)] = e2e
    gap_multi = max(abs(outage[(q, "dc")] - outage[(q, "ifd")]) for q in grid)
    gap_single = max(outage[(q, "single")] - outage[(q, "dc")] for q in grid)
    assert gap_multi < 0.05 * gap_single


def test_reliability_validation():
    with pytest.raises(ValueError):
        reliability(_BASELINE, "triple")
    with pytest.raises(ValueError):
        Interface(1.1, 0.5)
    with pytest.raises(ValueError):
        ReliabilityChain((), r_far=0.9)
    with pytest.raises(TypeError):
        ReliabilityChain(((0.9, 0.9),), r_far=0.9)
    with pytest.raises(ValueError):
        ReliabilityChain((Interface(0.9, 0.9),), r_far=-0.1)


def test_outage_sweep_shape_and_order():
    grid = [1e-3, 1e-2, 1e-1]
    rows = outage_sweep(_BASELINE, grid)
    assert len(rows) == len(grid) * len(ARCHITECTURES)
    # outer loop over outage, inner over architecture
    assert [r[0] for r in rows[:3]] == [1e-3] * 3
    assert [r[1] for r in rows[:3]] == list(ARCHITECTURES)


def test_outage_sweep_consistent_with_reliability():
    rows = outage_sweep(_BASELINE, [0.01], archs=("ifd",))
    patched = ReliabilityChain(
        (Interface(0.99, 0.999), _BASELINE.interfaces[1]), r_far=0.9999)
    assert rows[0][2] == pytest.approx(1.0 - reliability(patched, "ifd"), rel=1e-12)


def test_outage_sweep_varies_chosen_interface():
    rows = outage_sweep(_BASELINE, [0.5], archs=("single",), vary_index=1)
    # interface 0 untouched, so the single-interface outage stays put
    assert rows[0][2] == pytest.approx(1.0 - reliability(_BASELINE, "single"),
                                       rel=1e-12)


def test_outage_sweep_validation():
    with pytest.raises(ValueError):
        outage_sweep(_BASELINE, [0.1], vary_index=2)
    with pytest.raises(ValueError):
        outage_sweep(_BASELINE, [1.5])
