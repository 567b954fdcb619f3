import json
import math

import pytest

from tmdsim.fock import mode_marginal_probabilities
from tmdsim.network import (
    N_MODES,
    NetworkConfig,
    build_layout,
    per_bin_reach_probability,
    propagate,
)


def test_layout_shape():
    layout = build_layout()
    assert layout.n_modes == 23
    assert len(layout.detection_modes) == 16
    assert len(layout.loss_modes) == 7
    all_modes = list(layout.detection_modes.values()) + list(layout.loss_modes.values())
    assert sorted(all_modes) == list(range(23))
    assert layout.loop_exponent[0] == 0
    assert layout.loop_exponent[7] == 7
    per_stage = [sum(1 for s, _ in layout.loss_modes if s == k) for k in (1, 2, 3)]
    assert per_stage == [1, 2, 4]


def test_layout_numbering_is_stable():
    layout = build_layout()
    assert layout.detection_modes["A", 0] == 0
    assert layout.detection_modes["B", 7] == 15
    assert layout.loss_modes[1, 1] == 16
    assert layout.loss_modes[3, 7] == 22


def test_layout_json():
    doc = json.loads(build_layout().to_json())
    assert doc["n_modes"] == 23
    roles = [row["role"] for row in doc["modes"]]
    assert roles.count("detection") == 16 and roles.count("loss") == 7
    assert [row["mode"] for row in doc["modes"]] == list(range(23))


def test_lossless_single_photon_uniform():
    layout = build_layout()
    s = propagate(NetworkConfig(f=1.0, n=1))
    probs = mode_marginal_probabilities(s, layout.detection_mode_list())
    for i in range(16):
        occ = tuple(1 if j == i else 0 for j in range(16))
        assert probs[occ] == pytest.approx(1 / 16, abs=1e-12)


def test_vacuum_propagation():
    s = propagate(NetworkConfig(f=1.0, n=0))
    assert dict(s.terms) == {(0,) * N_MODES: 1.0}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lossless_leaves_loss_modes_empty(n):
    layout = build_layout()
    s = propagate(NetworkConfig(f=1.0, n=n))
    assert s.norm_squared() == pytest.approx(1.0, abs=1e-12)
    for occ in s.terms:
        assert all(occ[m] == 0 for m in layout.loss_modes.values())


def test_single_photon_with_fiber_loss():
    f = 0.97
    layout = build_layout()
    s = propagate(NetworkConfig(f=f, n=1))
    assert s.norm_squared() == pytest.approx(1.0, abs=1e-12)
    probs = s.probabilities()
    reach = per_bin_reach_probability(layout, f)
    for key, mode in layout.detection_modes.items():
        p = sum(v for occ, v in probs.items() if occ[mode] == 1)
        assert p == pytest.approx(f ** layout.loop_exponent[key[1]] / 16, abs=1e-14)
        assert p == pytest.approx(reach[key], abs=1e-14)
    detected = sum(reach.values())
    # geometric sum over the 8 bin exponents, both detectors
    assert detected == pytest.approx((1 - f**8) / (8 * (1 - f)), abs=1e-14)
    assert detected == pytest.approx(0.901069335676266, abs=1e-12)
    lost = sum(v for occ, v in probs.items() if any(occ[m] for m in layout.loss_modes.values()))
    assert lost == pytest.approx(1 - detected, abs=1e-12)


def test_reach_probabilities():
    layout = build_layout()
    assert all(p == 1 / 16 for p in per_bin_reach_probability(layout, 1.0).values())
    assert per_bin_reach_probability(layout, 0.97)["A", 7] == pytest.approx(
        0.97**7 / 16, rel=1e-15
    )
    assert per_bin_reach_probability(layout, 0.97)["B", 7] == pytest.approx(0.0504989, abs=1e-7)
    zero = per_bin_reach_probability(layout, 0.0)
    assert zero["A", 0] == zero["B", 0] == 1 / 16
    assert all(v == 0 for (d, b), v in zero.items() if b > 0)


def test_stage_transmissions():
    cfg = NetworkConfig(f=0.9, n=1)
    assert [cfg.stage_transmission(k) for k in (1, 2, 3)] == pytest.approx([0.9, 0.81, 0.6561])


def test_term_count_bound():
    s = propagate(NetworkConfig(f=0.97, n=3))
    assert len(s) <= math.comb(3 + 22, 22)
    assert all(sum(occ) == 3 for occ in s.terms)


def test_invalid_config():
    with pytest.raises(ValueError):
        NetworkConfig(f=1.2, n=1)
    with pytest.raises(ValueError):
        NetworkConfig(f=0.5, n=-1)
