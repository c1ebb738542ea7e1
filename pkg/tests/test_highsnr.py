"""Delta-scaled amplification, cutset bound, achievable rate, gap bound."""
import math

import numpy as np
import pytest

from anc_secrecy import (
    LayeredNetwork,
    RegimeViolationError,
    achievable_highsnr,
    cutset_bound,
    gap_bound,
    high_snr_report,
    high_snr_scaling,
    noise_power_bound,
    plateau_index,
    propagate,
    rates,
)

FIG5A = LayeredNetwork(L=2, nodes_per_layer=(2, 2), h_s=0.689, h=(0.603,),
                       h_t=0.203, h_e=0.031, M=2, P_s=500.0, P=500.0, sigma2=1.0)
FIG5B = LayeredNetwork(L=2, nodes_per_layer=(2, 2), h_s=0.260, h=(0.925,),
                       h_t=0.113, h_e=0.012, M=2, P_s=500.0, P=500.0, sigma2=1.0)


def _regime_net(rng):
    """Random uniform net with last-layer snoop, h_t > h_e, strong powers."""
    L = int(rng.integers(1, 4))
    N = int(rng.integers(1, 4))
    h_e = float(rng.uniform(0.02, 0.3))
    return LayeredNetwork(
        L=L, nodes_per_layer=(N,) * L,
        h_s=float(rng.uniform(0.3, 1.2)),
        h=tuple(float(rng.uniform(0.3, 1.2)) for _ in range(L - 1)),
        h_t=float(rng.uniform(0.35, 1.2)), h_e=h_e, M=L,
        P_s=float(rng.uniform(5e3, 5e5)), P=float(rng.uniform(5e2, 5e3)),
        sigma2=1.0)


class TestDeltaScaling:
    def test_delta_zero_is_max_coherent(self):
        sv = high_snr_scaling(FIG5A, 0.0)
        b1 = math.sqrt(500.0 / (500.0 * 0.689 ** 2))
        b2 = math.sqrt(500.0 / (4 * 500.0 * 0.603 ** 2))
        assert sv.beta[0][0] == pytest.approx(b1, rel=1e-14)
        assert sv.beta[1][0] == pytest.approx(b2, rel=1e-14)

    def test_fig5a_delta_betas(self):
        # frozen by hand: beta_i = sqrt(P / ((1+delta) P_Ri_max))
        sv = high_snr_scaling(FIG5A, 0.005)
        assert sv.beta[0][0] == pytest.approx(1.4477639130734878, rel=1e-12)
        assert sv.beta[1][0] == pytest.approx(0.8271221692434768, rel=1e-12)

    def test_regime_violation_names_layer(self):
        weak = LayeredNetwork(L=2, nodes_per_layer=(2, 2), h_s=0.26, h=(0.925,),
                              h_t=0.113, h_e=0.012, M=2, P_s=500.0, P=500.0,
                              sigma2=1.0)
        # layer 1 input SNR is 500 * 0.26^2 = 33.8 < 1/0.005 = 200
        with pytest.raises(RegimeViolationError) as err:
            high_snr_scaling(weak, 0.005)
        assert err.value.layer == 1

    def test_feasibility_chain_within_bounds(self):
        # in-regime delta scaling never exceeds the true cascaded bounds
        rng = np.random.default_rng(8)
        for _ in range(40):
            net = _regime_net(rng)
            delta = float(rng.uniform(0.001, 0.05))
            try:
                sv = high_snr_scaling(net, delta)
            except RegimeViolationError:
                continue
            flow = propagate(net, sv)
            for l in range(net.L):
                tx = sv.beta[l][0] ** 2 * flow.rx_power[l]
                assert tx <= net.uniform_P * (1 + 1e-12)

    def test_source_power_invariance_of_signal(self):
        # the delta-scaled source power at the destination does not depend
        # on P_s: layer-1 scaling absorbs it
        from dataclasses import replace
        for p_s in (1e4, 1e6, 1e8):
            net = replace(FIG5A, P_s=p_s)
            flow = propagate(net, high_snr_scaling(net, 0.005))
            expected = 4 * 500.0 * 0.203 ** 2 / 1.005 ** 2
            assert flow.dest_signal == pytest.approx(expected, rel=1e-12)


class TestCutset:
    def test_equal_gains_zero(self):
        net = LayeredNetwork(L=2, nodes_per_layer=(2, 2), h_s=0.7, h=(0.6,),
                             h_t=0.4, h_e=0.4, M=2, P_s=10, P=10, sigma2=1)
        assert cutset_bound(net) == 0.0

    def test_fig5a_value(self):
        # 0.5 log2(83.418 / 2.922), hand arithmetic of the stated formula
        assert cutset_bound(FIG5A) == pytest.approx(
            0.5 * math.log2(83.418 / 2.922), rel=1e-12)

    def test_no_eavesdropper(self):
        net = LayeredNetwork(L=1, nodes_per_layer=(2,), h_s=0.7, h=(), h_t=0.4,
                             h_e=0.0, M=1, P_s=10, P=10, sigma2=1)
        assert cutset_bound(net) == pytest.approx(
            0.5 * math.log2(1 + 4 * 10 * 0.16), rel=1e-12)


class TestAchievable:
    def test_single_layer_delta_zero_matches_allmax_diamond(self):
        from anc_secrecy import beta_max_vector
        net = LayeredNetwork.diamond(N=2, h_s=0.9, h_t=0.5, h_e=0.1, P_s=2e4,
                                     P=400.0, sigma2=1.0)
        rep = achievable_highsnr(net, 0.0)
        # at delta = 0 the scaling equals P/(P_s h_s^2) for the single layer,
        # which is the bound without the noise correction; rates nearly match
        # the all-max evaluation in the high-SNR regime
        direct = rates(net, beta_max_vector(net))
        assert rep.r_s == pytest.approx(direct.r_s, rel=2e-3)

    def test_two_paths_agree(self):
        # formula-based quantities equal the generic propagation evaluation
        rng = np.random.default_rng(19)
        checked = 0
        while checked < 30:
            net = _regime_net(rng)
            delta = float(rng.uniform(0.0, 0.05))
            try:
                formula = achievable_highsnr(net, delta)
            except RegimeViolationError:
                continue
            checked += 1
            direct = rates(net, high_snr_scaling(net, delta))
            assert formula.snr_t == pytest.approx(direct.snr_t, rel=1e-10)
            assert formula.snr_e == pytest.approx(direct.snr_e, rel=1e-10)
            assert formula.r_s == pytest.approx(direct.r_s, rel=1e-10, abs=1e-12)

    def test_requires_last_layer_snoop(self):
        net = LayeredNetwork(L=2, nodes_per_layer=(2, 2), h_s=0.7, h=(0.6,),
                             h_t=0.4, h_e=0.1, M=1, P_s=1e5, P=100, sigma2=1)
        with pytest.raises(ValueError):
            achievable_highsnr(net, 0.01)


class TestGapBound:
    def test_fig5a_fig5b_frozen(self):
        # frozen by hand arithmetic of the bound formula
        assert gap_bound(FIG5A, 0.005) == pytest.approx(0.2492668, abs=2e-7)
        assert gap_bound(FIG5B, 0.005) == pytest.approx(0.0928971, abs=2e-7)

    def test_delta_zero(self):
        assert gap_bound(FIG5A, 0.0) == 0.0

    def test_vacuous_region_rejected(self):
        with pytest.raises(ValueError):
            gap_bound(FIG5A, 0.5)  # L*delta = 1

    def test_decreasing_to_zero(self):
        vals = [gap_bound(FIG5A, 10.0 ** -k) for k in range(2, 9)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-6


class TestSandwichAndNoiseBound:
    def test_gap_sandwich(self):
        # 0 <= actual gap <= analytic bound whenever the regime holds
        rng = np.random.default_rng(23)
        checked = 0
        while checked < 40:
            net = _regime_net(rng)
            delta = float(rng.uniform(0.001, min(0.2, 0.9 / net.L)))
            try:
                rep = high_snr_report(net, delta)
            except RegimeViolationError:
                continue
            checked += 1
            assert rep.r_s_delta <= rep.c_cut + 1e-9
            assert -1e-9 <= rep.actual_gap <= rep.gap_bound + 1e-9

    def test_noise_power_bound(self):
        rng = np.random.default_rng(29)
        checked = 0
        while checked < 40:
            net = _regime_net(rng)
            delta = float(rng.uniform(0.001, 0.05))
            try:
                sv = high_snr_scaling(net, delta)
            except RegimeViolationError:
                continue
            checked += 1
            flow = propagate(net, sv)
            assert flow.dest_noise <= noise_power_bound(net, delta) * (1 + 1e-12)


class TestPlateau:
    def test_detects_flat_tail(self):
        ys = [1.0, 1.5, 1.9, 1.99, 1.9999, 1.99999, 1.999991]
        idx = plateau_index(ys, rel_slope=1e-4)
        assert idx == len(ys) - 1

    def test_none_when_still_rising(self):
        assert plateau_index([1.0, 2.0, 3.0], rel_slope=1e-4) is None
