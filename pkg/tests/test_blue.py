import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eo_bridge import blue, red
from eo_bridge.errors import ThresholdError
from eo_bridge.model import SystemParams, derive_rates

from conftest import below_threshold, random_params, system_params
from oracles import smatrix_by_inversion


def at_G0(G0, eta_a=1.0, eta_b=1.0, Ga=1.0, Gb=1.0):
    return SystemParams.from_cooperativity(G0, Ga, Gb, eta_a, eta_b)


class TestPoles:
    def test_uncoupled(self):
        bp = blue.blue_poles(SystemParams(1.0, 0.0, 0.4, 0.0))
        assert (bp.pi_plus, bp.pi_minus) == (-0.2, -0.5)
        assert not bp.above_threshold

    @given(system_params(max_G0=5.0))
    def test_always_real_and_roots(self, p):
        bp = blue.blue_poles(p)
        assert isinstance(bp.pi_plus, float) and isinstance(bp.pi_minus, float)
        assert bp.pi_plus >= bp.pi_minus - 1e-15 * p.max_rate
        scale = max(p.Gamma_a * p.Gamma_b, p.coupling_sq)
        for pole in (bp.pi_plus, bp.pi_minus):
            assert abs(blue.blue_denominator(p, pole)) <= 1e-12 * scale

    @pytest.mark.parametrize("Ga,Gb", [(1, 1), (2, 0.3), (0.05, 4)])
    def test_threshold_pole_at_origin(self, Ga, Gb):
        bp = blue.blue_poles(at_G0(1.0, Ga=Ga, Gb=Gb))
        assert abs(bp.pi_plus) < 1e-15 * max(Ga, Gb)
        if Ga == Gb:
            assert bp.above_threshold

    def test_above_threshold_unstable(self):
        bp = blue.blue_poles(at_G0(1.5))
        assert bp.pi_plus > 0 and bp.above_threshold

    def test_near_pole_accurate_for_weak_pump(self):
        # near root -Gb/2 + small; compare to the series k/(Ga/2 - Gb/2)
        p = SystemParams(1e6, 0.0, 1.0, 0.0, 1e-3)
        k = p.coupling_sq
        expected = -0.5 + k / (0.5e6 - 0.5) + k**2 / (0.5e6 - 0.5) ** 3
        assert blue.blue_poles(p).pi_plus == pytest.approx(expected, rel=1e-14)

    @given(system_params(max_G0=5.0), st.complex_numbers(max_magnitude=10))
    def test_dual_of_red_denominator(self, p, s):
        # DD(s; |g alpha|^2) = D(s; -|g alpha|^2)
        assert blue.blue_denominator(p, s) == pytest.approx(
            red.denominator(p, s) - 2 * p.coupling_sq, rel=1e-12, abs=1e-12)

    def test_root_locus_real_until_threshold(self):
        p = SystemParams(1.0, 0.0, 0.25, 0.0)
        mags = np.linspace(0, 1, 101)
        locus = blue.root_locus(p, mags)
        assert locus.meta["threshold"] == pytest.approx(0.25)
        assert np.all(locus.values["im_p_plus"] == 0)
        assert np.all(np.diff(locus.values["re_p_plus"]) > 0)
        assert np.all(np.diff(locus.values["re_p_minus"]) < 0)
        np.testing.assert_array_equal(locus.values["above_threshold"], mags >= 0.25)


class TestThreshold:
    @pytest.mark.parametrize("fn", [
        lambda p: blue.blue_scattering_matrix(p, 0.0),
        lambda p: blue.idler_gain(p, 0.0),
        lambda p: blue.noise_spectra(p, 0.0),
        lambda p: blue.pair_state(p, [0.0]),
        lambda p: blue.integrated_flux(p),
    ])
    @pytest.mark.parametrize("G0", [1.0, 1.01, 30.0])
    def test_refuses_at_or_above(self, fn, G0):
        with pytest.raises(ThresholdError) as info:
            fn(at_G0(G0))
        assert info.value.G0 == pytest.approx(G0)

    def test_nonclassicality_defined_at_threshold(self):
        assert blue.nonclassicality(at_G0(1.0), 0.0) == 0.0
        with pytest.raises(ThresholdError):
            blue.nonclassicality(at_G0(1.0001), 0.0)


class TestScattering:
    def test_uncoupled_is_cavity_reflection(self):
        m = blue.blue_scattering_matrix(SystemParams(0.7, 0.3, 1.1, 0.4), 0.0)
        assert m.entry("A_out", "B+") == 0 and m.entry("B_out+", "A") == 0
        assert m.entry("A_out", "A") == pytest.approx((0.7 - 0.3) / 1.0)

    @given(below_threshold(), st.floats(-30, 30))
    def test_symplectic(self, p, w):
        m = blue.blue_scattering_matrix(p, w)
        assert m.symplectic_residual() < 1e-10 * max(1.0, float(np.max(np.abs(m.s))) ** 2)

    def test_symplectic_random(self, rng):
        for _ in range(100):
            p = random_params(rng, (0, 0.99))
            assert blue.blue_scattering_matrix(p, 3 * rng.normal()).symplectic_residual() < 1e-10

    @given(below_threshold(), st.floats(-30, 30))
    def test_matches_inversion(self, p, w):
        S = blue.blue_scattering_matrix(p, w).s
        ref = smatrix_by_inversion(p, w, "blue")
        np.testing.assert_allclose(S, ref, atol=1e-10 * max(1.0, float(np.max(np.abs(ref)))))

    def test_explicit_J(self):
        np.testing.assert_array_equal(blue.J_IN, np.diag([1, -1, 1, -1]))
        np.testing.assert_array_equal(blue.J_OUT, np.diag([1, -1]))


class TestSpectra:
    def test_idler_gain_half_threshold(self):
        assert blue.idler_gain(at_G0(0.5), 0.0) == pytest.approx(8.0, rel=1e-14)

    @given(below_threshold())
    def test_zero_detuning_formula(self, p):
        r = derive_rates(p)
        ref = 4 * r.eta * r.G0 / (1 - r.G0) ** 2
        assert blue.idler_gain(p, 0.0) == pytest.approx(ref, rel=1e-9, abs=1e-300)

    @given(below_threshold(), st.floats(-30, 30))
    def test_gain_equals_both_cross_entries(self, p, w):
        m = blue.blue_scattering_matrix(p, w)
        R = blue.idler_gain(p, w)
        assert abs(m.entry("A_out", "B+")) ** 2 == pytest.approx(R, rel=1e-9, abs=1e-300)
        assert abs(m.entry("B_out+", "A")) ** 2 == pytest.approx(R, rel=1e-9, abs=1e-300)

    @given(below_threshold(), st.floats(-30, 30))
    def test_parasitic_ratios(self, p, w):
        s = blue.noise_spectra(p, w)
        assert s.R_A_p * p.gamma_b == pytest.approx(s.R * p.gamma_b_p, rel=1e-12, abs=1e-300)
        assert s.R_B_p * p.gamma_a == pytest.approx(s.R * p.gamma_a_p, rel=1e-12, abs=1e-300)

    @given(below_threshold(), st.floats(-30, 30))
    def test_noise_from_matrix_entries(self, p, w):
        m = blue.blue_scattering_matrix(p, w)
        s = blue.noise_spectra(p, w)
        # with vacuum inputs, photons in A_out come from the b-side inputs
        assert s.R + s.R_A_p == pytest.approx(
            abs(m.entry("A_out", "B+")) ** 2 + abs(m.entry("A_out", "B'+")) ** 2, rel=1e-9, abs=1e-300)
        K = m.entry("A_out", "A") * np.conj(m.entry("B_out+", "A")) \
            + m.entry("A_out", "A'") * np.conj(m.entry("B_out+", "A'"))
        assert s.K == pytest.approx(K, rel=1e-9, abs=1e-300)

    def test_K_identity_random(self, rng):
        for _ in range(200):
            p = random_params(rng, (0, 0.99))
            w = 3 * rng.normal()
            s = blue.noise_spectra(p, w)
            eta = derive_rates(p).eta
            assert abs(abs(s.K) ** 2 - s.R**2 / eta - s.R) < 1e-10 * max(1.0, s.R**2 / eta)
            # classical bound |K|^2 <= R^2 / eta is violated by R
            if s.R > 0:
                assert abs(s.K) ** 2 > s.R**2 / eta

    @given(below_threshold(), st.floats(0, 30))
    def test_even_in_detuning(self, p, w):
        assert blue.idler_gain(p, w) == pytest.approx(blue.idler_gain(p, -w), rel=1e-12, abs=1e-300)

    def test_gain_diverges_toward_threshold(self):
        gains = [blue.idler_gain(at_G0(G), 0.0) for G in (0.9, 0.99, 0.999)]
        assert gains[0] < gains[1] < gains[2] and gains[2] > 1e6


class TestNonclassicality:
    def test_weak_pump_value(self):
        assert blue.nonclassicality(at_G0(0.01), 0.0) == pytest.approx(math.log(25.5025), rel=1e-13)
        assert abs(blue.nonclassicality(at_G0(0.01), 0.0) - 3.2387) < 1e-3

    def test_zero_coupling_infinite(self):
        assert blue.nonclassicality(SystemParams(1, 0, 1, 0), 0.0) == math.inf
        assert np.all(np.isinf(blue.nonclassicality(SystemParams(1, 0, 1, 0), [0.0, 1.0])))

    @given(st.floats(0.001, 0.999), st.floats(0.05, 1.0), st.floats(0.05, 1.0), st.floats(-5, 5))
    def test_independent_of_efficiency(self, G0, fa, fb, w):
        a = blue.nonclassicality(at_G0(G0), w)
        b = blue.nonclassicality(at_G0(G0, fa, fb), w)
        assert a == pytest.approx(b, rel=1e-12)

    @given(below_threshold(), st.floats(-10, 10))
    def test_matches_definition(self, p, w):
        if p.coupling_sq == 0:
            return
        R = blue.idler_gain(p, w)
        if R == 0:
            return
        ref = math.log1p(derive_rates(p).eta / R)
        assert blue.nonclassicality(p, w) == pytest.approx(ref, rel=1e-10)

    def test_positive_below_threshold(self):
        G0s = np.linspace(0.01, 0.99, 50)
        assert all(blue.nonclassicality(at_G0(G), 0.0) > 0 for G in G0s)


class TestPairState:
    def test_heralding(self):
        assert blue.heralding_efficiency(at_G0(0.005)) == 1.0
        p = SystemParams(1.0, 0.0, 0.5, 0.5, 0.01)
        assert blue.heralding_efficiency(p) == 0.5
        ps = blue.pair_state(p, [0.0])
        R, Ra = ps.summary.pair_rate_density[0], ps.summary.accidental_a[0]
        assert R / (R + Ra) == pytest.approx(0.5, rel=1e-14)

    def test_amplitude_and_partner(self):
        p = at_G0(0.004)
        w = np.linspace(-2, 2, 9)
        ps = blue.pair_state(p, w)
        assert ps.perturbative
        np.testing.assert_allclose(np.abs(ps.amplitude) ** 2, ps.summary.pair_rate_density, rtol=1e-12)
        m = [blue.blue_scattering_matrix(p, x).entry("A_out", "B+") for x in w]
        np.testing.assert_allclose(ps.amplitude, m, rtol=1e-12)
        sweep = ps.to_sweep()
        np.testing.assert_array_equal(sweep.values["omega_partner"], -w)
        assert sweep.meta["perturbative"] is True

    def test_flag_and_warning(self, caplog):
        with caplog.at_level(logging.WARNING):
            ps = blue.pair_state(at_G0(0.3), [0.0, 1.0])
        assert not ps.perturbative
        assert "perturbative" in caplog.text
        assert blue.pair_state(at_G0(0.3), [0.0], perturbative_limit=0.5).perturbative


class TestFlux:
    def test_zero_without_pump(self):
        assert blue.integrated_flux(SystemParams(1, 0, 1, 0)) == 0.0

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            blue.integrated_flux(at_G0(0.2), "c")

    def test_closed_form_equal_rates(self):
        # Gamma_a = Gamma_b = G, lossless: flux = 2k / (G (1 - G0)) with G0 = 4k/G^2
        p = at_G0(0.5, Ga=2.0, Gb=2.0)
        k = p.coupling_sq
        assert blue.integrated_flux(p, "b") == pytest.approx(2 * k / (2.0 * 0.5), rel=1e-10)
        assert blue.integrated_flux(p, "a") == pytest.approx(2 * k / (2.0 * 0.5), rel=1e-10)
