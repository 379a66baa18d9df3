"""Bath layer: spectral densities, correlation functions, timescales, KMS."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qme.baths import OhmicBath, RectangleBath, TabulatedBath, ToyBath, make_bath

import oracles


class TestToyBath:
    def test_correlation_matches_rational_oracle(self, toy_bath):
        # the closed rational form with the bath's own gamma prefactor
        for t in (0.0, 0.5, 1.0, 2.3, 7.7):
            ours = toy_bath.correlation(t)
            ref = oracles.toy_rational_correlation(t, normalization=toy_bath.gamma_prefactor)
            assert abs(ours - ref) <= 1e-8 * abs(ref)

    def test_correlation_matches_inverse_transform_of_gamma(self, toy_bath):
        radius = toy_bath.support_radius(tol=1e-14)
        ref = oracles.correlation_from_gamma(toy_bath.gamma, 1.0, radius)
        ours = toy_bath.correlation(1.0)
        assert abs(ours - ref) <= 1e-8 * abs(ref)

    def test_gamma_matches_transform_of_correlation(self, toy_bath):
        for w in (-2.0, 0.3, 2.0, 5.0):
            two_re_f, _ = oracles.gamma_from_correlation(toy_bath.correlation, w)
            assert np.isclose(two_re_f, float(toy_bath.gamma(w)), rtol=5e-7)

    def test_tau_sb_is_exact(self, toy_bath):
        ts = toy_bath.timescales()
        assert np.isclose(ts.tau_SB, 10.0, rtol=1e-8)

    def test_tau_b_value(self, toy_bath):
        assert np.isclose(toy_bath.timescales().tau_B, 0.68580, rtol=1e-4)

    def test_normalization_constant(self, toy_bath):
        assert np.isclose(toy_bath.normalization, 21.034, rtol=1e-3)
        assert np.isclose(toy_bath.gamma_prefactor, 3 * toy_bath.normalization)

    def test_gamma_peak_and_half_maximum(self, toy_bath):
        w = np.linspace(0.0, 20.0, 40_001)
        g = np.asarray(toy_bath.gamma(w))
        peak = w[np.argmax(g)]
        assert np.isclose(peak, 2.013, atol=5e-3)
        above = w[g >= 0.5 * g.max()]
        assert np.isclose(above[0], 0.1485, atol=2e-3)
        assert np.isclose(above[-1], 6.0896, atol=2e-3)

    def test_kms(self, toy_bath):
        report = toy_bath.kms_report(np.linspace(-10, 10, 201))
        assert report["max_relative_deviation"] < 1e-8
        assert report["slope_relative_residual"] < 1e-4

    def test_power_law_tail(self, toy_bath):
        # |C(t)| ~ 1/t^4 at late times
        ratio = abs(toy_bath.correlation(40.0)) / abs(toy_bath.correlation(20.0))
        assert np.isclose(ratio, 2.0**-4, rtol=0.1)


class TestOhmicBath:
    def test_gamma_formula(self, ohmic_bath):
        for w in (-3.0, -0.5, 0.4, 2.0):
            ref = oracles.ohmic_gamma_reference(w, 1.0, 1.0, 1.0)
            assert np.isclose(float(ohmic_bath.gamma(w)), ref, rtol=1e-12)

    def test_gamma_zero_frequency_limit(self, ohmic_bath):
        assert np.isclose(float(ohmic_bath.gamma(1e-9)), float(ohmic_bath.gamma(0.0)), rtol=1e-6)

    def test_correlation_matches_inverse_transform(self, ohmic_bath):
        radius = ohmic_bath.support_radius(tol=1e-12)
        for t in (0.3, 1.0, 2.5):
            ref = oracles.correlation_from_gamma(ohmic_bath.gamma, t, radius)
            ours = ohmic_bath.correlation(t)
            assert abs(ours - ref) <= 1e-7 * max(abs(ref), 1e-12)

    def test_kms(self, ohmic_bath):
        report = ohmic_bath.kms_report(np.linspace(-10, 10, 201))
        assert report["max_relative_deviation"] < 1e-8

    def test_timescales_require_cutoff(self, ohmic_bath):
        ts = ohmic_bath.timescales(T_cutoff=50.0)
        assert ts.tau_B > 0 and np.isfinite(ts.tau_B)
        assert ts.epsilon_T > 0

    def test_tau_b_grows_with_cutoff(self, ohmic_bath):
        # the first-moment integral diverges logarithmically: no finite limit
        t1 = ohmic_bath.timescales(T_cutoff=20.0).tau_B
        t2 = ohmic_bath.timescales(T_cutoff=200.0).tau_B
        assert t2 > t1


class TestRectangleBath:
    def test_gamma_is_sinc(self, rectangle_bath):
        g, tau_c = 0.5, 1.0
        for w in (0.0, 0.7, 3.0):
            expected = 2 * g**2 * tau_c * np.sinc(w * tau_c / np.pi)
            assert np.isclose(float(rectangle_bath.gamma(w)), expected, rtol=1e-12)

    def test_gamma_goes_negative(self, rectangle_bath):
        w = np.linspace(0, 10, 1001)
        assert np.min(np.asarray(rectangle_bath.gamma(w))) < 0

    def test_not_cp_admissible(self, rectangle_bath):
        with pytest.raises(ValueError):
            rectangle_bath.validate()

    def test_correlation_is_rectangle(self, rectangle_bath):
        assert np.isclose(rectangle_bath.correlation(0.5), 0.25)
        assert np.isclose(rectangle_bath.correlation(1.5), 0.0)

    def test_timescales(self, rectangle_bath):
        ts = rectangle_bath.timescales()
        assert np.isclose(ts.tau_SB, 1.0 / 0.25)
        assert np.isclose(ts.tau_B, 0.5)


class TestTabulatedBath:
    def test_interpolates_parent(self, toy_bath):
        w = np.linspace(-30, 30, 4001)
        tab = TabulatedBath(w, np.asarray(toy_bath.gamma(w)), beta=4.0)
        for probe in (-2.0, 0.1, 3.0):
            assert np.isclose(float(tab.gamma(probe)), float(toy_bath.gamma(probe)), rtol=1e-5)

    def test_timescales_need_explicit_cutoff(self, toy_bath):
        w = np.linspace(-30, 30, 801)
        tab = TabulatedBath(w, np.asarray(toy_bath.gamma(w)), beta=4.0)
        with pytest.raises(ValueError):
            tab.timescales()
        ts = tab.timescales(T_cutoff=30.0)
        assert np.isfinite(ts.tau_B)


class TestFactoryAndProperties:
    def test_make_bath_kinds(self):
        assert make_bath("toy").kind == "toy"
        assert make_bath("ohmic", kappa=1.0, omega_c=1.0, beta=1.0).kind == "ohmic"
        assert make_bath("rectangle", g=1.0, tau_c=0.5).kind == "rectangle"

    def test_make_bath_unknown(self):
        with pytest.raises(ValueError):
            make_bath("lorentzian")

    @given(st.floats(min_value=0.2, max_value=3.0), st.floats(min_value=0.5, max_value=4.0))
    @settings(max_examples=15, deadline=None)
    def test_ohmic_kms_property(self, omega_c, beta):
        bath = OhmicBath(kappa=1.0, omega_c=omega_c, beta=beta)
        w = np.linspace(0.1, 8.0, 50)
        lhs = np.asarray(bath.gamma(-w))
        rhs = np.exp(-beta * w) * np.asarray(bath.gamma(w))
        assert np.allclose(lhs, rhs, rtol=1e-9)

    @given(st.floats(min_value=1.001, max_value=1.2), st.floats(min_value=0.51, max_value=1.5))
    @settings(max_examples=10, deadline=None)
    def test_toy_gamma_nonnegative_property(self, a, b):
        bath = ToyBath(a=a, b=b)
        w = np.linspace(-15, 15, 301)
        assert np.min(np.asarray(bath.gamma(w))) >= 0

    def test_half_fourier_consistency(self, toy_bath):
        # f(w) = gamma(w)/2 + i S(w), against direct half-line quadrature
        for w in (-1.5, 0.5, 2.0):
            ref = oracles.half_fourier_reference(toy_bath.correlation, w)
            ours = toy_bath.half_fourier_f(w)
            assert abs(ours - ref) < 1e-7
            assert np.isclose(ours.real, 0.5 * float(toy_bath.gamma(w)), rtol=1e-7)
