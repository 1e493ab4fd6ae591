import math

import numpy as np
import pytest

import ringpair as rp
from ringpair.errors import BracketError, FitError, QuadratureError

from conftest import lorentzian


class TestIntegrateAdaptive:
    def test_sine(self):
        res = rp.integrate_adaptive(np.sin, 0.0, math.pi, rel_tol=1e-12)
        assert res.value == pytest.approx(2.0, rel=1e-12)
        assert res.abs_error_estimate >= 0
        assert res.evaluations >= 15

    def test_squared_lorentzian_mass(self):
        # int (G^2/4)^2 / ((G^2/4) + x^2)^2 dx over R = pi*G/4
        gamma = 3.7

        def f(x):
            h2 = gamma * gamma / 4.0
            return h2 * h2 / (h2 + x * x) ** 2

        res = rp.integrate_adaptive(f, -12 * gamma, 12 * gamma, rel_tol=1e-9)
        tail = gamma ** 4 / 16.0 / (3.0 * (12.0 * gamma) ** 3) * 2.0
        assert res.value + tail == pytest.approx(math.pi * gamma / 4.0,
                                                 rel=1e-6)

    def test_oscillatory_complex_vs_sinc(self):
        dk, L = 2.7e5, 80e-6
        res = rp.integrate_adaptive(lambda z: np.exp(1j * dk * z), 0.0, L,
                                    rel_tol=1e-12)
        half = 0.5 * dk * L
        expected = L * np.exp(1j * half) * math.sin(half) / half
        assert abs(res.value - expected) / abs(expected) < 1e-12

    def test_full_period_null_with_abs_floor(self):
        L = 50e-6
        res = rp.integrate_adaptive(lambda z: np.exp(2j * math.pi * z / L),
                                    0.0, L, rel_tol=1e-9, abs_tol=1e-9 * L)
        assert abs(res.value) < 1e-9 * L

    @pytest.mark.parametrize("deg", [0, 1, 3, 7, 13])
    def test_polynomials_exact_and_estimate_conservative(self, deg):
        coeffs = np.arange(1.0, deg + 2.0)

        def f(x):
            return np.polyval(coeffs, x)

        exact = np.polyval(np.polyint(coeffs), 2.0) - np.polyval(
            np.polyint(coeffs), -1.0)
        res = rp.integrate_adaptive(f, -1.0, 2.0, rel_tol=1e-13)
        true_err = abs(res.value - exact)
        assert true_err <= max(10.0 * res.abs_error_estimate,
                               1e-13 * abs(exact))

    def test_error_estimates_conservative_on_battery(self):
        cases = [
            (lambda x: np.exp(-x * x), -5.0, 5.0, math.sqrt(math.pi)),
            (lambda x: lorentzian(x, 0.0, 2.0), -30.0, 30.0,
             2.0 * math.atan(30.0)),  # int h^2/(h^2+x^2), h=1
            (lambda x: np.cos(40.0 * x), 0.0, 1.0, math.sin(40.0) / 40.0),
        ]
        for f, a, b, exact in cases:
            res = rp.integrate_adaptive(f, a, b, rel_tol=1e-10)
            assert abs(res.value - exact) <= max(
                10.0 * res.abs_error_estimate, 1e-12 * abs(exact))

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_subdivision_limit_raises_with_payload(self):
        def nasty(x):
            return np.abs(x) ** -0.9

        with pytest.raises(QuadratureError) as err:
            rp.integrate_adaptive(nasty, -1.0, 1.0, rel_tol=1e-13,
                                  max_subdivisions=8)
        assert err.value.value is not None
        assert err.value.error_estimate is not None

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            rp.integrate_adaptive(np.sin, 1.0, 1.0)

    def test_deterministic(self):
        def f(x):
            return np.sin(37.0 * x) / (1.0 + x * x)

        a = rp.integrate_adaptive(f, 0.0, 9.0, rel_tol=1e-11)
        b = rp.integrate_adaptive(f, 0.0, 9.0, rel_tol=1e-11)
        assert a.value == b.value
        assert a.evaluations == b.evaluations


class TestFindRootBracketed:
    def test_linear(self):
        root = rp.find_root_bracketed(lambda x: 3.0 * x - 1.2, -5.0, 5.0)
        assert root == pytest.approx(0.4, rel=1e-12)

    def test_endpoint_root(self):
        assert rp.find_root_bracketed(lambda x: x - 2.0, 2.0, 5.0) == 2.0
        assert rp.find_root_bracketed(lambda x: x - 5.0, 2.0, 5.0) == 5.0

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            rp.find_root_bracketed(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_stays_in_bracket(self):
        calls = []

        def g(x):
            calls.append(x)
            return math.tan(x) - 1.0

        root = rp.find_root_bracketed(g, 0.0, 1.5, tol=1e-14)
        assert 0.0 <= min(calls) and max(calls) <= 1.5
        assert root == pytest.approx(math.pi / 4.0, rel=1e-12)

    def test_resonance_condition(self, wg_lossless):
        # k(w) L = 2 pi m root matches the closed-form comb position
        L = 641e-6
        m = round(wg_lossless.k_real(wg_lossless.omega0) * L / (2 * math.pi))
        root = rp.find_root_bracketed(
            lambda w: wg_lossless.k_real(w) * L - 2 * math.pi * m,
            wg_lossless.omega0 * 0.999, wg_lossless.omega0 * 1.001)
        analytic = wg_lossless.omega0 + wg_lossless.v_g * (
            2 * math.pi * m / L - wg_lossless.k0)
        assert root == pytest.approx(analytic, rel=1e-12)


class TestFitLorentzian:
    def test_exact_samples_recovered(self):
        center, fwhm, peak = 1.2e15, 3.1e9, 42.0
        w = np.linspace(center - 4 * fwhm, center + 4 * fwhm, 301)
        fit = rp.fit_lorentzian(w, lorentzian(w, center, fwhm, peak))
        assert fit.center == pytest.approx(center, rel=1e-12)
        assert fit.fwhm == pytest.approx(fwhm, rel=1e-9)
        assert fit.peak == pytest.approx(peak, rel=1e-9)
        assert fit.residual_rms < 1e-9 * peak

    def test_noisy_samples_within_3pct(self):
        rng = np.random.default_rng(11)
        center, fwhm, peak = 0.0, 2.0, 1.0
        w = np.linspace(-8.0, 8.0, 401)
        y = lorentzian(w, center, fwhm, peak)
        y = y + 0.01 * (2.0 * rng.random(w.size) - 1.0)  # 1% uniform noise
        fit = rp.fit_lorentzian(w, y)
        assert fit.fwhm == pytest.approx(fwhm, rel=0.03)

    def test_flat_data_rejected(self):
        w = np.linspace(0.0, 1.0, 50)
        with pytest.raises(FitError):
            rp.fit_lorentzian(w, np.ones_like(w))

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            rp.fit_lorentzian(np.arange(4.0), np.arange(4.0))
