"""Oracle and property tests for the reservoir integrals."""

import math

import numpy as np
import pytest
from scipy import integrate

from dephasim import (
    BathConfig,
    ValidationError,
    decay_Gamma,
    dephasing_grid,
    gamma_saturation,
    phase_S,
)


def _phase_oracle(t, bath):
    # S(t) = -(1/2) int_0^kc dk (k^2 t - k sin(kt)); split for oscillatory t
    kc = bath.k_c
    if kc * t <= 1.0:
        val, _ = integrate.quad(
            lambda k: k * k * t - k * math.sin(k * t), 0.0, kc,
            epsabs=1e-18, epsrel=1e-13, limit=200,
        )
    else:
        osc, _ = integrate.quad(
            lambda k: k, 0.0, kc, weight="sin", wvar=t,
            epsabs=1e-15, epsrel=1e-13, limit=200, maxp1=100,
        )
        val = t * kc**3 / 3.0 - osc
    return -0.5 * val


def _gamma_riemann(t, bath, panels):
    # midpoint rule; the w -> 0 limit of the integrand is regular
    h = bath.k_c / panels
    w = (np.arange(panels) + 0.5) * h
    f = w / np.tanh(0.5 * bath.beta * w) * np.sin(0.5 * w * t) ** 2
    return float(np.sum(f) * h)


class TestPhase:
    def test_zero_time(self):
        assert phase_S(0.0, BathConfig()) == 0.0

    def test_nonpositive(self):
        bath = BathConfig()
        t = np.linspace(0.0, 50.0, 301)
        assert np.all(phase_S(t, bath) <= 0.0)

    def test_vs_quadrature_oracle(self):
        bath = BathConfig()
        times = np.logspace(-3, 3, 100)
        got = phase_S(times, bath)
        want = np.array([_phase_oracle(t, bath) for t in times])
        np.testing.assert_allclose(got, want, rtol=1e-8)

    def test_vs_quadrature_oracle_other_cutoff(self):
        bath = BathConfig(epsilon=0.5, theta=4.0)
        assert bath.k_c == pytest.approx(2.0)
        times = np.logspace(-2, 2, 40)
        got = phase_S(times, bath)
        want = np.array([_phase_oracle(t, bath) for t in times])
        np.testing.assert_allclose(got, want, rtol=1e-8)

    @pytest.mark.parametrize("k_c", [0.5, 1.0, 2.0])
    def test_large_time_slope(self, k_c):
        bath = BathConfig(epsilon=k_c, theta=1.0)
        t = 1e5
        assert phase_S(t, bath) / t == pytest.approx(-k_c**3 / 6.0, abs=1e-8)

    def test_series_branch_continuity(self):
        # the series/direct switch sits at k_c t = 0.5
        bath = BathConfig()
        t = np.linspace(0.45, 0.55, 21)
        s = phase_S(t, bath)
        assert np.all(np.diff(s) < 0.0)
        want = np.array([_phase_oracle(x, bath) for x in t])
        np.testing.assert_allclose(s, want, rtol=1e-8)

    def test_vector_matches_scalar(self):
        bath = BathConfig()
        t = np.array([0.0, 1e-3, 0.7, 12.0, 3e3])
        vec = phase_S(t, bath)
        for ti, si in zip(t, vec):
            assert phase_S(float(ti), bath) == si

    def test_negative_time_rejected(self):
        with pytest.raises(ValidationError):
            phase_S(-1.0, BathConfig())

    def test_depends_only_on_cutoff(self):
        # theta and epsilon enter S only through k_c = epsilon * theta
        t = np.linspace(0.0, 20.0, 50)
        a = phase_S(t, BathConfig(epsilon=1.0, theta=1.0))
        b = phase_S(t, BathConfig(epsilon=2.0, theta=0.5))
        np.testing.assert_array_equal(a, b)


class TestDecay:
    def test_zero_time(self):
        assert decay_Gamma(0.0, BathConfig()) == 0.0

    @pytest.mark.parametrize("t", [0.5, 5.0, 20.0])
    def test_vs_riemann_oracle(self, t):
        bath = BathConfig()
        want = _gamma_riemann(t, bath, 1_000_000)
        assert decay_Gamma(t, bath) == pytest.approx(want, rel=1e-6)

    def test_riemann_refinement_converges(self):
        bath = BathConfig()
        got = decay_Gamma(5.0, bath)
        errs = [abs(got - _gamma_riemann(5.0, bath, p)) for p in (10**3, 10**4, 10**5)]
        assert errs[0] > errs[1] > errs[2]

    def test_nonnegative(self):
        bath = BathConfig()
        t = np.linspace(0.0, 100.0, 401)
        assert np.all(decay_Gamma(t, bath) >= 0.0)

    def test_saturation_value(self):
        bath = BathConfig()
        want, _ = integrate.quad(
            lambda w: 0.5 * w / math.tanh(0.5 * bath.beta * w), 0.0, bath.k_c,
            epsabs=1e-14, epsrel=1e-12,
        )
        assert gamma_saturation(bath) == pytest.approx(want, rel=1e-10)

    def test_overshoot_and_saturation(self):
        # hard cutoff: Gamma rings around its limit with a sin(k_c t)/t tail
        bath = BathConfig()
        sat = gamma_saturation(bath)
        t = np.linspace(1.0, 60.0, 240)
        g = decay_Gamma(t, bath)
        assert g.max() > sat
        tail = decay_Gamma(np.array([300.0, 500.0, 1000.0]), bath)
        assert np.all(np.abs(tail - sat) < 1.2 / 300.0)

    def test_branch_crossover_consistency(self):
        # direct and oscillatory-remainder branches meet at k_c t = 50
        bath = BathConfig()
        for t in (49.0, 51.0):
            want = _gamma_riemann(t, bath, 1_000_000)
            assert decay_Gamma(t, bath) == pytest.approx(want, rel=1e-6)

    def test_larger_cutoff(self):
        bath = BathConfig(epsilon=2.0, theta=1.0)
        for t in (0.7, 9.0):
            want = _gamma_riemann(t, bath, 1_000_000)
            assert decay_Gamma(t, bath) == pytest.approx(want, rel=1e-6)


class TestGrid:
    def test_matches_pointwise(self):
        bath = BathConfig()
        t = np.linspace(0.0, 30.0, 31)
        grid = dephasing_grid(t, bath)
        np.testing.assert_array_equal(grid.S, phase_S(t, bath))
        np.testing.assert_array_equal(grid.Gamma, decay_Gamma(t, bath))

    def test_rejects_decreasing(self):
        with pytest.raises(ValidationError):
            dephasing_grid(np.array([0.0, 2.0, 1.0]), BathConfig())

    def test_rejects_negative(self):
        with pytest.raises(ValidationError):
            dephasing_grid(np.array([-1.0, 0.0]), BathConfig())

    def test_rejects_matrix(self):
        with pytest.raises(ValidationError):
            dephasing_grid(np.zeros((2, 2)), BathConfig())


class TestConfig:
    def test_derived_cutoff(self):
        bath = BathConfig(epsilon=2.0, theta=3.0)
        assert bath.k_c == pytest.approx(6.0)
        assert bath.beta == pytest.approx(1.0 / 3.0)
        assert bath.nu_c == pytest.approx(6.0 / (2.0 * math.pi))

    def test_explicit_cutoff_must_agree(self):
        BathConfig(epsilon=1.0, theta=1.0, k_c=1.0)
        with pytest.raises(ValidationError):
            BathConfig(epsilon=1.0, theta=1.0, k_c=2.0)

    @pytest.mark.parametrize("kwargs", [
        {"epsilon": 0.0},
        {"epsilon": -1.0},
        {"theta": 0.0},
        {"theta": -2.0},
    ])
    def test_rejects_nonpositive(self, kwargs):
        with pytest.raises(ValidationError):
            BathConfig(**kwargs)
