"""Tests for the sweep drivers and series summaries."""

import math

import numpy as np
import pytest

from dephasim import (
    BathConfig,
    CouplingConfig,
    EnsembleConfig,
    FitError,
    SpinInit,
    TimeSeries,
    ValidationError,
    collapse_time,
    fit_exponential,
    grid_pv,
    limits_compare,
    peak_concurrence,
    relative_spread,
    sweep_N,
    sweep_eta,
    sweep_kappa,
    time_series,
)
from dephasim.experiments import COLLAPSE_FLOOR, worker_count


@pytest.fixture(scope="module")
def bath():
    return BathConfig()


@pytest.fixture(scope="module")
def std_ens():
    spin = SpinInit(p=0.5, v=0.48)
    return EnsembleConfig(spin1=spin, spin2=spin)


def _series(tau, c):
    n = len(tau)
    z = np.zeros(n)
    return TimeSeries(
        t=np.asarray(tau, float), tau=np.asarray(tau, float),
        concurrence=np.asarray(c, float), abs_p_n=np.ones(n),
        S=z, gamma_l=z, gamma_c=z, meta={},
    )


class TestTimeSeries:
    def test_columns_and_shapes(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.1, N=4)
        ts = time_series(cfg, std_ens, bath, steps=200, tau_max=1.0)
        assert ts.columns == ("t", "tau", "concurrence", "abs_p_n", "s", "gamma_l", "gamma_c")
        rows = ts.rows()
        assert len(rows) == 200 and len(rows[0]) == 7
        assert ts.t[0] == 0.0
        assert ts.tau[-1] == pytest.approx(1.0)
        assert np.all(np.diff(ts.t) > 0)

    def test_zero_coupling_requires_t_max(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.0, N=4)
        with pytest.raises(ValidationError):
            time_series(cfg, std_ens, bath)
        ts = time_series(cfg, std_ens, bath, t_max=5.0, steps=50)
        assert np.all(ts.concurrence == ts.concurrence[0])

    def test_auto_steps_grow_with_n(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.4, N=4000)
        ts = time_series(cfg, std_ens, bath, tau_max=2.0)
        assert len(ts.t) > 4000
        assert ts.meta["steps"] == len(ts.t)

    def test_explicit_grid_reused(self, bath, std_ens):
        from dephasim import dephasing_grid

        cfg = CouplingConfig(kappa_c=0.1, N=4)
        grid = dephasing_grid(np.linspace(0.0, 100.0, 64), bath)
        ts = time_series(cfg, std_ens, bath, grid=grid)
        assert len(ts.t) == 64
        np.testing.assert_array_equal(ts.t, grid.t)


class TestPeak:
    def test_simple_peak(self):
        pk = peak_concurrence(_series([0, 1, 2, 3], [0.0, 0.5, 0.2, 0.1]))
        assert pk.tau_peak == 1.0 and pk.c_max == 0.5 and not pk.all_zero

    def test_tie_breaks_to_earlier(self):
        pk = peak_concurrence(_series([0, 1, 2, 3], [0.0, 0.5, 0.5, 0.1]))
        assert pk.tau_peak == 1.0

    def test_all_zero_flag(self):
        pk = peak_concurrence(_series([0, 1, 2], [0.0, 0.0, 0.0]))
        assert pk.all_zero and pk.c_max == 0.0

    def test_real_series(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.1, N=2)
        ts = time_series(cfg, std_ens, bath, tau_max=2.0)
        pk = peak_concurrence(ts)
        assert 0.8 < pk.c_max < 1.0
        assert ts.concurrence.max() == pk.c_max


class TestCollapse:
    def test_sustained_drop(self):
        tau = np.linspace(0.0, 10.0, 1001)
        c = np.where(tau < 4.0, 0.3 * np.sin(tau * math.pi / 4.0), 0.0)
        res = collapse_time(_series(tau, c))
        assert res.status == "ok"
        assert res.tau_c == pytest.approx(4.0, abs=0.02)

    def test_brief_dip_is_not_collapse(self):
        tau = np.linspace(0.0, 10.0, 1001)
        c = np.full_like(tau, 0.2)
        c[500:503] = 0.0  # shorter than the persistence window
        res = collapse_time(_series(tau, c))
        assert res.status == "no-collapse"

    def test_no_entanglement(self):
        res = collapse_time(_series([0, 1, 2], [0.0, 0.0, 0.0]))
        assert res.status == "no-entanglement"
        assert math.isnan(res.tau_c)

    def test_floor_is_respected(self):
        tau = np.linspace(0.0, 1.0, 101)
        c = np.full_like(tau, 2 * COLLAPSE_FLOOR)
        res = collapse_time(_series(tau, c))
        assert res.status == "no-collapse"

    def test_real_collapse(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.05, N=12)
        ts = time_series(cfg, std_ens, bath, tau_max=2.0)
        res = collapse_time(ts)
        assert res.status == "ok"
        pk = peak_concurrence(ts)
        assert res.tau_c > pk.tau_peak


class TestFit:
    def test_exact_exponential(self):
        n = np.arange(1, 21, dtype=float)
        fit = fit_exponential(n, np.exp(-0.1 * n))
        assert fit.slope == pytest.approx(-0.1, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.stderr == pytest.approx(0.0, abs=1e-12)
        assert fit.n_used == 20 and fit.n_excluded == 0

    def test_seeded_noise(self):
        rng = np.random.default_rng(42)
        n = np.arange(1, 101, dtype=float)
        y = np.exp(-0.1 * n) * (1.0 + 1e-3 * rng.uniform(-1, 1, size=n.size))
        fit = fit_exponential(n, y)
        assert fit.slope == pytest.approx(-0.1, abs=1e-3)

    def test_nonpositive_excluded(self):
        n = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        y = np.array([1.0, 0.5, 0.0, 0.25, -1.0])
        fit = fit_exponential(n, y)
        assert fit.n_used == 3 and fit.n_excluded == 2

    def test_range_filter(self):
        n = np.arange(1, 21, dtype=float)
        y = np.exp(-0.1 * n)
        y[n > 10] = 1e-30  # garbage outside the window must not matter
        fit = fit_exponential(n, y, n_range=(1, 10))
        assert fit.slope == pytest.approx(-0.1, abs=1e-12)
        assert fit.n_range == (1.0, 10.0)

    def test_too_few_points(self):
        with pytest.raises(FitError):
            fit_exponential(np.array([1.0, 2.0]), np.array([1.0, 0.5]))
        with pytest.raises(FitError):
            fit_exponential(
                np.array([1.0, 2.0, 3.0]), np.array([1.0, 0.0, 0.0])
            )


class TestSpread:
    def test_constant_is_zero(self):
        assert relative_spread(np.array([2.0, 2.0, 2.0])) == 0.0

    def test_known_value(self):
        x = np.array([1.0, 3.0])
        assert relative_spread(x) == pytest.approx(0.5)


class TestSweeps:
    def test_sweep_n_matches_single_runs(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.05, N=2)
        res = sweep_N([2, 6, 10], cfg, std_ens, bath)
        assert res.columns == ("n", "c_max", "tau_peak", "tau_c", "status")
        n = res.column("n")
        assert list(n) == [2, 6, 10]
        for row_n, row_c in zip(res.column("n"), res.column("c_max")):
            cfg_n = CouplingConfig(kappa_c=0.05, N=int(row_n))
            single = peak_concurrence(time_series(cfg_n, std_ens, bath))
            assert row_c == pytest.approx(single.c_max, abs=1e-12)

    def test_sweep_n_monotone(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.05, N=2)
        res = sweep_N(list(range(2, 31, 2)), cfg, std_ens, bath)
        c = np.array(res.column("c_max"))
        assert np.all(np.diff(c) <= 1e-9)

    def test_sweep_kappa_order_preserved(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.1, N=4)
        values = [0.4, 0.04, 0.2]
        res = sweep_kappa(values, cfg, std_ens, bath, tau_max=2.0)
        assert list(res.column("kappa_c")) == values

    def test_sweep_eta_zero_column_matches_sweep_n(self, bath, std_ens):
        cfg = CouplingConfig(kappa_c=0.2, N=2)
        ns = [4, 8, 12]
        res_e = sweep_eta([0.0], ns, cfg, std_ens, bath)
        res_n = sweep_N(ns, cfg, std_ens, bath)
        np.testing.assert_allclose(
            res_e.column("c_max"), res_n.column("c_max"), atol=1e-12
        )

    def test_determinism_across_worker_counts(self, bath, std_ens, monkeypatch):
        cfg = CouplingConfig(kappa_c=0.1, N=4)
        outs = []
        for threads in ("1", "8"):
            monkeypatch.setenv("DEPHASIM_THREADS", threads)
            res = sweep_kappa([0.04, 0.1, 0.2, 0.4], cfg, std_ens, bath, tau_max=2.0)
            outs.append(np.array(res.rows, dtype=object))
        assert outs[0].shape == outs[1].shape
        for a, b in zip(outs[0].ravel(), outs[1].ravel()):
            assert a == b or (isinstance(a, float) and math.isnan(a) and math.isnan(b))


class TestGridPV:
    def test_symmetric_mode(self):
        res = grid_pv(np.linspace(0.0, 1.0, 11), np.linspace(0.0, 0.5, 11))
        assert res.meta["argmax"] == (0.5, 0.5)
        assert len(res.rows) == 121
        p = np.array(res.column("p"))
        v = np.array(res.column("v"))
        c = np.array(res.column("c_max"))
        assert np.all(c[(p == 0.0) | (p == 1.0)] == 0.0)
        clipped = np.array(res.column("clipped"))
        assert np.any(clipped == 1)
        # all clipped cells sit where v^2 > p(1-p)
        viol = v**2 > p * (1 - p) + 1e-12
        np.testing.assert_array_equal(clipped.astype(bool), viol)

    def test_dynamic_mode(self, bath):
        cfg = CouplingConfig(kappa_c=0.05, N=8)
        vals = np.linspace(0.0, 0.5, 6)
        res = grid_pv(vals, vals, mode="dynamic-corner", cfg=cfg, bath=bath)
        assert len(res.rows) == 36
        assert res.meta["argmax"] == (0.5, 0.5)
        p1 = np.array(res.column("p1"))
        c = np.array(res.column("c_max"))
        assert np.all(c[p1 == 0.0] == 0.0)

    def test_dynamic_mode_needs_cfg(self):
        with pytest.raises(ValidationError):
            grid_pv(np.linspace(0, 0.5, 3), mode="dynamic-corner")

    def test_unknown_mode(self):
        with pytest.raises(ValidationError):
            grid_pv(np.linspace(0, 1, 3), mode="diagonal")


class TestLimitsCompare:
    def test_small_eta_monotone(self, bath):
        spin = SpinInit(p=0.5, v=0.48)
        res = limits_compare(0.1, [100, 1000, 10000], 30.0, spin, spin,
                             kappa_c=0.2, bath=bath)
        d = np.array(res.column("distance"))
        assert np.all(np.diff(d) < 0)
        assert res.meta["regime"] == "small-eta"
        assert np.all(np.array(res.column("concurrence_limit")) == 0.0)

    def test_large_eta_monotone(self, bath):
        spin = SpinInit(p=0.5, v=0.48)
        res = limits_compare(0.5, [100, 1000, 10000], 30.0, spin, spin,
                             kappa_c=0.2, bath=bath)
        d = np.array(res.column("distance"))
        assert np.all(np.diff(d) < 0)
        assert res.meta["regime"] == "large-eta"

    def test_boundary_rejected(self, bath):
        spin = SpinInit(p=0.5, v=0.48)
        with pytest.raises(ValidationError):
            limits_compare(0.25, [100], 30.0, spin, spin, kappa_c=0.2, bath=bath)
        with pytest.raises(ValidationError):
            limits_compare(0.0, [100], 30.0, spin, spin, kappa_c=0.2, bath=bath)


class TestWorkerCount:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("DEPHASIM_THREADS", "3")
        assert worker_count() == 3

    def test_unset_is_positive(self, monkeypatch):
        monkeypatch.delenv("DEPHASIM_THREADS", raising=False)
        assert worker_count() >= 1

    def test_invalid_rejected(self, monkeypatch):
        monkeypatch.setenv("DEPHASIM_THREADS", "many")
        with pytest.raises(ValidationError):
            worker_count()
        monkeypatch.setenv("DEPHASIM_THREADS", "-2")
        with pytest.raises(ValidationError):
            worker_count()
