"""Sweep drivers: time series, peak and collapse statistics, and fits.

Concurrence curves for different couplings align when plotted against the
rescaled time tau = (kappa_c / N^eta)^2 nu_c t, so experiments fix a tau
window (default [0, 2 pi]) and translate it to a time grid per
configuration.  Each driver returns an immutable table sorted by its
sweep key; sweep points are independent tasks, evaluated concurrently up
to the DEPHASIM_THREADS cap and gathered in input order, which makes the
output independent of scheduling.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
import math
import os

import numpy as np

from .bath import BathConfig, DephasingGrid, dephasing_grid
from .dynamics import (
    CouplingConfig,
    EnsembleConfig,
    SpinInit,
    evolve,
    evolve_series,
    initial_two_qubit,
    limit_state_large_eta,
    limit_state_small_eta,
    _background_from_S,
)
from .entanglement import concurrence, concurrence_series
from .errors import FitError, ValidationError

__all__ = [
    "TimeSeries",
    "PeakResult",
    "CollapseResult",
    "FitResult",
    "SweepResult",
    "time_series",
    "peak_concurrence",
    "collapse_time",
    "sweep_N",
    "sweep_kappa",
    "sweep_eta",
    "grid_pv",
    "limits_compare",
    "fit_exponential",
    "relative_spread",
    "worker_count",
]

TAU_WINDOW = 2.0 * math.pi
COLLAPSE_FLOOR = 1e-6
COLLAPSE_PERSISTENCE = 10
SIGNIFICANCE_FLOOR = 1e-4
DEFAULT_STEPS = 4000
MAX_AUTO_STEPS = 20000


def worker_count():
    """Worker cap from DEPHASIM_THREADS; 0 or unset means cpu count."""
    raw = os.environ.get("DEPHASIM_THREADS", "0").strip()
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError("DEPHASIM_THREADS must be an integer, got %r" % (raw,))
    if n < 0:
        raise ValidationError("DEPHASIM_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def _pmap(fn, items):
    """Map preserving input order; concurrency never reorders results."""
    items = list(items)
    workers = min(worker_count(), max(len(items), 1))
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class TimeSeries:
    """Concurrence and bath diagnostics on a time grid."""

    t: np.ndarray
    tau: np.ndarray
    concurrence: np.ndarray
    abs_p_n: np.ndarray
    S: np.ndarray
    gamma_l: np.ndarray
    gamma_c: np.ndarray
    meta: dict

    columns = ("t", "tau", "concurrence", "abs_p_n", "s", "gamma_l", "gamma_c")

    def rows(self):
        return list(
            zip(self.t, self.tau, self.concurrence, self.abs_p_n, self.S, self.gamma_l, self.gamma_c)
        )


@dataclass(frozen=True)
class PeakResult:
    t_peak: float
    tau_peak: float
    c_max: float
    all_zero: bool = False


@dataclass(frozen=True)
class CollapseResult:
    """tau_c is nan unless status is "ok"."""

    tau_c: object
    status: str


@dataclass(frozen=True)
class FitResult:
    slope: float
    stderr: float
    r_squared: float
    intercept: float
    n_range: tuple
    n_used: int
    n_excluded: int


@dataclass(frozen=True)
class SweepResult:
    """Generic result table: named columns, row tuples, metadata."""

    columns: tuple
    rows: list
    meta: dict

    def column(self, name):
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows])


def _resolve_grid(cfg, bath, t_max, steps, tau_max, meta):
    ke2 = cfg.effective_kappa_c**2
    if t_max is None:
        window = TAU_WINDOW if tau_max is None else float(tau_max)
        if ke2 == 0:
            raise ValidationError("t_max is required when the collective coupling is zero")
        t_max = window / (ke2 * bath.nu_c)
    if t_max <= 0:
        raise ValidationError("t_max must be positive")
    if steps is None:
        steps = DEFAULT_STEPS
        if ke2 > 0:
            # resolve the P_N peak width 1/(kappa_eff^2 sqrt(N)) by >= 10 points
            needed = int(math.ceil(10.0 * t_max * ke2 * math.sqrt(cfg.N))) + 1
            steps = max(steps, min(needed, MAX_AUTO_STEPS))
            if needed > MAX_AUTO_STEPS:
                meta["warnings"].append(
                    "auto step cap reached: %d points requested, using %d"
                    % (needed, MAX_AUTO_STEPS)
                )
    if steps < 2:
        raise ValidationError("steps must be >= 2")
    t = np.linspace(0.0, t_max, int(steps))
    if ke2 > 0:
        width = 1.0 / (ke2 * math.sqrt(cfg.N))
        if t[1] - t[0] > width / 10.0:
            meta["warnings"].append(
                "time step %.3g exceeds a tenth of the background peak width %.3g"
                % (t[1] - t[0], width)
            )
    return t


def time_series(cfg, ens, bath=None, t_max=None, steps=None, tau_max=None, frame="interaction", grid=None):
    """Evolve and score concurrence on a uniform time grid.

    Passing a precomputed DephasingGrid reuses its quadrature across
    configurations that share the same times.
    """
    bath = bath if bath is not None else BathConfig()
    meta = {
        "experiment": "timeseries",
        "kappa_c": cfg.kappa_c,
        "kappa_l": cfg.kappa_l,
        "eta": cfg.eta,
        "n": cfg.N,
        "epsilon": bath.epsilon,
        "theta": bath.theta,
        "frame": frame,
        "warnings": [],
    }
    if grid is None:
        t = _resolve_grid(cfg, bath, t_max, steps, tau_max, meta)
        grid = dephasing_grid(t, bath)
    rho0 = initial_two_qubit(ens.spin1, ens.spin2)
    rhos = evolve_series(rho0, grid, cfg, ens, frame=frame)
    C = concurrence_series(rhos)
    absP = np.abs(_background_from_S(grid.S, cfg, ens))
    tau = cfg.effective_kappa_c**2 * bath.nu_c * grid.t
    meta["steps"] = int(grid.t.size)
    meta["t_max"] = float(grid.t[-1]) if grid.t.size else 0.0
    return TimeSeries(
        t=grid.t,
        tau=tau,
        concurrence=C,
        abs_p_n=absP,
        S=grid.S,
        gamma_l=grid.Gamma,
        gamma_c=grid.Gamma,
        meta=meta,
    )


def peak_concurrence(series):
    """Global maximum of the concurrence; ties resolve to the smallest t."""
    C = series.concurrence
    if C.size == 0:
        raise ValidationError("peak_concurrence requires a non-empty series")
    if not np.any(C > 0):
        return PeakResult(t_peak=0.0, tau_peak=0.0, c_max=0.0, all_zero=True)
    i = int(np.argmax(C))
    return PeakResult(
        t_peak=float(series.t[i]), tau_peak=float(series.tau[i]), c_max=float(C[i])
    )


def collapse_time(series, floor=COLLAPSE_FLOOR, persistence=COLLAPSE_PERSISTENCE):
    """First rescaled time where concurrence stays below floor.

    The series must first rise above floor; the collapse point is the
    first grid point of the earliest run of >= persistence consecutive
    sub-floor values after that rise.
    """
    C = series.concurrence
    above = C > floor
    if not np.any(above):
        return CollapseResult(tau_c=math.nan, status="no-entanglement")
    rise = int(np.argmax(above))
    below = (~above)[rise + 1 :]
    if below.size >= persistence:
        runs = np.convolve(below.astype(int), np.ones(persistence, dtype=int), mode="valid")
        hits = np.nonzero(runs == persistence)[0]
        if hits.size:
            i = rise + 1 + int(hits[0])
            return CollapseResult(tau_c=float(series.tau[i]), status="ok")
    return CollapseResult(tau_c=math.nan, status="no-collapse")


def _series_stats(series):
    peak = peak_concurrence(series)
    col = collapse_time(series)
    return peak, col.tau_c, col.status


def sweep_N(n_values, cfg, ens, bath=None, tau_max=None, steps=None, frame="interaction"):
    """Per-N peak and collapse statistics at a fixed coupling.

    With eta = 0 every N shares the same time grid, so the bath quadrature
    is computed once and reused.
    """
    bath = bath if bath is not None else BathConfig()
    n_values = [int(n) for n in n_values]
    if any(n < 2 for n in n_values):
        raise ValidationError("all N must be >= 2")
    meta = {
        "experiment": "sweep-n",
        "kappa_c": cfg.kappa_c,
        "kappa_l": cfg.kappa_l,
        "eta": cfg.eta,
        "epsilon": bath.epsilon,
        "theta": bath.theta,
        "n_values": list(n_values),
        "warnings": [],
    }
    shared = None
    if cfg.eta == 0:
        probe = replace(cfg, N=max(n_values))
        t = _resolve_grid(probe, bath, None, steps, tau_max, meta)
        shared = dephasing_grid(t, bath)

    def run(n):
        c = replace(cfg, N=n)
        if shared is not None:
            series = time_series(c, ens, bath, frame=frame, grid=shared)
        else:
            series = time_series(c, ens, bath, tau_max=tau_max, steps=steps, frame=frame)
        peak, tau_c, status = _series_stats(series)
        return (n, peak.c_max, peak.tau_peak, tau_c, status)

    rows = _pmap(run, n_values)
    return SweepResult(columns=("n", "c_max", "tau_peak", "tau_c", "status"), rows=rows, meta=meta)


def sweep_kappa(kappa_values, cfg, ens, bath=None, tau_max=None, steps=None, frame="interaction"):
    """Peak and collapse statistics across collective coupling strengths."""
    bath = bath if bath is not None else BathConfig()
    kappa_values = [float(k) for k in kappa_values]
    if any(k <= 0 for k in kappa_values):
        raise ValidationError("sweep_kappa requires positive couplings")
    meta = {
        "experiment": "sweep-kappa",
        "n": cfg.N,
        "kappa_l": cfg.kappa_l,
        "eta": cfg.eta,
        "epsilon": bath.epsilon,
        "theta": bath.theta,
        "kappa_values": list(kappa_values),
        "warnings": [],
    }

    def run(k):
        c = replace(cfg, kappa_c=k)
        series = time_series(c, ens, bath, tau_max=tau_max, steps=steps, frame=frame)
        peak, tau_c, status = _series_stats(series)
        return (k, peak.c_max, peak.tau_peak, tau_c, status)

    rows = _pmap(run, kappa_values)
    return SweepResult(
        columns=("kappa_c", "c_max", "tau_peak", "tau_c", "status"), rows=rows, meta=meta
    )


def sweep_eta(eta_values, n_values, cfg, ens, bath=None, tau_max=None, steps=None, frame="interaction"):
    """Peak statistics across scaling exponents and spin counts."""
    bath = bath if bath is not None else BathConfig()
    eta_values = [float(e) for e in eta_values]
    n_values = [int(n) for n in n_values]
    meta = {
        "experiment": "sweep-eta",
        "kappa_c": cfg.kappa_c,
        "kappa_l": cfg.kappa_l,
        "epsilon": bath.epsilon,
        "theta": bath.theta,
        "eta_values": list(eta_values),
        "n_values": list(n_values),
        "warnings": [],
    }
    tasks = [(e, n) for e in eta_values for n in n_values]

    def run(task):
        e, n = task
        c = replace(cfg, eta=e, N=n)
        series = time_series(c, ens, bath, tau_max=tau_max, steps=steps, frame=frame)
        peak, tau_c, status = _series_stats(series)
        return (e, n, peak.c_max, peak.tau_peak, tau_c, status)

    rows = _pmap(run, tasks)
    return SweepResult(
        columns=("eta", "n", "c_max", "tau_peak", "tau_c", "status"), rows=rows, meta=meta
    )


def _abstract_factors(s_knob, gamma_l_knob, gamma_c_knob):
    F = np.ones((4, 4), dtype=complex)
    phase = np.exp(1j * s_knob)
    dl = math.exp(-gamma_l_knob)
    dc = math.exp(-gamma_c_knob)
    F[0, 1] = phase * dl * dc
    F[0, 2] = phase * dc
    F[0, 3] = dl**2 * dc**4
    F[1, 2] = dl**2
    F[1, 3] = np.conj(phase) * dl * dc
    F[2, 3] = np.conj(phase) * dl * dc
    iu = np.triu_indices(4, k=1)
    F[iu[1], iu[0]] = np.conj(F[iu[0], iu[1]])
    return F


def abstract_state(s1, s2, s_knob, gamma_l_knob=0.0, gamma_c_knob=0.0):
    """Two-qubit state with the phase and decay exponents set directly.

    s_knob stands for the product kappa^2 S(t) and the gamma knobs for
    kappa_l^2 Gamma_l and kappa_c^2 Gamma_c, treated as free parameters.
    """
    rho0 = initial_two_qubit(s1, s2)
    return rho0 * _abstract_factors(s_knob, gamma_l_knob, gamma_c_knob)


def _clip_v(p, v):
    bound = math.sqrt(max(p * (1.0 - p), 0.0))
    if abs(v) > bound + 1e-15:
        return math.copysign(bound, v) if v else bound, True
    return v, False


def grid_pv(
    values1,
    values2=None,
    mode="symmetric-pv",
    cfg=None,
    ens_background=0.5,
    bath=None,
    s_knob=math.pi / 2.0,
    gamma_l_knob=0.0,
    gamma_c_knob=0.0,
    tau_max=None,
    steps=None,
):
    """Maximal concurrence over a grid of initial conditions.

    mode "symmetric-pv": axes are (p, v), both spins share them, and the
    dynamical exponents are the abstract knobs (defaults S = pi/2 and no
    decay).  mode "dynamic-corner": axes are (p1, p2) with v_i = p_i, and
    the maximum is taken over an evolved time series.  Infeasible cells
    (|v|^2 > p(1-p)) are clipped to the boundary, flagged, and excluded
    from the reported argmax.
    """
    bath = bath if bath is not None else BathConfig()
    values1 = [float(x) for x in values1]
    values2 = values1 if values2 is None else [float(x) for x in values2]
    meta = {"experiment": "grid-pv", "mode": mode, "warnings": []}
    rows = []
    if mode == "symmetric-pv":
        meta.update({"s_knob": s_knob, "gamma_l_knob": gamma_l_knob, "gamma_c_knob": gamma_c_knob})
        F = _abstract_factors(s_knob, gamma_l_knob, gamma_c_knob)
        stack = []
        flags = []
        for p in values1:
            for v in values2:
                vc, clipped = _clip_v(p, v)
                s = SpinInit(p=p, v=vc)
                stack.append(initial_two_qubit(s, s) * F)
                flags.append(clipped)
        C = concurrence_series(np.array(stack))
        i = 0
        for p in values1:
            for v in values2:
                rows.append((p, v, float(C[i]), int(flags[i])))
                i += 1
        cols = ("p", "v", "c_max", "clipped")
    elif mode == "dynamic-corner":
        if cfg is None:
            raise ValidationError("dynamic-corner mode requires a CouplingConfig")
        meta.update(
            {
                "kappa_c": cfg.kappa_c,
                "kappa_l": cfg.kappa_l,
                "eta": cfg.eta,
                "n": cfg.N,
                "epsilon": bath.epsilon,
                "theta": bath.theta,
                "background_p": ens_background,
            }
        )
        t = _resolve_grid(cfg, bath, None, steps, tau_max, meta)
        grid = dephasing_grid(t, bath)
        probe = SpinInit(p=0.5, v=0.0)
        ens0 = EnsembleConfig(spin1=probe, spin2=probe, background_p=ens_background)
        F = _factor_series_cached(grid, cfg, ens0)
        cells = []
        flags = []
        for p1 in values1:
            for p2 in values2:
                v1, c1 = _clip_v(p1, p1)
                v2, c2 = _clip_v(p2, p2)
                r0 = initial_two_qubit(SpinInit(p=p1, v=v1), SpinInit(p=p2, v=v2))
                cells.append(r0)
                flags.append(c1 or c2)
        cells = np.array(cells)
        block = max(1, int(2e5 / max(grid.t.size, 1)))
        cmax = np.empty(len(cells))
        for start in range(0, len(cells), block):
            sub = cells[start : start + block, None, :, :] * F[None, :, :, :]
            cmax[start : start + block] = concurrence_series(sub).max(axis=1)
        i = 0
        for p1 in values1:
            for p2 in values2:
                rows.append((p1, p2, float(cmax[i]), int(flags[i])))
                i += 1
        cols = ("p1", "p2", "c_max", "clipped")
    else:
        raise ValidationError("unknown grid_pv mode %r" % (mode,))
    feasible = [r for r in rows if not r[3]]
    if feasible:
        best = max(feasible, key=lambda r: r[2])
        meta["argmax"] = (best[0], best[1])
        meta["c_max"] = best[2]
    return SweepResult(columns=cols, rows=rows, meta=meta)


def _factor_series_cached(grid, cfg, ens):
    from .dynamics import _factor_matrix

    return _factor_matrix(grid.t, grid.S, grid.Gamma, grid.Gamma, cfg, ens, "interaction")


def limits_compare(eta, n_values, t, s1, s2, kappa_c, kappa_l=0.0, background_p=0.5, bath=None):
    """Distance between the finite-N state and its N -> infinity limit.

    Uses the X form limit for 0 < eta < 1/4 and the product form for
    eta > 1/4; eta = 1/4 sits on the borderline and has no closed limit.
    """
    bath = bath if bath is not None else BathConfig()
    if eta <= 0 or eta == 0.25:
        raise ValidationError("limits require eta in (0, 1/4) or (1/4, inf)")
    n_values = [int(n) for n in n_values]
    ens = EnsembleConfig(spin1=s1, spin2=s2, background_p=background_p)
    regime = "small-eta" if eta < 0.25 else "large-eta"
    meta = {
        "experiment": "limits",
        "eta": eta,
        "t": t,
        "kappa_c": kappa_c,
        "kappa_l": kappa_l,
        "background_p": background_p,
        "regime": regime,
        "epsilon": bath.epsilon,
        "theta": bath.theta,
        "warnings": [],
    }
    rho0 = initial_two_qubit(s1, s2)

    def run(n):
        cfg = CouplingConfig(kappa_c=kappa_c, kappa_l=kappa_l, eta=eta, N=n)
        rho = evolve(rho0, t, cfg, ens, bath)
        if regime == "small-eta":
            lim = limit_state_small_eta(t, s1, s2, cfg, bath)
        else:
            lim = limit_state_large_eta(t, s1, s2, cfg, ens, bath)
        dist = float(np.max(np.abs(rho - lim)))
        return (
            n,
            dist,
            concurrence(rho, validate=False).value,
            concurrence(lim, validate=False).value,
        )

    rows = _pmap(run, n_values)
    return SweepResult(
        columns=("n", "distance", "concurrence_n", "concurrence_limit"), rows=rows, meta=meta
    )


def fit_exponential(n, y, n_range=None):
    """Least squares slope of ln y against n.

    Points with y <= 0 (or outside n_range) are excluded and counted in
    n_excluded; fewer than 3 usable points raises FitError.
    """
    n = np.asarray(n, dtype=float)
    y = np.asarray(y, dtype=float)
    if n.shape != y.shape or n.ndim != 1:
        raise ValidationError("fit_exponential expects matching 1-D arrays")
    in_range = np.ones(n.shape, dtype=bool)
    if n_range is not None:
        lo, hi = n_range
        in_range = (n >= lo) & (n <= hi)
    usable = in_range & np.isfinite(y) & (y > 0)
    excluded = int(np.count_nonzero(in_range & ~usable))
    x = n[usable]
    ly = np.log(y[usable])
    m = x.size
    if m < 3:
        raise FitError("fit_exponential needs >= 3 usable points, got %d" % m)
    xbar, ybar = x.mean(), ly.mean()
    sxx = np.sum((x - xbar) ** 2)
    if sxx == 0:
        raise FitError("fit_exponential needs distinct n values")
    slope = float(np.sum((x - xbar) * (ly - ybar)) / sxx)
    intercept = float(ybar - slope * xbar)
    resid = ly - (intercept + slope * x)
    ssr = float(np.sum(resid**2))
    sst = float(np.sum((ly - ybar) ** 2))
    r2 = 1.0 if sst == 0 else max(0.0, 1.0 - ssr / sst)
    stderr = math.sqrt(ssr / (m - 2) / sxx) if m > 2 else 0.0
    return FitResult(
        slope=slope,
        stderr=stderr,
        r_squared=r2,
        intercept=intercept,
        n_range=(float(x.min()), float(x.max())),
        n_used=m,
        n_excluded=excluded,
    )


def relative_spread(values):
    """Population standard deviation over mean, the relative spread."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValidationError("relative_spread of an empty set")
    mean = v.mean()
    if mean == 0:
        raise ValidationError("relative_spread undefined for zero mean")
    return float(v.std(ddof=0) / abs(mean))
