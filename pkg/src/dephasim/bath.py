"""Bath phase and decay functions for pure dephasing in a thermal boson field.

Every quantity is dimensionless: frequencies are measured in units of the
reference frequency omega_0 (so the temperature enters as
theta = k_B T / (hbar omega_0)), times in units of 1/omega_0, and inverse
temperature as beta = 1/theta.  The coupling form factor is

    f(k) = sqrt(|k|) * chi(|k| <= k_c),

isotropic with a sharp cutoff at the wavenumber k_c = epsilon * theta,
where epsilon = nu_c / nu_T is the ratio of cutoff to thermal frequency.
The three dimensional mode sum is reduced over angles to a radial integral
in omega = |k|, with the solid angle absorbed into the coupling constants,
so that a bath with f as above contributes per unit coupling squared

    S(t)     = -(1/2) * int_0^{k_c} omega * (omega t - sin(omega t)) domega
    Gamma(t) = int_0^{k_c} omega * coth(beta omega / 2) * sin^2(omega t / 2) domega.

S is the collective Lamb-type phase, S(0) = 0 and S(t) <= 0, with
asymptotic slope -k_c^3/6.  Gamma is the decoherence exponent,
Gamma(0) = 0 and Gamma(t) >= 0; for this superohmic radial measure it
saturates at Gamma_inf = (1/2) int_0^{k_c} omega coth(beta omega/2) domega,
approached through a slowly decaying sin(k_c t)/t oscillation.

S has the elementary closed form

    S(t) = -(k_c^2 / 2) * [ x/3 - (sin x - x cos x)/x^2 ],   x = k_c t,

evaluated through a Maclaurin branch at small x where the bracket suffers
catastrophic cancellation.  Gamma has no elementary antiderivative because
of the coth factor and is evaluated by adaptive quadrature, switching to a
cosine-weighted (oscillatory) rule once x > 50.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from scipy import integrate

from .errors import NumericalError, QuadratureError, ValidationError

__all__ = [
    "QuadratureSettings",
    "BathConfig",
    "DephasingGrid",
    "phase_S",
    "decay_Gamma",
    "gamma_saturation",
    "dephasing_grid",
]

# switch S to its Maclaurin branch below this x = k_c*t; the direct form
# cancels like x^5 so it loses ~60*eps/x^5 relative accuracy at small x
_SERIES_X = 0.5
# switch Gamma to the cosine-weighted rule above this x
_OSCILLATORY_X = 50.0


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and budget for the adaptive quadrature of Gamma."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValidationError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValidationError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class BathConfig:
    """Thermal bath with the sqrt-cutoff form factor.

    Parameters
    ----------
    epsilon : float
        Ratio nu_c / nu_T of cutoff to thermal frequency.
    theta : float
        Dimensionless temperature k_B T / (hbar omega_0).
    k_c : float, optional
        Cutoff wavenumber.  Derived as epsilon * theta when omitted; if
        given it must satisfy that identity to 1e-12 relative.
    form_factor : str
        Only "sqrt-cutoff" is supported.
    quadrature : QuadratureSettings
    """

    epsilon: float = 1.0
    theta: float = 1.0
    k_c: float = None
    form_factor: str = "sqrt-cutoff"
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)

    def __post_init__(self):
        if not (self.epsilon > 0 and self.theta > 0):
            raise ValidationError("epsilon and theta must be positive")
        derived = self.epsilon * self.theta
        if self.k_c is None:
            object.__setattr__(self, "k_c", derived)
        elif not (self.k_c > 0) or abs(self.k_c - derived) > 1e-12 * derived:
            raise ValidationError(
                "k_c must equal epsilon*theta (= %.17g), got %r" % (derived, self.k_c)
            )
        if self.form_factor != "sqrt-cutoff":
            raise ValidationError("unsupported form factor %r" % (self.form_factor,))

    @property
    def beta(self):
        """Inverse temperature 1/theta; beta * k_c equals epsilon."""
        return 1.0 / self.theta

    @property
    def nu_T(self):
        """Thermal frequency theta / (2 pi)."""
        return self.theta / (2.0 * math.pi)

    @property
    def nu_c(self):
        """Cutoff frequency k_c / (2 pi)."""
        return self.k_c / (2.0 * math.pi)


@dataclass(frozen=True)
class DephasingGrid:
    """Immutable table of (t, S(t), Gamma(t)) on a shared time grid."""

    t: np.ndarray
    S: np.ndarray
    Gamma: np.ndarray

    def __len__(self):
        return self.t.size


def _bracket(x):
    """x/3 - (sin x - x cos x)/x^2 with a series branch at small x."""
    x = np.asarray(x, dtype=float)
    small = x < _SERIES_X
    xs = np.where(small, x, 1.0)
    # coefficients 1/((2k)!! (2k+3)!!); truncation < 1e-15 relative at x = 0.5
    x2 = xs * xs
    series = (xs * x2) * (
        1.0 / 30.0
        + x2 * (
            -1.0 / 840.0
            + x2 * (
                1.0 / 45360.0
                + x2 * (
                    -1.0 / 3991680.0
                    + x2 * (1.0 / 518918400.0 - x2 / 93405312000.0)
                )
            )
        )
    )
    xb = np.where(small, 1.0, x)
    direct = xb / 3.0 - (np.sin(xb) - xb * np.cos(xb)) / xb**2
    return np.where(small, series, direct)


def phase_S(t, cfg=None):
    """Collective phase S(t), closed form.

    Accepts a scalar or array of times t >= 0 and returns matching shape.
    S(0) = 0 and S(t) <= 0 for all t.
    """
    cfg = cfg if cfg is not None else BathConfig()
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValidationError("phase_S requires t >= 0")
    out = -(cfg.k_c**2 / 2.0) * _bracket(cfg.k_c * t)
    if not np.all(np.isfinite(out)):
        raise NumericalError("phase_S produced a non-finite value")
    return out if out.ndim else float(out)


def _coth_weight(omega, beta):
    """omega * coth(beta omega / 2), stable as omega -> 0."""
    u = 0.5 * beta * omega
    if u < 1e-4:
        # u/tanh(u) = 1 + u^2/3 - u^4/45 + ...
        return (2.0 / beta) * (1.0 + u * u / 3.0 - u**4 / 45.0)
    return omega / math.tanh(u)


@lru_cache(maxsize=64)
def _saturation(k_c, beta, rel_tol, abs_tol, limit):
    val, err = integrate.quad(
        _coth_weight, 0.0, k_c, args=(beta,), epsrel=rel_tol, epsabs=abs_tol, limit=limit
    )
    return 0.5 * val, 0.5 * err


def gamma_saturation(cfg=None):
    """Large-time limit (1/2) int_0^{k_c} omega coth(beta omega/2) domega."""
    cfg = cfg if cfg is not None else BathConfig()
    q = cfg.quadrature
    val, _ = _saturation(cfg.k_c, cfg.beta, q.rel_tol, q.abs_tol, q.max_subdivisions)
    return val


def _gamma_point(t, cfg):
    if t == 0.0:
        return 0.0
    q = cfg.quadrature
    x = cfg.k_c * t
    if x <= _OSCILLATORY_X:
        val, err = integrate.quad(
            lambda w: _coth_weight(w, cfg.beta) * math.sin(0.5 * w * t) ** 2,
            0.0,
            cfg.k_c,
            epsrel=q.rel_tol,
            epsabs=q.abs_tol,
            limit=q.max_subdivisions,
        )
    else:
        # sin^2(wt/2) = (1 - cos(wt))/2; the cos part goes to a QAWO rule
        # that subdivides by oscillation cycles.
        sat, sat_err = _saturation(cfg.k_c, cfg.beta, q.rel_tol, q.abs_tol, q.max_subdivisions)
        osc, osc_err = integrate.quad(
            _coth_weight,
            0.0,
            cfg.k_c,
            args=(cfg.beta,),
            weight="cos",
            wvar=t,
            epsrel=q.rel_tol,
            epsabs=q.abs_tol,
            limit=q.max_subdivisions,
            maxp1=100,
            limlst=100,
        )
        val = sat - 0.5 * osc
        err = sat_err + 0.5 * osc_err
    tol = max(1e-8 * max(abs(val), 1.0), 10.0 * q.abs_tol)
    if not math.isfinite(val):
        raise NumericalError("decay_Gamma produced a non-finite value at t=%r" % (t,))
    if err > tol:
        raise QuadratureError(
            "Gamma quadrature at t=%r did not converge (error estimate %.3g)" % (t, err),
            error_estimate=err,
        )
    # quadrature noise can leave a tiny negative residue near t=0
    return max(val, 0.0)


def decay_Gamma(t, cfg=None):
    """Decoherence exponent Gamma(t) by adaptive quadrature.

    Accepts a scalar or array of times t >= 0.  Gamma(0) = 0 and
    Gamma(t) >= 0 everywhere.
    """
    cfg = cfg if cfg is not None else BathConfig()
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise ValidationError("decay_Gamma requires t >= 0")
    flat = arr.ravel()
    vals = np.array([_gamma_point(float(ti), cfg) for ti in flat])
    out = vals.reshape(arr.shape)
    return out if arr.ndim else float(out)


def dephasing_grid(times, cfg=None):
    """Evaluate S and Gamma on an ordered time grid.

    The rows agree with pointwise calls by construction; precomputing a
    grid amortizes the Gamma quadrature across a sweep.
    """
    cfg = cfg if cfg is not None else BathConfig()
    t = np.asarray(times, dtype=float)
    if t.ndim != 1:
        raise ValidationError("dephasing_grid expects a one dimensional time grid")
    if t.size == 0:
        return DephasingGrid(t=t, S=t.copy(), Gamma=t.copy())
    if np.any(t < 0):
        raise ValidationError("dephasing_grid requires all t >= 0")
    if np.any(np.diff(t) <= 0):
        raise ValidationError("dephasing_grid requires strictly increasing times")
    S = phase_S(t, cfg)
    Gamma = decay_Gamma(t, cfg)
    for name, arr in (("S", S), ("Gamma", Gamma)):
        if not np.all(np.isfinite(arr)):
            raise NumericalError("dephasing_grid produced non-finite %s" % name)
    return DephasingGrid(t=t, S=np.asarray(S), Gamma=np.asarray(Gamma))
