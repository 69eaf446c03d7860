"""Exact reduced two-qubit dynamics of N dephasing spins.

N spins couple through energy conserving interactions to one collective
thermal reservoir (strength kappa_c, optionally scaled to kappa_c / N^eta)
and to independent local reservoirs (strength kappa_l).  The reduced
density matrix of two retained spins is known in closed form: populations
are frozen and each coherence picks up a phase exp(i kappa^2 S(t)), decay
factors exp(-kappa^2 Gamma(t)), and the complex background factor

    P_N(t) = prod_{j=3..N} [ p_j e^{i kappa^2 S(t)} + (1 - p_j) e^{-i kappa^2 S(t)} ],

the trace over the other N - 2 spins, which depends only on their
populations p_j.  tilde_P_N denotes the same product with kappa^2 doubled.

The matrix elements in the ordered basis |++>, |+->, |-+>, |--> evolve as

    rho_12(t) = rho_12(0) e^{i w2 t} e^{i k^2 S} e^{-kl^2 Gl - k^2 Gc} P_N
    rho_13(t) = rho_13(0) e^{i w1 t} e^{i k^2 S} e^{-k^2 Gc} P_N
    rho_14(t) = rho_14(0) e^{i (w1+w2) t} e^{-2 kl^2 Gl - 4 k^2 Gc} tilde_P_N
    rho_23(t) = rho_23(0) e^{i (w1-w2) t} e^{-2 kl^2 Gl}
    rho_24(t) = rho_24(0) e^{i w1 t} e^{-i k^2 S} e^{-kl^2 Gl - k^2 Gc} P_N
    rho_34(t) = rho_34(0) e^{i w2 t} e^{-i k^2 S} e^{-kl^2 Gl - k^2 Gc} P_N

with k = kappa_c / N^eta, kl = kappa_l, and the lower triangle fixed by
Hermiticity.  The free phases e^{i w t} are dropped in the default
interaction frame; they are local unitaries and leave concurrence alone.

For N -> infinity at fixed t the matrix tends to an X form when
0 < eta < 1/4 (all P_N suppressed coherences vanish) and to a product of
single spin factors when eta > 1/4, both of which are separable.
"""

from dataclasses import dataclass, field
import math
import numbers

import numpy as np

from .bath import BathConfig, decay_Gamma, phase_S
from .errors import NumericalError, ValidationError

__all__ = [
    "SpinInit",
    "CouplingConfig",
    "EnsembleConfig",
    "initial_two_qubit",
    "background_factor",
    "evolve",
    "evolve_series",
    "limit_state_small_eta",
    "limit_state_large_eta",
    "tau_of_t",
    "t_of_tau",
    "validate_two_qubit",
]

_CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class SpinInit:
    """Single spin initial state: population p and coherence v.

    The 2x2 density matrix [[p, v], [v*, 1-p]] must be positive
    semidefinite, which is the constraint |v|^2 <= p (1 - p).
    """

    p: float
    v: complex = 0.0

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ValidationError("population p must lie in [0, 1], got %r" % (self.p,))
        if abs(self.v) ** 2 > self.p * (1.0 - self.p) + _CONSTRAINT_TOL:
            raise ValidationError(
                "|v|^2 <= p(1-p) violated: |%r|^2 > %r(1-%r)" % (self.v, self.p, self.p)
            )

    def matrix(self):
        return np.array([[self.p, self.v], [np.conj(self.v), 1.0 - self.p]], dtype=complex)


@dataclass(frozen=True)
class CouplingConfig:
    """Coupling strengths and spin count.

    The collective strength used by the dynamics is kappa_c / N^eta; local
    couplings are never scaled.
    """

    kappa_c: float
    kappa_l: float = 0.0
    eta: float = 0.0
    N: int = 2

    def __post_init__(self):
        if self.kappa_c < 0 or self.kappa_l < 0:
            raise ValidationError("coupling strengths must be >= 0")
        if self.eta < 0:
            raise ValidationError("scaling exponent eta must be >= 0")
        if not isinstance(self.N, numbers.Integral) or self.N < 2:
            raise ValidationError("N must be an integer >= 2")
        object.__setattr__(self, "N", int(self.N))

    @property
    def effective_kappa_c(self):
        return self.kappa_c / self.N**self.eta


@dataclass(frozen=True)
class EnsembleConfig:
    """Initial data of the two retained spins and the traced out background.

    background_p is a single population shared by all N - 2 background
    spins or a sequence of length N - 2.  Background coherences never
    enter the reduced dynamics, so they are not represented.
    """

    spin1: SpinInit
    spin2: SpinInit
    background_p: object = 0.5
    omega1: float = 0.0
    omega2: float = 0.0

    def __post_init__(self):
        ps = np.atleast_1d(np.asarray(self.background_p, dtype=float))
        if np.any(ps < 0) or np.any(ps > 1):
            raise ValidationError("background populations must lie in [0, 1]")

    def background_array(self, N):
        ps = np.atleast_1d(np.asarray(self.background_p, dtype=float))
        if ps.size == 1:
            return np.full(N - 2, ps[0])
        if ps.size != N - 2:
            raise ValidationError(
                "background_p has length %d but N - 2 = %d" % (ps.size, N - 2)
            )
        return ps

    @property
    def homogeneous_background(self):
        ps = np.atleast_1d(np.asarray(self.background_p, dtype=float))
        return ps.size == 1 or np.all(ps == ps[0])


def initial_two_qubit(s1, s2):
    """Product initial state of the two retained spins as a 4x4 matrix."""
    return np.kron(s1.matrix(), s2.matrix())


def _background_from_S(S, cfg, ens, doubled=False):
    """P_N (or tilde_P_N) evaluated from precomputed phases S."""
    S = np.asarray(S, dtype=float)
    if cfg.N == 2:
        return np.ones(S.shape, dtype=complex)
    scale = 2.0 if doubled else 1.0
    a = scale * cfg.effective_kappa_c**2 * S
    ps = ens.background_array(cfg.N)
    cos_a, sin_a = np.cos(a), np.sin(a)
    if ens.homogeneous_background:
        p = float(ps[0])
        n = cfg.N - 2
        # z^n via n*log|z| and n*arg z; exact zeros of |z| map to P = 0
        mod2 = p * p + 2.0 * p * (1.0 - p) * np.cos(2.0 * a) + (1.0 - p) ** 2
        with np.errstate(divide="ignore"):
            log_mod = 0.5 * np.log(mod2)
        arg = np.arctan2((2.0 * p - 1.0) * sin_a, cos_a)
        return np.exp(n * log_mod) * np.exp(1j * n * arg)
    log_mod = np.zeros(S.shape)
    arg = np.zeros(S.shape)
    chunk = max(1, int(4e6 / max(S.size, 1)))
    for start in range(0, ps.size, chunk):
        pj = ps[start : start + chunk, None]
        mod2 = pj**2 + 2.0 * pj * (1.0 - pj) * np.cos(2.0 * a)[None, :] + (1.0 - pj) ** 2
        with np.errstate(divide="ignore"):
            log_mod += 0.5 * np.log(mod2).sum(axis=0)
        arg += np.arctan2((2.0 * pj - 1.0) * sin_a[None, :], cos_a[None, :]).sum(axis=0)
    return np.exp(log_mod) * np.exp(1j * arg)


def background_factor(t, cfg, ens, bath=None, doubled=False):
    """P_N(t), or tilde_P_N(t) when doubled, for scalar or array t."""
    bath = bath if bath is not None else BathConfig()
    t_arr = np.asarray(t, dtype=float)
    out = _background_from_S(np.atleast_1d(phase_S(t_arr, bath)), cfg, ens, doubled)
    return out.reshape(t_arr.shape) if t_arr.ndim else complex(out[0])


def _factor_matrix(t, S, Gamma_l, Gamma_c, cfg, ens, frame):
    """Elementwise evolution factors as a (T, 4, 4) array of ones plus phases."""
    if frame not in ("interaction", "lab"):
        raise ValidationError("frame must be 'interaction' or 'lab', got %r" % (frame,))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    S = np.atleast_1d(np.asarray(S, dtype=float))
    ke2 = cfg.effective_kappa_c**2
    kl2 = cfg.kappa_l**2
    phase = np.exp(1j * ke2 * S)
    d_loc = np.exp(-kl2 * np.atleast_1d(Gamma_l))
    d_col = np.exp(-ke2 * np.atleast_1d(Gamma_c))
    P = _background_from_S(S, cfg, ens, doubled=False)
    Pt = _background_from_S(S, cfg, ens, doubled=True)

    F = np.ones(S.shape + (4, 4), dtype=complex)
    F[..., 0, 1] = phase * d_loc * d_col * P
    F[..., 0, 2] = phase * d_col * P
    F[..., 0, 3] = d_loc**2 * d_col**4 * Pt
    F[..., 1, 2] = d_loc**2
    F[..., 1, 3] = np.conj(phase) * d_loc * d_col * P
    F[..., 2, 3] = np.conj(phase) * d_loc * d_col * P
    if frame == "lab":
        w1, w2 = ens.omega1, ens.omega2
        F[..., 0, 1] *= np.exp(1j * w2 * t)
        F[..., 0, 2] *= np.exp(1j * w1 * t)
        F[..., 0, 3] *= np.exp(1j * (w1 + w2) * t)
        F[..., 1, 2] *= np.exp(1j * (w1 - w2) * t)
        F[..., 1, 3] *= np.exp(1j * w1 * t)
        F[..., 2, 3] *= np.exp(1j * w2 * t)
    iu = np.triu_indices(4, k=1)
    F[..., iu[1], iu[0]] = np.conj(F[..., iu[0], iu[1]])
    return F


def evolve_series(rho0, grid, cfg, ens, frame="interaction", gamma_l=None):
    """Evolve rho0 along a DephasingGrid, returning a (T, 4, 4) stack.

    grid.Gamma is used for the collective reservoir; gamma_l supplies the
    local reservoir decay on the same times and defaults to the same
    array (identical form factor and cutoff for both reservoirs).
    """
    Gl = grid.Gamma if gamma_l is None else np.asarray(gamma_l, dtype=float)
    F = _factor_matrix(grid.t, grid.S, Gl, grid.Gamma, cfg, ens, frame)
    out = rho0[None, :, :] * F
    if not np.all(np.isfinite(out)):
        raise NumericalError("evolution produced non-finite matrix entries")
    return out


def evolve(rho0, t, cfg, ens, bath=None, frame="interaction"):
    """Reduced two-qubit state at a single time t."""
    bath = bath if bath is not None else BathConfig()
    if t < 0:
        raise ValidationError("evolve requires t >= 0")
    S = phase_S(t, bath)
    G = decay_Gamma(t, bath)
    F = _factor_matrix(t, S, G, G, cfg, ens, frame)
    return rho0 * F[0]


def limit_state_small_eta(t, s1, s2, cfg, bath=None):
    """N -> infinity state for 0 < eta < 1/4: the X form.

    Only the populations and the (2,3) coherence survive; the latter
    carries the local decay e^{-2 kappa_l^2 Gamma_l(t)}.
    """
    bath = bath if bath is not None else BathConfig()
    d = math.exp(-2.0 * cfg.kappa_l**2 * decay_Gamma(t, bath))
    p1, v1 = s1.p, s1.v
    p2, v2 = s2.p, s2.v
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = p1 * p2
    rho[1, 1] = p1 * (1.0 - p2)
    rho[2, 2] = (1.0 - p1) * p2
    rho[3, 3] = (1.0 - p1) * (1.0 - p2)
    rho[1, 2] = v1 * np.conj(v2) * d
    rho[2, 1] = np.conj(rho[1, 2])
    return rho


def limit_state_large_eta(t, s1, s2, cfg, ens, bath=None):
    """N -> infinity state for eta > 1/4: a product of dressed factors.

    Each factor keeps its populations and carries the off diagonal
    v_j D_l(t) P_inf(t) with D_l = e^{-kappa_l^2 Gamma_l} and
    P_inf = e^{-i kappa_c^2 S (1 - 2p) N^{1 - 2 eta}}; the doubled factor
    obeys tilde_P_inf = P_inf^2, which the product form realizes
    automatically.  For background p = 1/2 the phase P_inf is absent.
    """
    bath = bath if bath is not None else BathConfig()
    if not ens.homogeneous_background:
        raise ValidationError("the large-eta limit requires a homogeneous background")
    p = float(np.atleast_1d(np.asarray(ens.background_p, dtype=float))[0])
    D = math.exp(-cfg.kappa_l**2 * decay_Gamma(t, bath))
    P_inf = np.exp(
        -1j * cfg.kappa_c**2 * phase_S(t, bath) * (1.0 - 2.0 * p) * cfg.N ** (1.0 - 2.0 * cfg.eta)
    )
    factors = []
    for s in (s1, s2):
        off = s.v * D * P_inf
        factors.append(np.array([[s.p, off], [np.conj(off), 1.0 - s.p]], dtype=complex))
    return np.kron(factors[0], factors[1])


def tau_of_t(t, cfg, bath=None):
    """Rescaled time tau = (kappa_c / N^eta)^2 nu_c t."""
    bath = bath if bath is not None else BathConfig()
    return cfg.effective_kappa_c**2 * bath.nu_c * np.asarray(t, dtype=float)


def t_of_tau(tau, cfg, bath=None):
    """Inverse of tau_of_t."""
    bath = bath if bath is not None else BathConfig()
    scale = cfg.effective_kappa_c**2 * bath.nu_c
    if scale == 0:
        raise ValidationError("rescaled time is undefined for kappa_c = 0")
    return np.asarray(tau, dtype=float) / scale


def validate_two_qubit(rho, herm_tol=1e-10, trace_tol=1e-10, psd_tol=-1e-10):
    """Check Hermiticity, unit trace and positivity; raise on failure."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValidationError("expected a 4x4 density matrix, got shape %r" % (rho.shape,))
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValidationError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > trace_tol or abs(np.trace(rho).imag) > trace_tol:
        raise ValidationError("density matrix trace differs from 1")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < psd_tol:
        raise ValidationError("density matrix has a negative eigenvalue %g" % w.min())
    return rho
