"""How fast does bath-mediated entanglement die as the ensemble grows?

Sweeps the total spin number N at fixed coupling and fits exponentials
to the peak concurrence and to the collapse time.  Past a threshold N
the retained coherence v^2 = 0.2304 can no longer beat the population
term sqrt(rho_11 rho_44) = 1/4, so the peak drops to exactly zero and
the usable fit window ends there.
"""

import numpy as np

from dephasim import (
    BathConfig,
    CouplingConfig,
    EnsembleConfig,
    SpinInit,
    fit_exponential,
    sweep_N,
)

bath = BathConfig()
spin = SpinInit(p=0.5, v=0.48)
ens = EnsembleConfig(spin1=spin, spin2=spin)
cfg = CouplingConfig(kappa_c=0.05, N=2)

res = sweep_N(list(range(2, 201, 2)), cfg, ens, bath)
n = np.array(res.column("n"))
c = np.array(res.column("c_max"))
tc = np.array(res.column("tau_c"))

alive = c > 0
print("last N with nonzero peak:", n[alive].max())
print("\n  N    C_max       tau_c")
for i in range(0, 12, 2):
    print("%4d  %.4e  %8.4f" % (n[i], c[i], tc[i]))

fit_c = fit_exponential(n, c, n_range=(10, 150))
print("\npeak fit   : slope=%.4f r^2=%.4f (%d points used, %d excluded)"
      % (fit_c.slope, fit_c.r_squared, fit_c.n_used, fit_c.n_excluded))

ok = np.isfinite(tc) & (tc > 0)
fit_t = fit_exponential(n[ok], tc[ok], n_range=(10, 150))
print("collapse fit: slope=%.4f r^2=%.4f  => tau_c ~ exp(-%.4f N)"
      % (fit_t.slope, fit_t.r_squared, -fit_t.slope))
