"""Which initial product states entangle best?

Two grid studies: an abstract one where the collective phase is frozen
at its most entangling value kappa^2 S = pi/2 with no damping, and a
dynamic one for N = 40 where each cell runs the full evolution with
p_i = v_i.  Both place the optimum at p = v = 1/2, the maximally
coherent unbiased state.
"""

import numpy as np

from dephasim import BathConfig, CouplingConfig, grid_pv

# 1. Abstract grid: concurrence of the frozen state, no dynamics at all.
res = grid_pv(np.linspace(0.0, 1.0, 21), np.linspace(0.0, 0.5, 21))
print("abstract grid argmax (p, v):", res.meta["argmax"],
      " C_max=%.4f" % res.meta["c_max"])

p = np.array(res.column("p"))
v = np.array(res.column("v"))
c = np.array(res.column("c_max"))
print("\n     v:   0.0   0.125  0.25   0.375  0.5")
for pv in (0.1, 0.3, 0.5, 0.7, 0.9):
    row = [c[(np.isclose(p, pv)) & (np.isclose(v, vv))][0]
           for vv in (0.0, 0.125, 0.25, 0.375, 0.5)]
    print("p=%.2f  " % pv + "  ".join("%.3f" % x for x in row))

# 2. Dynamic grid: same question for a real ensemble of 40 spins.
cfg = CouplingConfig(kappa_c=0.05, N=40)
res = grid_pv(np.linspace(0.0, 0.5, 13), np.linspace(0.0, 0.5, 13),
              mode="dynamic-corner", cfg=cfg, bath=BathConfig())
print("\ndynamic grid argmax (p1, p2):", res.meta["argmax"],
      " C_max=%.4f" % res.meta["c_max"])
print("cells on the p=v boundary are exact; infeasible cells are clipped")
