"""The two N -> infinity limits and how fast finite ensembles reach them.

For eta < 1/4 the background factor kills every dressed coherence and
the pair lands on an X state whose only off-diagonal element is the
locally protected (2,3) entry.  For eta > 1/4 each spin keeps a full
coherence, dressed by a residual deterministic twist, and the pair state
is a product.  Neither limit is ever entangled.
"""

from dephasim import (
    BathConfig,
    CouplingConfig,
    EnsembleConfig,
    SpinInit,
    concurrence,
    limit_state_large_eta,
    limit_state_small_eta,
    limits_compare,
)

bath = BathConfig()
spin = SpinInit(p=0.5, v=0.48)
ens = EnsembleConfig(spin1=spin, spin2=spin)

for eta, name in ((0.1, "X-state limit"), (0.5, "product limit")):
    res = limits_compare(eta, [100, 1000, 10000, 100000], 30.0, spin, spin,
                         kappa_c=0.2, bath=bath)
    print("eta = %.1f  (%s)" % (eta, name))
    print("      N     |rho_N - rho_inf|   C(rho_N)")
    for n, d, cn, _ in res.rows:
        print("%8d   %.3e          %.3e" % (n, d, cn))
    print()

cfg_s = CouplingConfig(kappa_c=0.2, eta=0.1, N=100)
cfg_l = CouplingConfig(kappa_c=0.2, eta=0.5, N=100)
rho_s = limit_state_small_eta(30.0, spin, spin, cfg_s, bath=bath)
rho_l = limit_state_large_eta(30.0, spin, spin, cfg_l, ens, bath=bath)
print("limit concurrences:", concurrence(rho_s).value, concurrence(rho_l).value)
print("surviving X-state coherence |rho_23| =", abs(rho_s[1, 2]),
      " (= v^2, below the 1/4 needed for entanglement)")
