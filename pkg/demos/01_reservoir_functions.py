"""Walk through the two reservoir integrals that drive all of the dynamics.

The collective phase S(t) is known in closed form and turns linear once
the cutoff timescale 1/k_c has passed.  The decay exponent Gamma(t)
saturates at a temperature-dependent plateau, overshooting it on the way
because of the sharp cutoff.
"""

import numpy as np

from dephasim import BathConfig, decay_Gamma, gamma_saturation, phase_S

bath = BathConfig()  # epsilon = theta = 1, so k_c = 1
print("cutoff k_c        :", bath.k_c)
print("inverse temp beta :", bath.beta)

# 1. The phase starts cubic and becomes linear with slope -k_c^3/6.
t = np.array([0.01, 0.1, 1.0, 10.0, 100.0, 1000.0])
S = phase_S(t, bath)
print("\n   t        S(t)          S(t)/t")
for ti, si in zip(t, S):
    print("%7.2f  %12.5e  %12.5e" % (ti, si, si / ti))
print("asymptotic slope -k_c^3/6 =", -bath.k_c**3 / 6.0)

# 2. Gamma rises, overshoots its plateau, and rings down like sin(k_c t)/t.
sat = gamma_saturation(bath)
print("\nGamma saturation value:", round(sat, 6))
t = np.linspace(0.0, 40.0, 9)
G = decay_Gamma(t, bath)
print("   t      Gamma(t)   vs plateau")
for ti, gi in zip(t, G):
    print("%6.1f  %9.6f  %+9.6f" % (ti, gi, gi - sat))

peak = decay_Gamma(np.linspace(2.0, 8.0, 200), bath).max()
print("overshoot above plateau: %.1f%%" % (100 * (peak / sat - 1.0)))
