"""
Fluctuation theorems on random protocols
========================================

Jarzynski's equality for the TPM distribution and its corrected form for
the weak quasi-probability, with the correction factor Upsilon.
"""

# %%
from workfluct import ThermalConfig, allahverdyan_check, gibbs_state, jarzynski_check
from workfluct.fluctuation import random_protocol
from workfluct.instances import random_density, rng_for

rng = rng_for(3)
t = ThermalConfig(1.3)
p = random_protocol(rng, 4)

# %%
# Thermal start: both sides agree and Upsilon is one.
gamma = gibbs_state(p.h_initial, t)
rep = jarzynski_check(gamma, p, t)
print(f"Jarzynski    lhs={rep.lhs:.12f} rhs={rep.rhs:.12f} passed={rep.passed}")
rep = allahverdyan_check(gamma, p, t)
print(f"weak, thermal Upsilon={rep.upsilon:.12f} passed={rep.passed}")

# %%
# A generic state: the plain equality fails, the Upsilon-corrected one holds.
rho = random_density(4, rng)
plain = jarzynski_check(rho, p, t)
corrected = allahverdyan_check(rho, p, t)
print(f"plain     rel residual {plain.rel_residual:.3e}")
print(f"corrected rel residual {corrected.rel_residual:.3e}  Upsilon={corrected.upsilon:.6f}")
