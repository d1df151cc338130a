"""
Gaussian pointer measurement
============================

Simulate the pointer density on a grid and compare the postselected mean
shift with its closed form.
"""

# %%
import numpy as np

from workfluct import PointerConfig, closed_form_pointer_mean, postselected_pointer_mean
from workfluct.instances import random_density, random_projector, rng_for

rng = rng_for(7)
d = 3
rho = random_density(d, rng)
E = random_projector(d, rng)            # measured projector
Pi = random_projector(d, rng, rank=2)   # postselection

# %%
print("   s      q_j grid     q_j closed   <x> grid     <x> closed")
for s in (0.2, 0.5, 1.0, 5.0, 50.0):
    grid = postselected_pointer_mean(rho, E, Pi, PointerConfig.default(s))
    q, mean = closed_form_pointer_mean(rho, E, Pi, s)
    print(f"{s:5.1f}  {grid.q_j:.9f}  {q:.9f}  {grid.mean_x:+.8f}  {mean:+.8f}")

# %%
# For large s the mean shift approaches the real part of the weak value.
wv = np.trace(Pi @ E @ rho.matrix).real / np.trace(Pi @ rho.matrix).real
print("weak value Re <E>_w =", round(wv, 8))
