"""
A noncontextual model for two-point measurements
================================================

The TPM statistics of any protocol admit a simple ontological model: the
hidden variable is the initial energy level and the response function is
the transition probability.
"""

# %%
import numpy as np

from workfluct import build_tpm_model, pure_state, verify_model
from workfluct.fluctuation import random_protocol
from workfluct.instances import rng_for

p = random_protocol(rng_for(5), 3)
model = build_tpm_model(p)
print("outcomes (i, j):", model.points)
print("response functions (rows: hidden level):")
print(np.round(model.response, 4) + 0.0)

# %%
# Even a maximally coherent state is reproduced exactly.
rho = pure_state(p.h_initial.eigenvectors.sum(axis=1) / np.sqrt(3))
dev, ok = verify_model(model, rho, p)
print(f"max deviation {dev:.2e}  reproduced={ok}")
