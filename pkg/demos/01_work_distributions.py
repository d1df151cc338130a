"""
Work statistics of a driven qubit
=================================

Compare the two-point-measurement distribution, the weak quasi-probability
and the finite-spread interpolation between them.
"""

# %%
import numpy as np

from workfluct import (
    HamiltonianSpec, ProtocolSpec, UnitarySpec, average_work, finite_s_distribution,
    pure_state, tpm_distribution, weak_distribution,
)
from workfluct.contextuality import negativity
from workfluct.core import HADAMARD

# A qubit with unit gap, flipped into the |+>/|-> basis and measured again.
h = HamiltonianSpec.from_energies([0.0, 1.0])
protocol = ProtocolSpec(h, UnitarySpec(explicit=HADAMARD), h)

# Start in a state with coherence between the energy levels.
theta = 2.5
rho = pure_state([np.cos(theta / 2), np.sin(theta / 2)])

# %%
tpm = tpm_distribution(rho, protocol)
weak = weak_distribution(rho, protocol)
print("   W   (i,j)    TPM        weak")
for a, b in zip(tpm.points, weak.points):
    print(f"{a.w:+.1f}  {a.i, a.j}  {a.value:9.5f}  {b.value:9.5f}")
print("negativity of the weak distribution:", round(negativity(weak), 5))

# %%
# The unmeasured energy change is reproduced by the weak average only.
U = protocol.unitary
exact = np.trace(U @ rho.matrix @ U.conj().T @ h.matrix).real - np.trace(rho.matrix @ h.matrix).real
print(f"<W> tpm={average_work(tpm):.5f}  weak={average_work(weak):.5f}  exact={exact:.5f}")

# %%
# A finite pointer spread s moves smoothly from TPM (small s) to weak (large s).
for s in (0.1, 0.5, 1.0, 3.0, 30.0):
    d = finite_s_distribution(rho, protocol, s)
    print(f"s={s:5.1f}  values={np.round(d.values, 5)}")
