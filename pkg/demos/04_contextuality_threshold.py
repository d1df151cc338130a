"""
Anomalous weak values and the pointer-spread threshold
======================================================

Find the state with the most negative witness Re tr(rho E Pi) and the
smallest pointer spread at which the postselected statistics rule out a
noncontextual model.
"""

# %%
import numpy as np

from workfluct import find_negative_state, lemma1_report, s_threshold, weak_value

ket0 = np.array([1.0, 0.0])
plus = np.array([1.0, 1.0]) / np.sqrt(2)
E, Pi = np.outer(ket0, ket0), np.outer(plus, plus)

rho, wmin = find_negative_state(E, Pi)
print(f"witness minimum {wmin:.12f}  exact {(1 - np.sqrt(2)) / 4:.12f}")
print("weak value:", weak_value(rho, E, Pi))

# %%
thr = s_threshold(rho, E, Pi)
print(f"threshold s* = {thr.s_star:.6f}  monotone={thr.monotone}")

# %%
print("    s       p_minus      gap         asymptotic   holds")
for s in np.geomspace(0.5, 1000, 12):
    r = lemma1_report(rho, E, Pi, s)
    print(f"{s:8.2f}  {r.p_minus:.8f}  {r.gap:+.3e}  {r.asymptotic_gap:+.3e}  {r.condition_2c}")
