"""
Depolarizing channels as Kraus sets
===================================

A qudit depolarizing channel keeps the input with weight q and replaces it
by the maximally mixed state otherwise. Here it is written with the d**2
generalized Pauli operators X^a Z^b.
"""

import numpy as np

from qswitch.channels import apply_channel, depolarize, depolarizing_kraus, weyl_operator

# the qubit Weyl operators are the Paulis (up to phase for XZ)
for a in range(2):
    for b in range(2):
        print(f"X^{a} Z^{b} =\n{weyl_operator(2, a, b).real}")

# completeness holds for every strength
for q in (0.0, 0.3, 1.0):
    k = depolarizing_kraus(3, q)
    print(f"d=3 q={q}: {len(k)} Kraus operators, completeness error {k.completeness_error():.1e}")

# the Kraus sum and the closed form agree; q=0 sends everything to I/d
rho = np.diag([1.0, 0.0])
for q in (0.0, 0.5):
    out = apply_channel(depolarizing_kraus(2, q), rho)
    print(f"q={q}: Kraus sum diag {np.diag(out).real}, closed form diag {np.diag(depolarize(rho, q)).real}")
