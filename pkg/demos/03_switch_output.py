"""
Output of the three-channel switch
==================================

Feed a pure qubit through three completely depolarizing channels placed in
an equal superposition of all six orders, and look at the 6 x 6 grid of
2 x 2 blocks of the joint target/control output.
"""

import numpy as np

from qswitch.holevo import control_output
from qswitch.qmath import ket_to_dm, von_neumann_entropy
from qswitch.switch import SwitchSpec, switch_cptp_check, switch_output

spec = SwitchSpec.depolarizing(d=2, q=[0, 0, 0], labels=range(1, 7))
print("trace preserving:", switch_cptp_check(spec))

rho = ket_to_dm([1.0, 0.0])
out = switch_output(spec, rho)
blocks = out.blocks()

np.set_printoptions(precision=4, suppress=True)
print("diagonal block (= I/12):\n", blocks[0, 0].real)
print("block (1, 4), a global pair:\n", blocks[0, 3].real)
print("block (1, 2), a local pair:\n", blocks[0, 1].real)

sym = max(np.abs(blocks[a, b] - blocks[b, a]).max() for a in range(6) for b in range(6))
print(f"block symmetry deviation {sym:.1e}")

rc = control_output(spec, rho)
print("control state after the switch:\n", rc.real)
print(f"H(control) = {von_neumann_entropy(rc):.6f} bits, H(joint) = {von_neumann_entropy(out.state):.6f} bits")
