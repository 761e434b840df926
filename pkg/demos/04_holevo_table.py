"""
Holevo information for every superposition of orders
====================================================

For each number m of superposed orders, evaluate every combination and
report the largest and smallest chi. Pass ``3`` on the command line to run
qutrits (about 20 s) instead of qubits.
"""

import sys

from qswitch.holevo import holevo_chi
from qswitch.orders import enumerate_combinations, predict_class
from qswitch.switch import SwitchSpec

d = int(sys.argv[1]) if len(sys.argv) > 1 else 2

chi_two_switch = holevo_chi(SwitchSpec.depolarizing(d, [0, 0], [1, 2])).chi
print(f"two-channel switch, d={d}: chi = {chi_two_switch:.6f} bits")

for m in range(1, 7):
    values = {}
    for combo in enumerate_combinations(3, m):
        res = holevo_chi(SwitchSpec.depolarizing(d, [0, 0, 0], combo.labels))
        values[combo.key()] = (res.chi, predict_class(combo).value)
    hi = max(v[0] for v in values.values())
    lo = min(v[0] for v in values.values())
    best = [k for k, v in values.items() if abs(v[0] - hi) < 1e-4]
    print(f"m={m}: chi_max={hi:.6f}  chi_min={lo:.6f}  ratio to two-switch {hi / chi_two_switch:.2f}"
          f"  reached by {len(best)} of {len(values)}")
