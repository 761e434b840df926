"""
Causal orders, local and global switching
=========================================

With three channels there are 3! = 6 orders. Two orders "globally" switch
the channels when no channel keeps its position; a shared position is a
fixed point and makes the pair "local".
"""

from qswitch.orders import (
    all_orders,
    classify_pair,
    enumerate_combinations,
    global_pair_count,
    predict_class,
)

for o in all_orders(3):
    print(f"|{o.label}>  {o.composition():14s}  first->last {o.sequence}")

# pairs: six of the fifteen have no fixed point
orders = all_orders(3)
for a in orders:
    for b in orders:
        if a.label < b.label:
            pc = classify_pair(a, b)
            print(f"P{a.label}P{b.label}: {pc.kind.value:6s} fixed positions {sorted(pc.fixed_points)}")

# how many combinations of each size reach the high value
for m in range(1, 7):
    combos = enumerate_combinations(3, m)
    counts = [global_pair_count(c)[0] if m > 1 else 0 for c in combos]
    n_max = sum(predict_class(c).value == "Max" for c in combos)
    print(f"m={m}: {len(combos):2d} combinations, global-pair counts {sorted(set(counts))}, predicted Max: {n_max}")
