"""
Saturated paths are enough (for w >= 2)
=======================================

Any path between saturated configurations can be replaced by one that stays
saturated at every step, with at most max(0, 2 - w) extra height.
"""
from tbnbarrier import TBN, Monomer, barrier, saturate_path

m1, m2, m3 = Monomer.of("a b", "m1"), Monomer.of("a*", "m2"), Monomer.of("a c", "m3")
tbn = TBN([m1, m2, m3])
start = tbn.configuration([[m1, m2], [m3]])
goal = tbn.configuration([[m1], [m2, m3]])

for w in (1, 2):
    full = barrier(tbn, start, goal, w)
    sat = barrier(tbn, start, goal, w, mode="saturated_only")
    print(f"w={w}: any path {full.barrier}, saturated only {sat.barrier}")

# at w = 1 the cheapest path passes through the unsaturated all-apart configuration
path = barrier(tbn, start, goal, 1).witness
print("cheapest path:", *path, sep="\n  ")
fixed = saturate_path(path, 1)
print(f"saturated replacement (height {fixed.height(1)}):", *fixed, sep="\n  ")
