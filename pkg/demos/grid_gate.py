"""
The grid gate and its catalyst
==============================

A single gate monomer G carries every starred domain of an n x n grid. It
can be covered by the row strands H_i or by the column strands V_j. Swapping
one cover for the other costs n, unless a catalyst is around.
"""
from tbnbarrier import barrier, stable_configurations
from tbnbarrier.constructions import GridSpec, gen_grid, grid_catalyzed_path

for n in (2, 3):
    net = gen_grid(GridSpec(n))
    c = net.configurations
    res = barrier(net.tbn, c["base_H"], c["base_V"], w=2)
    print(f"n={n}: barrier between the base configurations is {res.barrier}")

# with one catalyst the direct route drops to height 1
net = gen_grid(GridSpec(3, catalysts=1))
path = grid_catalyzed_path(net)
print(f"catalyzed path: {len(path) - 1} moves, height {path.height(2)}")
for conf in path:
    print(f"  {str(conf.energy(2)):>4}  {conf}")

# stable configurations with the catalyst present: the two base configurations
# plus free catalyst, and two more where the catalyst replaces one strand
st = stable_configurations(gen_grid(GridSpec(2, catalysts=1)).tbn, w=2)
print(f"max polymers {st.max_S}, stable configurations:")
for conf in st.stable_configurations:
    print("  ", conf)

# the autocatalytic variant: the V strands, once on G, expose a copy of the catalyst
auto = gen_grid(GridSpec(2, autocatalytic=True))
a = auto.configurations
print("autocatalytic barrier:", barrier(auto.tbn, a["auto_H"], a["auto_V"], w=2).barrier)
