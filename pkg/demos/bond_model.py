"""
Tracking individual bonds
=========================

The polymer model assumes every polymer holds as many bonds as it can. If
bonds are tracked one at a time, a split must wait until the bonds across
it are broken, so barriers can only go up, and by at most one.
"""
from tbnbarrier import TBN, BondConfiguration, BondPolymer, Monomer, barrier, bond_barrier

a, s = Monomer.of("a"), Monomer.of("a*")
tbn = TBN([a, s])
bound = BondConfiguration([BondPolymer([a, s], [(0, 1, "a", 1)])])
apart = BondConfiguration.from_configuration(tbn.all_singletons())

for w in (1, 2, 3):
    fine = bond_barrier(tbn, bound, apart, w)
    coarse = barrier(tbn, bound.simplify(), apart.simplify(), w)
    print(f"w={w}: polymer model {coarse.barrier}, bond-aware {fine.barrier}")

res = bond_barrier(tbn, bound, apart, 2)
for move, conf in zip(["start"] + [m.kind for m in res.witness.moves], res.witness.configurations):
    print(f"  {move:>6}  {conf}  E={conf.energy(2)}")
