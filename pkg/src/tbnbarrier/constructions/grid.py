"""The n x n grid gate, its catalyst and its autocatalytic variant.

``G`` carries every starred domain ``x_ij*``.  Horizontal ``H_i`` carries row
i, vertical ``V_j`` column j, so ``G`` is saturated either by all of the
``H_i`` (polymer G_H) or by all of the ``V_j`` (polymer G_V).  The catalyst
``C`` carries the lower triangle ``x_ij, j <= i``.  The autocatalytic
verticals ``Vt_j`` carry column j plus an extra copy of ``x_ij`` for i >= j,
so G_Vt exposes exactly the sites of ``C``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..kinetics import Path
from ..model import TBN, Configuration, Monomer, SiteType, TBNError
from ._builder import PathBuilder


def _name(i: int, j: int, n: int) -> str:
    return f"{i}{j}" if n < 10 else f"{i}.{j}"


def _sites(cells, n: int, starred: bool = False) -> tuple[SiteType, ...]:
    return tuple(SiteType(_name(i, j, n), starred) for i, j in cells)


def horizontal(i: int, n: int) -> Monomer:
    return Monomer(_sites([(i, j) for j in range(1, n + 1)], n), f"H{i}")


def vertical(j: int, n: int) -> Monomer:
    return Monomer(_sites([(i, j) for i in range(1, n + 1)], n), f"V{j}")


def auto_vertical(j: int, n: int) -> Monomer:
    cells = [(i, j) for i in range(1, n + 1)] + [(i, j) for i in range(j, n + 1)]
    return Monomer(_sites(cells, n), f"Vt{j}")


def gate(n: int) -> Monomer:
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return Monomer(_sites(cells, n, starred=True), "G")


def catalyst(n: int) -> Monomer:
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, i + 1)]
    return Monomer(_sites(cells, n), "C")


@dataclass(frozen=True)
class GridSpec:
    n: int
    h_copies: int = 1
    v_copies: int = 1
    g_copies: int = 1
    catalysts: int = 0
    autocatalytic: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise TBNError("grid size must be at least 1")
        if min(self.h_copies, self.v_copies, self.g_copies) < 0 or self.catalysts < 0:
            raise TBNError("copy counts must be nonnegative")
        if self.autocatalytic and (self.h_copies, self.v_copies, self.g_copies, self.catalysts) != (1, 1, 1, 0):
            raise TBNError("the autocatalytic network has fixed copy counts")


@dataclass
class GridNetwork:
    spec: GridSpec
    tbn: TBN
    configurations: dict[str, Configuration]
    H: list[Monomer] = field(repr=False)
    V: list[Monomer] = field(repr=False)
    G: Monomer = field(repr=False)
    C: Monomer = field(repr=False)

    def base_configurations(self) -> list[Configuration]:
        """Every configuration whose G's each sit with all H_i or all V_j, the rest free."""
        k = Counter(self.tbn.counts)[self.G]
        out = []
        for with_h in range(k + 1):
            polymers, pool = [], Counter(self.tbn.counts)
            ok = True
            for r in range(k):
                side = self.H if r < with_h else self.V
                for m in side:
                    if pool[m] <= 0:
                        ok = False
                    pool[m] -= 1
                pool[self.G] -= 1
                polymers.append([self.G, *side])
            if not ok:
                continue
            polymers.extend([m] for m in pool.elements())
            out.append(Configuration(polymers))
        return out


def gen_grid(spec: GridSpec) -> GridNetwork:
    n = spec.n
    H = [horizontal(i, n) for i in range(1, n + 1)]
    G = gate(n)
    C = catalyst(n)
    if spec.autocatalytic:
        V = [auto_vertical(j, n) for j in range(1, n + 1)]
        counts = Counter({G: 2})
        counts.update({h: 1 for h in H})
        counts.update({v: 2 for v in V})
        tbn = TBN(counts)
        confs = {
            "auto_H": Configuration([[G, *H], [G, *V]] + [[v] for v in V]),
            "auto_V": Configuration([[G, *V], [G, *V]] + [[h] for h in H]),
        }
        return GridNetwork(spec, tbn, {k: tbn.check(v) for k, v in confs.items()}, H, V, G, C)

    V = [vertical(j, n) for j in range(1, n + 1)]
    counts = Counter()
    for h in H:
        counts[h] += spec.h_copies
    for v in V:
        counts[v] += spec.v_copies
    counts[G] += spec.g_copies
    counts[C] += spec.catalysts
    counts = +counts
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            supply = spec.h_copies + spec.v_copies + (spec.catalysts if j <= i else 0)
            if supply < spec.g_copies:
                raise TBNError(f"not enough monomers carrying x{_name(i, j, n)} to bind every G")
    tbn = TBN(counts)
    net = GridNetwork(spec, tbn, {}, H, V, G, C)

    def base(side):
        pool = Counter(tbn.counts)
        polymers = []
        for _ in range(spec.g_copies):
            for m in side:
                pool[m] -= 1
            pool[G] -= 1
            polymers.append([G, *side])
        if any(v < 0 for v in pool.values()):
            return None
        return Configuration(polymers + [[m] for m in pool.elements()])

    for name, side in (("base_H", H), ("base_V", V)):
        conf = base(side)
        if conf is not None:
            net.configurations[name] = tbn.check(conf)
    if spec.catalysts and spec.g_copies == 1:
        for side in ("H", "V"):
            if f"base_{side}" in net.configurations:
                net.configurations[f"cat_{side}"] = net.configurations[f"base_{side}"]
    return net


def grid_catalyzed_path(net: GridNetwork) -> Path:
    """Height-1 saturated path from G_H to G_V through a catalyst.

    Merge G_H with the catalyst (C, or the autocatalyst polymer G_Vt), split
    off H_n, then for i = n-1 down to 1 merge V_{i+1} and split off H_i, and
    finally merge V_1 and split the catalyst away again.  Row i can only be
    released once columns i+1..n are present, hence the descending order.
    """
    n = net.spec.n
    H, V, G = net.H, net.V, net.G
    if net.spec.autocatalytic:
        start, goal = net.configurations["auto_H"], net.configurations["auto_V"]
        polymers = {"P": [G, *H], "cat": [G, *V]}
        cat_part = [G, *V]
    else:
        if net.spec.catalysts < 1:
            raise TBNError("catalyzed path needs at least one catalyst C")
        if "base_H" not in net.configurations:
            raise TBNError("network has no G_H base configuration")
        start = net.configurations["base_H"]
        polymers = {}
        for r in range(net.spec.g_copies):
            polymers[f"gh{r}"] = [G, *H]
        polymers["P"] = polymers.pop("gh0")
        polymers["cat"] = [net.C]
        cat_part = [net.C]
        goal = net.configurations.get("base_V") if net.spec.g_copies == 1 else None
    b = PathBuilder(polymers)
    leftovers = Counter(net.tbn.counts)
    leftovers.subtract(Counter(m for p in b.polymers.values() for m in p))
    for k, m in enumerate(sorted(leftovers.elements())):
        b.polymers[f"free{k}"] = [m]
    b.snapshots = [b.configuration()]
    if b.configuration() != start:
        raise AssertionError("catalyzed path does not start at the G_H configuration")

    def free(m: Monomer) -> str:
        for name, p in b.polymers.items():
            if p == [m]:
                return name
        raise TBNError(f"no free {m.display} available")

    b.merge("P", "cat")
    b.split("P", [H[n - 1]], "out_H0")
    for i in range(n - 1, 0, -1):
        b.merge("P", free(V[i]))
        b.split("P", [H[i - 1]], f"out_H{i}")
    b.merge("P", free(V[0]))
    b.split("P", cat_part, "cat_out")
    path = b.path()
    if goal is not None and path.end != goal:
        raise AssertionError("catalyzed path did not reach the G_V configuration")
    return path
