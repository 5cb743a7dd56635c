"""Bond-aware configurations: an explicit matching of sites plus a partition.

Within a monomer, copies of the same site type are interchangeable, so a
polymer's matching is stored as bond multiplicities between monomer slots:
``(i, j, name, k)`` means k bonds from an unstarred ``name`` on slot i to a
starred ``name`` on slot j (i == j is a monomer bound to itself).  A polymer is
put in canonical form by sorting its slots by monomer type and taking the
least bond list over all permutations of same-type slots.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .model import TBN, Configuration, Monomer, Polymer, TBNError, as_w
from .search import BarrierResult, SearchBudget, bottleneck_map, bottleneck_search, EXACT, BUDGET, UNREACHABLE

MAX_SITES = 10

Bond = tuple[int, int, str, int]

MOVE_KINDS = ("make", "break", "swap3", "swap4", "merge", "split")


def _site_counts(m: Monomer) -> tuple[Counter, Counter]:
    plus, minus = Counter(), Counter()
    for s in m.sites:
        (minus if s.starred else plus)[s.name] += 1
    return plus, minus


@lru_cache(maxsize=None)
def _counts(m: Monomer) -> tuple[Counter, Counter]:
    return _site_counts(m)


def _group_ranges(monomers: tuple[Monomer, ...]) -> list[range]:
    out, start = [], 0
    for k in range(1, len(monomers) + 1):
        if k == len(monomers) or monomers[k] != monomers[start]:
            out.append(range(start, k))
            start = k
    return out


@lru_cache(maxsize=200_000)
def _canonical_bonds(monomers: tuple[Monomer, ...], bonds: tuple[Bond, ...]) -> tuple[Bond, ...]:
    groups = [g for g in _group_ranges(monomers) if len(g) > 1]
    if not groups or not bonds:
        return tuple(sorted(bonds))
    best = None
    perm = list(range(len(monomers)))
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        for g, p in zip(groups, choice):
            for a, b in zip(g, p):
                perm[a] = b
        cand = tuple(sorted((perm[i], perm[j], x, k) for i, j, x, k in bonds))
        if best is None or cand < best:
            best = cand
    return best


def _merge_bonds(bonds: Iterable[Bond]) -> tuple[Bond, ...]:
    total: Counter = Counter()
    for i, j, x, k in bonds:
        total[(i, j, x)] += k
    return tuple((i, j, x, k) for (i, j, x), k in sorted(total.items()) if k)


class BondPolymer:
    """Monomers (sorted) and their bonds, in canonical form."""

    __slots__ = ("monomers", "bonds", "key", "_hash")

    def __init__(self, monomers: Sequence[Monomer], bonds: Iterable[Bond] = ()):
        if not monomers:
            raise TBNError("a polymer must contain at least one monomer")
        order = sorted(range(len(monomers)), key=lambda k: monomers[k])
        where = {old: new for new, old in enumerate(order)}
        ms = tuple(monomers[k] for k in order)
        bs = _merge_bonds((where[i], where[j], x, k) for i, j, x, k in bonds)
        _validate(ms, bs)
        self.monomers = ms
        self.bonds = _canonical_bonds(ms, bs)
        self.key = (tuple(m.key for m in ms), self.bonds)
        self._hash = hash(self.key)

    def __eq__(self, other):
        return isinstance(other, BondPolymer) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __len__(self):
        return len(self.monomers)

    def __repr__(self):
        inner = " ".join(m.display for m in self.monomers)
        if self.bonds:
            inner += " | " + ", ".join(f"{i}.{x}-{j}.{x}*" + (f"x{k}" if k > 1 else "") for i, j, x, k in self.bonds)
        return "{" + inner + "}"

    @property
    def bond_count(self) -> int:
        return sum(k for *_, k in self.bonds)

    def free(self) -> tuple[list[Counter], list[Counter]]:
        """Unbound unstarred and starred site counts per slot."""
        plus = [Counter(_counts(m)[0]) for m in self.monomers]
        minus = [Counter(_counts(m)[1]) for m in self.monomers]
        for i, j, x, k in self.bonds:
            plus[i][x] -= k
            minus[j][x] -= k
        return plus, minus

    def simplify(self) -> Polymer:
        return Polymer(self.monomers)

    def max_matched(self) -> bool:
        return self.bond_count == self.simplify().bond_count


def _validate(ms: tuple[Monomer, ...], bonds: tuple[Bond, ...]) -> None:
    used_plus: Counter = Counter()
    used_minus: Counter = Counter()
    for i, j, x, k in bonds:
        if not (0 <= i < len(ms) and 0 <= j < len(ms)) or k <= 0:
            raise TBNError(f"bond {(i, j, x, k)} does not refer to monomers of the polymer")
        used_plus[(i, x)] += k
        used_minus[(j, x)] += k
    for (i, x), k in used_plus.items():
        if _counts(ms[i])[0][x] < k:
            raise TBNError(f"monomer {ms[i].display} has fewer than {k} unstarred {x} sites to bond")
    for (j, x), k in used_minus.items():
        if _counts(ms[j])[1][x] < k:
            raise TBNError(f"monomer {ms[j].display} has fewer than {k} starred {x} sites to bond")


def _max_matching(ms: Sequence[Monomer]) -> list[Bond]:
    """Pair unstarred and starred copies of each name greedily in slot order."""
    bonds = []
    names = sorted({s.name for m in ms for s in m.sites})
    for x in names:
        plus = [[i, _counts(m)[0][x]] for i, m in enumerate(ms) if _counts(m)[0][x]]
        minus = [[j, _counts(m)[1][x]] for j, m in enumerate(ms) if _counts(m)[1][x]]
        a = b = 0
        while a < len(plus) and b < len(minus):
            k = min(plus[a][1], minus[b][1])
            bonds.append((plus[a][0], minus[b][0], x, k))
            plus[a][1] -= k
            minus[b][1] -= k
            a += plus[a][1] == 0
            b += minus[b][1] == 0
    return bonds


class BondConfiguration:
    """A partition into bond polymers; equal configurations share one key."""

    __slots__ = ("polymers", "key", "_hash")

    def __init__(self, polymers: Iterable[BondPolymer]):
        ps = tuple(sorted(polymers))
        if not ps:
            raise TBNError("a configuration must contain at least one polymer")
        self.polymers = ps
        self.key = tuple(p.key for p in ps)
        self._hash = hash(self.key)

    @classmethod
    def from_configuration(cls, conf: Configuration, matching: str = "max") -> "BondConfiguration":
        """Lift a polymer-level configuration with a maximum (or empty) matching."""
        if matching not in ("max", "none"):
            raise TBNError("matching must be 'max' or 'none'")
        out = []
        for p in conf.polymers:
            ms = list(p.monomers)
            out.append(BondPolymer(ms, _max_matching(ms) if matching == "max" else ()))
        return cls(out)

    @classmethod
    def from_site_pairs(cls, groups: Sequence[Sequence[Monomer]], pairs: Iterable[tuple[int, int]]) -> "BondConfiguration":
        """Build from explicit site-instance pairs, indexed as in :meth:`site_list`.

        Sites are numbered polymer by polymer, monomer by monomer, in each
        monomer's sorted site order.
        """
        index = []
        for g, ms in enumerate(groups):
            for slot, m in enumerate(ms):
                for s in m.sites:
                    index.append((g, slot, s))
        seen = set()
        bonds: list[list[Bond]] = [[] for _ in groups]
        for u, v in pairs:
            if u in seen or v in seen or u == v:
                raise TBNError(f"site {u if u in seen else v} is matched twice")
            seen.update((u, v))
            try:
                (g1, s1, a), (g2, s2, b) = index[u], index[v]
            except IndexError:
                raise TBNError(f"site index out of range in pair {(u, v)}") from None
            if not a.bonds_with(b):
                raise TBNError(f"sites {a} and {b} are not complementary")
            if g1 != g2:
                raise TBNError("a bond must lie inside one polymer")
            if a.starred:
                s1, s2 = s2, s1
            bonds[g1].append((s1, s2, a.name, 1))
        return cls(BondPolymer(list(ms), bs) for ms, bs in zip(groups, bonds))

    def __eq__(self, other):
        return isinstance(other, BondConfiguration) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __len__(self):
        return len(self.polymers)

    def __repr__(self):
        return "BondConfiguration(" + " ".join(map(repr, self.polymers)) + ")"

    @property
    def bonds(self) -> int:
        return sum(p.bond_count for p in self.polymers)

    @property
    def polymer_count(self) -> int:
        return len(self.polymers)

    def site_count(self) -> int:
        return sum(len(m) for p in self.polymers for m in p.monomers)

    def energy(self, w) -> Fraction:
        return -as_w(w) * self.bonds - len(self.polymers)

    def simplify(self) -> Configuration:
        return Configuration(p.simplify() for p in self.polymers)

    @property
    def saturated(self) -> bool:
        """The matching is maximal: no unbound x and unbound x* anywhere."""
        plus, minus = set(), set()
        for p in self.polymers:
            fp, fm = p.free()
            for c in fp:
                plus.update(x for x, k in c.items() if k)
            for c in fm:
                minus.update(x for x, k in c.items() if k)
        return not (plus & minus)

    def site_list(self) -> list[tuple[int, int, str]]:
        """(polymer, slot, site) for every site instance, in canonical order."""
        return [(g, slot, str(s)) for g, p in enumerate(self.polymers)
                for slot, m in enumerate(p.monomers) for s in m.sites]

    def matching(self) -> list[tuple[int, int]]:
        """Bonds as pairs of indices into :meth:`site_list`."""
        pairs = []
        base = 0
        for p in self.polymers:
            offsets, taken = [], Counter()
            for m in p.monomers:
                offsets.append(base)
                base += len(m)
            for i, j, x, k in p.bonds:
                for _ in range(k):
                    u = _nth_site(p.monomers[i], x, False, taken[(i, x, False)])
                    v = _nth_site(p.monomers[j], x, True, taken[(j, x, True)])
                    taken[(i, x, False)] += 1
                    taken[(j, x, True)] += 1
                    pairs.append((offsets[i] + u, offsets[j] + v))
        return pairs


def _nth_site(m: Monomer, name: str, starred: bool, n: int) -> int:
    seen = 0
    for k, s in enumerate(m.sites):
        if s.name == name and s.starred == starred:
            if seen == n:
                return k
            seen += 1
    raise TBNError(f"monomer {m.display} has no site {name}{'*' if starred else ''} number {n}")


def simplify(bc: BondConfiguration) -> Configuration:
    return bc.simplify()


def bond_energy(bc: BondConfiguration, w) -> Fraction:
    return bc.energy(w)


def is_bond_saturated(bc: BondConfiguration) -> bool:
    return bc.saturated


@dataclass(frozen=True)
class BondMove:
    kind: str
    polymers: tuple[int, ...]
    detail: tuple = ()

    def __post_init__(self):
        if self.kind not in MOVE_KINDS:
            raise TBNError(f"unknown bond move {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "polymers": list(self.polymers), "detail": [list(d) if isinstance(d, tuple) else d for d in self.detail]}


def _with(c: BondConfiguration, drop: Sequence[int], add: Iterable[BondPolymer]) -> BondConfiguration:
    keep = [p for k, p in enumerate(c.polymers) if k not in drop]
    return BondConfiguration(keep + list(add))


def _edit(bonds: tuple[Bond, ...], remove: Sequence[tuple[int, int, str]], add: Sequence[tuple[int, int, str]]):
    total = Counter({(i, j, x): k for i, j, x, k in bonds})
    for b in remove:
        total[b] -= 1
    for b in add:
        total[b] += 1
    return [(i, j, x, k) for (i, j, x), k in total.items() if k > 0]


def _polymer_moves(p: BondPolymer, allow_make_break: bool, swap4: bool):
    ms = p.monomers
    plus, minus = p.free()
    names = sorted({x for c in plus for x, k in c.items() if k} | {x for c in minus for x, k in c.items() if k}
                   | {b[2] for b in p.bonds})
    if allow_make_break:
        for x in names:
            for i in range(len(ms)):
                if plus[i][x] <= 0:
                    continue
                for j in range(len(ms)):
                    if minus[j][x] > 0:
                        yield "make", (i, j, x), _edit(p.bonds, [], [(i, j, x)])
        for i, j, x, _ in p.bonds:
            yield "break", (i, j, x), _edit(p.bonds, [(i, j, x)], [])
    for i, j, x, _ in p.bonds:
        for k in range(len(ms)):
            if k != i and plus[k][x] > 0:
                yield "swap3", (i, j, x, k, j), _edit(p.bonds, [(i, j, x)], [(k, j, x)])
            if k != j and minus[k][x] > 0:
                yield "swap3", (i, j, x, i, k), _edit(p.bonds, [(i, j, x)], [(i, k, x)])
    if swap4:
        for (i, j, x, _), (k, l, y, _) in itertools.combinations(p.bonds, 2):
            if x == y and i != k and j != l:
                yield "swap4", (i, j, k, l, x), _edit(p.bonds, [(i, j, x), (k, l, x)], [(i, l, x), (k, j, x)])


def _split_options(p: BondPolymer):
    n = len(p.monomers)
    if n < 2:
        return
    for mask in range(1, 1 << (n - 1)):
        # slot n-1 always stays on the second side, so each bipartition appears once
        side = [(mask >> k) & 1 for k in range(n - 1)] + [0]
        if any(side[i] != side[j] for i, j, _, _ in p.bonds):
            continue
        a = [k for k in range(n) if side[k]]
        b = [k for k in range(n) if not side[k]]
        yield a, b


def _restrict(p: BondPolymer, slots: list[int]) -> BondPolymer:
    where = {s: k for k, s in enumerate(slots)}
    ms = [p.monomers[s] for s in slots]
    return BondPolymer(ms, [(where[i], where[j], x, k) for i, j, x, k in p.bonds if i in where])


def bond_neighbors(bc: BondConfiguration, mode: str = "all", swap4: bool = True) -> list[tuple[BondMove, BondConfiguration]]:
    """Every distinct configuration one move away.

    ``mode="no_break"`` drops breaks and makes.  Splits are offered only along
    cuts that no bond crosses.
    """
    if mode not in ("all", "no_break"):
        raise TBNError(f"unknown bond-model mode {mode!r}")
    out: dict[BondConfiguration, BondMove] = {}

    def offer(move, conf):
        if conf != bc and conf not in out:
            out[conf] = move

    ps = bc.polymers
    for a in range(len(ps)):
        for b in range(a + 1, len(ps)):
            p, q = ps[a], ps[b]
            shift = len(p.monomers)
            merged = BondPolymer(p.monomers + q.monomers,
                                 list(p.bonds) + [(i + shift, j + shift, x, k) for i, j, x, k in q.bonds])
            offer(BondMove("merge", (a, b)), _with(bc, (a, b), [merged]))
    seen_polymers = set()
    for a, p in enumerate(ps):
        if p in seen_polymers:
            continue
        seen_polymers.add(p)
        for kind, detail, bonds in _polymer_moves(p, mode == "all", swap4):
            offer(BondMove(kind, (a,), detail), _with(bc, (a,), [BondPolymer(p.monomers, bonds)]))
        for left, right in _split_options(p):
            offer(BondMove("split", (a,), tuple(left)), _with(bc, (a,), [_restrict(p, left), _restrict(p, right)]))
    return [(m, c) for c, m in out.items()]


@dataclass
class BondPath:
    configurations: list[BondConfiguration]
    moves: list[BondMove]

    def __len__(self):
        return len(self.configurations)

    @property
    def start(self) -> BondConfiguration:
        return self.configurations[0]

    @property
    def end(self) -> BondConfiguration:
        return self.configurations[-1]

    def height(self, w) -> Fraction:
        e0 = self.configurations[0].energy(w)
        return max(c.energy(w) for c in self.configurations) - e0

    def validate(self, mode: str = "all", swap4: bool = True) -> None:
        for a, b in zip(self.configurations, self.configurations[1:]):
            if all(c != b for _, c in bond_neighbors(a, mode, swap4)):
                raise TBNError("adjacent bond configurations are not one move apart")


def _check_size(bc: BondConfiguration, force: bool) -> None:
    if not force and bc.site_count() > MAX_SITES:
        raise TBNError(f"bond-aware search is limited to {MAX_SITES} sites; override with force=True (--force on the command line)")


def _check_tbn(tbn: TBN | None, *confs: BondConfiguration) -> None:
    if tbn is None:
        return
    for bc in confs:
        tbn.check(bc.simplify())


def bond_barrier(
    tbn: TBN | None,
    start: BondConfiguration,
    goal: BondConfiguration,
    w,
    mode: str = "all",
    budget: SearchBudget | None = None,
    swap4: bool = True,
    force: bool = False,
) -> BarrierResult:
    """Exact bond-aware barrier; ``mode="no_break"`` forbids makes and breaks."""
    w = as_w(w)
    _check_size(start, force)
    _check_tbn(tbn, start, goal)
    if start.simplify().monomers() != goal.simplify().monomers():
        raise TBNError("start and goal are over different monomers")
    out = bottleneck_search(
        start,
        lambda c: c == goal,
        lambda c: bond_neighbors(c, mode, swap4),
        lambda c: c.energy(w),
        lambda c: c.key,
        budget,
    )
    e0 = start.energy(w)
    if out.status == EXACT:
        return BarrierResult(out.bottleneck - e0, BondPath(out.states, out.moves), out.explored, mode, EXACT)
    if out.status == BUDGET:
        return BarrierResult(None, None, out.explored, mode, BUDGET, lower_bound=out.frontier_min - e0)
    return BarrierResult(None, None, out.explored, mode, UNREACHABLE)


def bond_barrier_map(start: BondConfiguration, w, mode: str = "all", swap4: bool = True,
                     force: bool = False) -> dict[BondConfiguration, Fraction]:
    """Bond-aware barrier from ``start`` to every reachable configuration."""
    w = as_w(w)
    _check_size(start, force)
    return bottleneck_map(start, lambda c: bond_neighbors(c, mode, swap4), lambda c: c.energy(w), lambda c: c.key)


def all_bond_configurations(tbn: TBN, force: bool = False) -> list[BondConfiguration]:
    """Every bond configuration of a small TBN, reached by exploring all moves."""
    start = BondConfiguration.from_configuration(tbn.all_singletons(), "none")
    _check_size(start, force)
    return sorted(bottleneck_map(start, lambda c: bond_neighbors(c), lambda c: Fraction(0), lambda c: c.key))


def automorphism_count(p: BondPolymer) -> int:
    """Number of slot permutations the canonicalizer searches for ``p``."""
    return math.prod(math.factorial(len(g)) for g in _group_ranges(p.monomers))
