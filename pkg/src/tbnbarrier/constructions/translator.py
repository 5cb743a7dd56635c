"""The (z, c) translator cycle and the offset bookkeeping behind its barrier.

Top monomer ``t_i`` holds the z+1 domains ``x_i .. x_{i+z}`` and bottom
monomer ``b_i`` the z starred domains ``x_i* .. x_{i+z-1}*`` (indices mod c).
Starred domains are limiting, so in every saturated configuration each bottom
sits with enough tops to bind it.  Initially ``b_i`` pairs with ``t_i``; in
the triggered configuration it pairs with ``t_{i-1}``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from ..kinetics import Path
from ..model import TBN, Configuration, Monomer, Polymer, SiteType, TBNError
from ._builder import PathBuilder


def _site(i: int, c: int, starred: bool = False) -> SiteType:
    return SiteType(f"x{i % c}", starred)


def top(i: int, z: int, c: int) -> Monomer:
    return Monomer(tuple(_site(i + k, c) for k in range(z + 1)), f"t{i % c}")


def bottom(i: int, z: int, c: int) -> Monomer:
    return Monomer(tuple(_site(i + k, c, True) for k in range(z)), f"b{i % c}")


@dataclass(frozen=True)
class TranslatorSpec:
    z: int
    c: int
    copies: Mapping[int, int] | None = None
    extra_catalysts: int = 0
    catalyst_index: int | None = None

    def __post_init__(self):
        if self.c < 2:
            raise TBNError("translator needs at least two complex types (c >= 2)")
        if not 1 <= self.z < self.c:
            raise TBNError("translator needs 1 <= z < c")
        if self.extra_catalysts < 0:
            raise TBNError("extra_catalysts must be nonnegative")
        for i, k in self.copy_counts().items():
            if k < 1:
                raise TBNError(f"each b_i needs at least one copy (b{i} has {k})")

    def copy_counts(self) -> dict[int, int]:
        counts = {i: 1 for i in range(self.c)}
        for i, k in (self.copies or {}).items():
            if not 0 <= i < self.c:
                raise TBNError(f"copy index {i} outside 0..{self.c - 1}")
            counts[i] = k
        return counts

    @property
    def catalyst(self) -> int:
        return (self.c - 1 if self.catalyst_index is None else self.catalyst_index) % self.c


@dataclass
class TranslatorNetwork:
    spec: TranslatorSpec
    tbn: TBN
    initial: Configuration
    triggered: Configuration | None
    tops: list[Monomer] = field(repr=False)
    bottoms: list[Monomer] = field(repr=False)

    def is_triggered(self, conf: Configuration) -> bool:
        """Saturated and holding a ``{b_i, t_{i-1}}`` polymer for every i."""
        if not conf.saturated:
            return False
        c = self.spec.c
        have = set(conf.polymers)
        return all(Polymer((self.bottoms[i], self.tops[(i - 1) % c])) in have for i in range(c))

    @property
    def configurations(self) -> dict[str, Configuration]:
        out = {"initial": self.initial}
        if self.triggered is not None:
            out["triggered"] = self.triggered
        return out


def gen_translator(spec: TranslatorSpec) -> TranslatorNetwork:
    z, c = spec.z, spec.c
    tops = [top(i, z, c) for i in range(c)]
    bottoms = [bottom(i, z, c) for i in range(c)]
    copies = spec.copy_counts()
    counts: Counter = Counter()
    for i in range(c):
        counts[tops[i]] += copies[i]
        counts[bottoms[i]] += copies[i]
    counts[tops[spec.catalyst]] += spec.extra_catalysts
    tbn = TBN(counts)
    extras = [[tops[spec.catalyst]] for _ in range(spec.extra_catalysts)]

    initial = Configuration([[bottoms[i], tops[i]] for i in range(c) for _ in range(copies[i])] + extras)
    triggered = None
    if len(set(copies.values())) == 1:
        triggered = Configuration(
            [[bottoms[i], tops[(i - 1) % c]] for i in range(c) for _ in range(copies[i])] + extras
        )
    return TranslatorNetwork(spec, tbn, tbn.check(initial), triggered and tbn.check(triggered), tops, bottoms)


def translator_catalyzed_path(net: TranslatorNetwork) -> Path:
    """Height-1 path from initial to triggered driven by one free top monomer.

    The free ``t_k`` joins ``{b_{k+1}, t_{k+1}}`` and displaces ``t_{k+1}``,
    which then does the same one complex further round the cycle.  After c
    displacements a copy of ``t_k`` is free again.
    """
    spec = net.spec
    if spec.extra_catalysts < 1:
        raise TBNError("catalyzed path needs at least one extra top monomer")
    if net.triggered is None:
        raise TBNError("catalyzed path needs equal copy counts")
    c, k = spec.c, spec.catalyst
    copies = spec.copy_counts()
    polymers: dict[str, list[Monomer]] = {}
    for i in range(c):
        for r in range(copies[i]):
            polymers[f"pair{i}.{r}"] = [net.bottoms[i], net.tops[i]]
    for r in range(spec.extra_catalysts):
        polymers[f"cat{r}"] = [net.tops[k]]
    b = PathBuilder(polymers)
    free = "cat0"
    for step in range(1, c + 1):
        i = (k + step) % c
        b.merge(f"pair{i}.0", free)
        free = f"free{i}"
        b.split(f"pair{i}.0", [net.tops[i]], free)
    # any extra copies are triggered by repeating the cascade with the freed top
    for r in range(1, max(copies.values())):
        for step in range(1, c + 1):
            i = (k + step) % c
            if r < copies[i]:
                b.merge(f"pair{i}.{r}", free)
                nxt = f"free{i}.{r}"
                b.split(f"pair{i}.{r}", [net.tops[i]], nxt)
                free = nxt
    path = b.path()
    if path.end != net.triggered:
        raise AssertionError("catalyzed cascade did not reach the triggered configuration")
    return path


def translator_cheat_path(net: TranslatorNetwork) -> Path:
    """Uncatalyzed saturated path of height about 2c/z (needs z | c, single copies).

    c/z complexes with disjoint starred domains merge into one polymer that
    holds every starred domain once.  The remaining complexes pass through it
    one batch of c/z at a time, each batch leaving as triggered complexes, and
    the big polymer finally dissolves into triggered complexes as well.
    """
    spec = net.spec
    z, c = spec.z, spec.c
    if c % z:
        raise TBNError("cheat path needs z to divide c")
    if spec.extra_catalysts or any(v != 1 for v in spec.copy_counts().values()):
        raise TBNError("cheat path is defined for single copies without catalysts")
    t, bt = net.tops, net.bottoms
    b = PathBuilder({f"pair{i}": [bt[i], t[i]] for i in range(c)})
    stride = range(0, c, z)
    hub = "pair0"
    for i in stride[1:]:
        b.merge(hub, f"pair{i}")
    for r in range(1, z):
        for i in stride:
            b.merge(hub, f"pair{i + r}")
        for i in stride:
            b.split(hub, [bt[i + r], t[i + r - 1]], f"trig{i + r}")
    for i in list(stride)[:-1]:
        b.split(hub, [bt[i], t[(i - 1) % c]], f"trig{i}")
    path = b.path()
    if path.end != net.triggered:
        raise AssertionError("cheat path did not reach the triggered configuration")
    return path


# --- offsets for the (n, n^2) translator -------------------------------------

def n_prime(n: int) -> Fraction:
    return Fraction(2 * n * n, 2 * n + 1)


def pair_compatible(i: int, j: int, n: int) -> bool:
    """b_i and t_j share a domain iff j lies in [i-n, i+n-1] mod n^2."""
    return (j - i + n) % (n * n) < 2 * n


def pair_offset(i: int, j: int, n: int) -> int:
    """Offset of the pair (b_i, t_j): position of j minus position of i in [i-n, i+n-1]."""
    if not pair_compatible(i, j, n):
        raise TBNError(f"b{i} and t{j} are not compatible")
    return (j - i + n) % (n * n) - n


def perfect_matching(bottoms: list[int], tops: list[int], n: int) -> list[tuple[int, int]] | None:
    """Augmenting-path matching of bottom instances to compatible top instances.

    Returns pairs of (bottom index, top index) or None if no perfect matching.
    """
    if len(bottoms) != len(tops):
        return None
    match_top: list[int | None] = [None] * len(tops)

    def augment(u: int, seen: set[int]) -> bool:
        for v, tj in enumerate(tops):
            if v in seen or not pair_compatible(bottoms[u], tj, n):
                continue
            seen.add(v)
            if match_top[v] is None or augment(match_top[v], seen):
                match_top[v] = u
                return True
        return False

    for u in range(len(bottoms)):
        if not augment(u, set()):
            return None
    return sorted((bottoms[u], tops[v]) for v, u in enumerate(match_top))


def all_perfect_matchings(bottoms: list[int], tops: list[int], n: int):
    """Every perfect matching, as sorted pair lists (instances with equal index collapse)."""
    seen = set()

    def rec(k: int, free: tuple[int, ...], acc: list):
        if k == len(bottoms):
            key = tuple(sorted(acc))
            if key not in seen:
                seen.add(key)
                yield list(key)
            return
        for pos, v in enumerate(free):
            if pair_compatible(bottoms[k], tops[v], n):
                yield from rec(k + 1, free[:pos] + free[pos + 1:], acc + [(bottoms[k], tops[v])])

    yield from rec(0, tuple(range(len(tops))), [])


def find_cutoff(bottoms: list[int], n: int) -> int | None:
    """A top index compatible with no bottom of the polymer, if one exists."""
    for cp in range(n * n):
        if not any(pair_compatible(i, cp, n) for i in bottoms):
            return cp
    return None


def sort_matching(matching: list[tuple[int, int]], cutoff: int, n: int) -> list[tuple[int, int]]:
    """Uncross the matching with respect to the order [cutoff, cutoff-1] mod n^2."""
    pos = lambda x: (x - cutoff) % (n * n)  # noqa: E731
    pairs = sorted(matching, key=lambda p: pos(p[0]))
    changed = True
    while changed:
        changed = False
        for a in range(len(pairs)):
            for b in range(a + 1, len(pairs)):
                (i1, j2), (i2, j1) = pairs[a], pairs[b]
                if pos(i1) <= pos(i2) and pos(j1) < pos(j2):
                    if not (pair_compatible(i1, j1, n) and pair_compatible(i2, j2, n)):
                        raise TBNError("uncrossing produced an incompatible pair")
                    pairs[a], pairs[b] = (i1, j1), (i2, j2)
                    changed = True
    return sorted(pairs, key=lambda p: pos(p[0]))


@dataclass(frozen=True)
class OffsetDiagnostics:
    polymer_offset: int
    cutoff: int | None
    matching: tuple[tuple[int, int], ...]
    pair_offsets: tuple[int, ...]
    sorted_matching: bool


@lru_cache(maxsize=None)
def _index_table(n: int) -> dict[Monomer, tuple[str, int]]:
    c = n * n
    table = {top(i, n, c): ("t", i) for i in range(c)}
    table.update({bottom(i, n, c): ("b", i) for i in range(c)})
    return table


def _indices(p: Polymer, n: int) -> tuple[list[int], list[int]]:
    table = _index_table(n)
    tops_, bots = [], []
    for m in p.monomers:
        if m not in table:
            raise TBNError(f"{m.display} is not a monomer of the ({n}, {n * n})-translator")
        kind, i = table[m]
        (tops_ if kind == "t" else bots).append(i)
    return bots, tops_


def is_normal_form(p: Polymer, n: int) -> bool:
    bots, tops_ = _indices(p, n)
    return len(bots) == len(tops_)


def offset_diagnostics(p: Polymer, n: int, strict: bool = True) -> OffsetDiagnostics:
    """Perfect matching, cutoff, sorted matching and offset of a normal-form polymer.

    With ``strict`` the polymer must be smaller than 2n^2/(2n+1); otherwise the
    offset of an arbitrary perfect matching is reported and the cutoff and
    sorting are skipped when no cutoff exists.
    """
    bots, tops_ = _indices(p, n)
    if len(bots) != len(tops_):
        raise TBNError("polymer is not normal form")
    if strict and not len(p) < n_prime(n):
        raise TBNError(f"polymer of size {len(p)} is not smaller than n' = {n_prime(n)}")
    matching = perfect_matching(bots, tops_, n)
    if matching is None:
        raise TBNError("no perfect matching between bottoms and tops")
    cutoff = find_cutoff(bots, n)
    if cutoff is None and strict:
        raise TBNError("no cutoff exists; polymer too large")
    is_sorted = False
    if cutoff is not None:
        matching = sort_matching(matching, cutoff, n)
        is_sorted = True
    offsets = tuple(pair_offset(i, j, n) for i, j in matching)
    return OffsetDiagnostics(sum(offsets), cutoff, tuple(matching), offsets, is_sorted)


def configuration_offset(conf: Configuration, n: int, strict: bool = False) -> int:
    return sum(offset_diagnostics(p, n, strict).polymer_offset for p in conf.polymers)


@dataclass(frozen=True)
class ExposedSizeReport:
    exposed: int
    size: int

    @property
    def holds(self) -> bool:
        return self.size == 2 * self.exposed


def exposed_size_check(p: Polymer, n: int | None = None) -> ExposedSizeReport:
    """Exposed-site count of a normal-form polymer with no exposed starred sites.

    In a saturated configuration such a polymer has size exactly twice its
    number of exposed sites.
    """
    tops_ = sum(1 for m in p.monomers if not m.sites[0].starred)
    bots = len(p) - tops_
    if tops_ != bots:
        raise TBNError("polymer is not normal form")
    if any(d < 0 for d in p.net.values()):
        raise TBNError("polymer has exposed starred sites, so it cannot be in a saturated configuration")
    return ExposedSizeReport(sum(p.net.values()), len(p))
