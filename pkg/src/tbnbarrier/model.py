"""Sites, monomers, polymers and configurations of a thermodynamic binding network.

Everything here is an immutable value. Polymers and configurations are stored
in sorted order, so two configurations that are equal as multisets of monomer
multisets compare (and hash) equal; swapping two monomers of the same type
between polymers never produces a new configuration.

Bonds are never tracked explicitly at this level. A polymer is assumed to be
maximally bonded, so per site name it holds ``min(#x, #x*)`` bonds.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping

_NAME_RE = re.compile(r"^[^\s*{}:;|,#]+$")


class TBNError(ValueError):
    """Raised for malformed networks, configurations or arguments."""


def as_w(value) -> Fraction:
    """Coerce a bond strength to an exact nonnegative rational.

    Accepts ints, Fractions and strings such as ``"2"`` or ``"3/2"``.
    Floats and decimal strings are rejected so that ties stay exact.
    """
    if isinstance(value, bool):
        raise TBNError("bond strength must be a rational, not a bool")
    if isinstance(value, Fraction):
        w = value
    elif isinstance(value, int):
        w = Fraction(value)
    elif isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"\d+(/\d+)?", text):
            raise TBNError(f"bond strength {value!r} is not an exact fraction like '2' or '3/2'")
        num, _, den = text.partition("/")
        if den and int(den) == 0:
            raise TBNError("bond strength denominator must be positive")
        w = Fraction(int(num), int(den) if den else 1)
    else:
        raise TBNError(f"bond strength must be int, Fraction or str, got {type(value).__name__}")
    if w < 0:
        raise TBNError("bond strength must be nonnegative")
    return w


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True)
class SiteType:
    name: str
    starred: bool = False

    def __post_init__(self):
        if not isinstance(self.name, str) or not _NAME_RE.match(self.name):
            raise TBNError(f"invalid site name {self.name!r}")

    @classmethod
    def parse(cls, token: str) -> "SiteType":
        token = token.strip()
        if token.endswith("*"):
            return cls(token[:-1], True)
        return cls(token, False)

    def complement(self) -> "SiteType":
        return SiteType(self.name, not self.starred)

    def bonds_with(self, other: "SiteType") -> bool:
        return self.name == other.name and self.starred != other.starred

    def __str__(self):
        return self.name + ("*" if self.starred else "")


@dataclass(frozen=True)
class Monomer:
    """A multiset of site types. ``label`` is display-only and ignored by equality."""

    sites: tuple[SiteType, ...]
    label: str | None = field(default=None, compare=False)
    key: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sites = tuple(sorted(SiteType.parse(s) if isinstance(s, str) else s for s in self.sites))
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "key", " ".join(str(s) for s in sites))

    @classmethod
    def of(cls, spec: str, label: str | None = None) -> "Monomer":
        """``Monomer.of("a a* b")``"""
        return cls(tuple(SiteType.parse(t) for t in spec.split()), label)

    def __eq__(self, other):
        return isinstance(other, Monomer) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    def __len__(self):
        return len(self.sites)

    @cached_property
    def net(self) -> dict[str, int]:
        """Per site name: (#unstarred - #starred)."""
        net: dict[str, int] = {}
        for s in self.sites:
            net[s.name] = net.get(s.name, 0) + (-1 if s.starred else 1)
        return net

    @property
    def display(self) -> str:
        return self.label if self.label is not None else "{" + self.key + "}"

    def __str__(self):
        return self.display


def _net_and_bonds(monomers: Iterable[Monomer]) -> tuple[dict[str, int], int]:
    plus: Counter = Counter()
    minus: Counter = Counter()
    for m in monomers:
        for s in m.sites:
            if s.starred:
                minus[s.name] += 1
            else:
                plus[s.name] += 1
    bonds = 0
    net = {}
    for name in plus.keys() | minus.keys():
        bonds += min(plus[name], minus[name])
        d = plus[name] - minus[name]
        if d:
            net[name] = d
    return net, bonds


class Polymer:
    """A nonempty multiset of monomers, kept sorted."""

    __slots__ = ("monomers", "key", "_hash", "_net", "_bonds")

    def __init__(self, monomers: Iterable[Monomer]):
        ms = tuple(sorted(monomers))
        if not ms:
            raise TBNError("a polymer must contain at least one monomer")
        self.monomers = ms
        self.key = tuple(m.key for m in ms)
        self._hash = hash(self.key)
        self._net = None
        self._bonds = None

    def __eq__(self, other):
        return isinstance(other, Polymer) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __len__(self):
        return len(self.monomers)

    def __iter__(self) -> Iterator[Monomer]:
        return iter(self.monomers)

    def __repr__(self):
        return "Polymer([" + ", ".join(m.display for m in self.monomers) + "])"

    def __str__(self):
        return "{" + " ".join(m.display for m in self.monomers) + "}"

    def _compute(self):
        self._net, self._bonds = _net_and_bonds(self.monomers)

    @property
    def net(self) -> dict[str, int]:
        """Per site name: exposed unstarred (positive) or starred (negative) count."""
        if self._net is None:
            self._compute()
        return self._net

    @property
    def bond_count(self) -> int:
        if self._bonds is None:
            self._compute()
        return self._bonds

    @property
    def site_count(self) -> int:
        return sum(len(m) for m in self.monomers)

    def exposed_sites(self) -> Counter:
        return Counter({SiteType(n, d < 0): abs(d) for n, d in self.net.items()})

    def compatible(self, other: "Polymer") -> bool:
        a, b = self.net, other.net
        if len(b) < len(a):
            a, b = b, a
        for name, d in a.items():
            e = b.get(name)
            if e is not None and (d > 0) != (e > 0):
                return True
        return False

    def counts(self) -> Counter:
        return Counter(self.monomers)

    def union(self, other: "Polymer") -> "Polymer":
        return Polymer(self.monomers + other.monomers)


def exposed_sites(p: Polymer) -> Counter:
    """Sites left after removing as many complementary pairs as possible."""
    return p.exposed_sites()


def bond_count(p: Polymer) -> int:
    return p.bond_count


def compatible(p: Polymer, q: Polymer) -> bool:
    return p.compatible(q)


@dataclass(frozen=True)
class Energy:
    """Bond count ``H`` and polymer count ``S``; evaluates to ``-w*H - S``."""

    bonds: int
    polymer_count: int

    def value(self, w) -> Fraction:
        return -as_w(w) * self.bonds - self.polymer_count


class Configuration:
    """A partition of a network's monomers into polymers, stored canonically."""

    __slots__ = ("polymers", "key", "_hash", "_bonds", "_sat")

    def __init__(self, polymers: Iterable[Polymer | Iterable[Monomer]]):
        ps = tuple(sorted(p if isinstance(p, Polymer) else Polymer(p) for p in polymers))
        if not ps:
            raise TBNError("a configuration must contain at least one polymer")
        self.polymers = ps
        self.key = tuple(p.key for p in ps)
        self._hash = hash(self.key)
        self._bonds = None
        self._sat = None

    @classmethod
    def singletons(cls, monomers: Iterable[Monomer]) -> "Configuration":
        return cls(Polymer((m,)) for m in monomers)

    def __eq__(self, other):
        return isinstance(other, Configuration) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.key < other.key

    def __len__(self):
        return len(self.polymers)

    def __iter__(self) -> Iterator[Polymer]:
        return iter(self.polymers)

    def __repr__(self):
        return "Configuration(" + " ".join(str(p) for p in self.polymers) + ")"

    __str__ = __repr__

    @property
    def bonds(self) -> int:
        if self._bonds is None:
            self._bonds = sum(p.bond_count for p in self.polymers)
        return self._bonds

    @property
    def polymer_count(self) -> int:
        return len(self.polymers)

    @property
    def monomer_count(self) -> int:
        return sum(len(p) for p in self.polymers)

    def monomers(self) -> Counter:
        total: Counter = Counter()
        for p in self.polymers:
            total.update(p.monomers)
        return total

    def energy_pair(self) -> Energy:
        return Energy(self.bonds, self.polymer_count)

    def energy(self, w) -> Fraction:
        return -as_w(w) * self.bonds - self.polymer_count

    @property
    def saturated(self) -> bool:
        if self._sat is None:
            # a name exposed unstarred in one polymer and starred in another
            # is exactly a compatible pair
            signs: dict[str, int] = {}
            sat = True
            for p in self.polymers:
                for name, d in p.net.items():
                    bit = 1 if d > 0 else 2
                    seen = signs.get(name, 0)
                    if seen and seen != bit:
                        sat = False
                        break
                    signs[name] = seen | bit
                if not sat:
                    break
            self._sat = sat
        return self._sat

    def canonical_key(self) -> str:
        return canonicalize(self)


def is_saturated(c: Configuration) -> bool:
    return c.saturated


def energy(c: Configuration, w) -> Fraction:
    return c.energy(w)


def canonicalize(c: Configuration) -> str:
    """Deterministic string key; equal iff the configurations are equal."""
    return " | ".join(";".join(p.key) for p in c.polymers)


class TBN:
    """A multiset of monomer types, stored as monomer -> count."""

    __slots__ = ("counts", "types", "_key")

    def __init__(self, monomers: Mapping[Monomer, int] | Iterable[Monomer]):
        if isinstance(monomers, Mapping):
            counts = Counter(monomers)
        else:
            counts = Counter(monomers)
        for m, k in counts.items():
            if not isinstance(m, Monomer):
                raise TBNError(f"not a monomer: {m!r}")
            if k <= 0:
                raise TBNError(f"monomer {m.display} has nonpositive count {k}")
        if not counts:
            raise TBNError("a TBN must contain at least one monomer")
        # keep the labelled instance of each type
        labelled = {}
        for m in (monomers.keys() if isinstance(monomers, Mapping) else monomers):
            if m not in labelled or (labelled[m].label is None and m.label is not None):
                labelled[m] = m
        self.counts = {labelled[m]: counts[m] for m in sorted(counts)}
        self.types = tuple(self.counts)
        self._key = tuple((m.key, k) for m, k in self.counts.items())

    def __eq__(self, other):
        return isinstance(other, TBN) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "TBN(" + ", ".join(f"{k}x{m.display}" for m, k in self.counts.items()) + ")"

    def __len__(self):
        return sum(self.counts.values())

    def monomers(self) -> list[Monomer]:
        """All monomer instances, sorted by type."""
        return [m for m, k in self.counts.items() for _ in range(k)]

    def site_names(self) -> set[str]:
        return {s.name for m in self.types for s in m.sites}

    def all_singletons(self) -> Configuration:
        return Configuration.singletons(self.monomers())

    def max_bonds(self) -> int:
        return Polymer(self.monomers()).bond_count

    def contains(self, c: Configuration) -> bool:
        return c.monomers() == Counter(self.counts)

    def check(self, c: Configuration) -> Configuration:
        if not self.contains(c):
            raise TBNError("configuration is not a partition of this TBN's monomers")
        return c

    def lookup(self, m: Monomer) -> Monomer:
        """The labelled representative of ``m``'s type."""
        for t in self.types:
            if t == m:
                return t
        raise TBNError(f"monomer {m.display} not in TBN")

    def configuration(self, polymers: Iterable[Iterable[Monomer]]) -> Configuration:
        return self.check(Configuration(polymers))
