"""Plain-text TBN documents.

One declaration per line; ``#`` starts a comment::

    w: 2
    G: 11* 12* 21* 22*
    H1: 11 12
    2 x V1: 11 21
    conf base: {G H1} {V1} {V1}

A monomer line is ``[N x] [name:] site site ...`` with a trailing ``*`` for a
starred site.  ``conf NAME: {..} {..}`` lists the polymers of a named
configuration by monomer name; it must use every declared monomer exactly as
often as its count.  ``w: R`` sets a default bond strength.  The names ``w``
and ``conf`` are reserved.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .model import TBN, Configuration, Monomer, Polymer, SiteType, TBNError, as_w

_TOKEN = re.compile(r"\S+")
_NAME = re.compile(r"^[^\s*{}:;|,#]+$")
_RESERVED = {"w", "conf"}


class TBNParseError(TBNError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class TbnDocument:
    """Named monomer declarations, named configurations and an optional w."""

    monomers: dict[str, tuple[Monomer, int]]
    configurations: dict[str, Configuration] = field(default_factory=dict)
    w: Fraction | None = None

    @property
    def tbn(self) -> TBN:
        return TBN({m: k for m, k in self.monomers.values()})

    def name_of(self, m: Monomer) -> str:
        for name, (mm, _) in self.monomers.items():
            if mm == m:
                return name
        raise TBNError(f"monomer {m.display} is not declared in this document")

    def conf(self, name: str) -> Configuration:
        try:
            return self.configurations[name]
        except KeyError:
            known = ", ".join(sorted(self.configurations)) or "none"
            raise TBNError(f"no configuration named {name!r} (known: {known})") from None

    def parse_configuration(self, text: str) -> Configuration:
        """Parse ``{m1 m2} {m3}`` against this document's monomer names."""
        return _parse_polymers(text, self, 1, 1)

    def format_configuration(self, c: Configuration) -> str:
        names = {m.key: n for n, (m, _) in self.monomers.items()}
        return " ".join("{" + " ".join(names[m.key] for m in p.monomers) + "}" for p in c.polymers)

    def __eq__(self, other):
        if not isinstance(other, TbnDocument):
            return NotImplemented
        mine = {n: (m.key, k) for n, (m, k) in self.monomers.items()}
        theirs = {n: (m.key, k) for n, (m, k) in other.monomers.items()}
        return mine == theirs and self.configurations == other.configurations and self.w == other.w

    @classmethod
    def from_tbn(cls, tbn: TBN, configurations: Mapping[str, Configuration] | None = None,
                 w=None) -> "TbnDocument":
        """Name every monomer type by its label, or ``m1, m2, ...`` if unlabelled or clashing."""
        monomers: dict[str, tuple[Monomer, int]] = {}
        k = 0
        for m, count in tbn.counts.items():
            name = m.label
            if name is None or not _NAME.match(name) or name in _RESERVED or name in monomers:
                k += 1
                name = f"m{k}"
                while name in monomers:
                    k += 1
                    name = f"m{k}"
            monomers[name] = (Monomer(m.sites, name), count)
        doc = cls(monomers, {}, None if w is None else as_w(w))
        for name, c in (configurations or {}).items():
            doc.configurations[name] = _relabel(doc, tbn.check(c))
        return doc


def _relabel(doc: TbnDocument, c: Configuration) -> Configuration:
    by_key = {m.key: m for m, _ in doc.monomers.values()}
    return Configuration([by_key[m.key] for m in p.monomers] for p in c.polymers)


def _tokens(line: str):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _parse_polymers(text: str, doc: TbnDocument, lineno: int, offset: int) -> Configuration:
    polymers, current, open_col = [], None, None
    pos = 0
    for m in re.finditer(r"\{|\}|[^\s{}]+", text):
        tok, col = m.group(), m.start() + offset
        pos = m.end()
        if tok == "{":
            if current is not None:
                raise TBNParseError("nested '{'", lineno, col)
            current, open_col = [], col
        elif tok == "}":
            if current is None:
                raise TBNParseError("'}' without matching '{'", lineno, col)
            if not current:
                raise TBNParseError("empty polymer '{}'", lineno, col)
            polymers.append(current)
            current = None
        else:
            if current is None:
                raise TBNParseError(f"monomer name {tok!r} outside braces", lineno, col)
            if tok not in doc.monomers:
                raise TBNParseError(f"unknown monomer {tok!r}", lineno, col)
            current.append(doc.monomers[tok][0])
    if current is not None:
        raise TBNParseError("unclosed '{'", lineno, open_col)
    if not polymers:
        raise TBNParseError("configuration lists no polymers", lineno, offset + pos)
    conf = Configuration(polymers)
    want = Counter({m: k for m, k in doc.monomers.values()})
    if conf.monomers() != want:
        have = conf.monomers()
        diff = []
        for m in sorted(set(want) | set(have)):
            if want[m] != have[m]:
                diff.append(f"{doc.name_of(m)} used {have[m]} times, declared {want[m]}")
        raise TBNParseError("configuration is not a partition of the monomers: " + "; ".join(diff), lineno, offset)
    return conf


def parse_tbn(text: str) -> TbnDocument:
    """Parse a TBN document; errors carry line and column numbers."""
    doc = TbnDocument({})
    by_type: dict[str, str] = {}
    unnamed = 0
    pending_confs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        first, col0 = toks[0]
        if first == "w:":
            if len(toks) != 2:
                raise TBNParseError("expected 'w: R' with one exact fraction", lineno, col0)
            if doc.w is not None:
                raise TBNParseError("bond strength given twice", lineno, col0)
            try:
                doc.w = as_w(toks[1][0])
            except TBNError as e:
                raise TBNParseError(str(e), lineno, toks[1][1]) from None
            continue
        if first == "conf":
            m = re.match(r"\s*conf\s+([^\s:]+)\s*:", line)
            if not m:
                raise TBNParseError("expected 'conf NAME: {..} {..}'", lineno, col0)
            name = m.group(1)
            if not _NAME.match(name):
                raise TBNParseError(f"invalid configuration name {name!r}", lineno, m.start(1) + 1)
            if name in doc.configurations or any(p[0] == name for p in pending_confs):
                raise TBNParseError(f"configuration {name!r} defined twice", lineno, m.start(1) + 1)
            pending_confs.append((name, line[m.end():], lineno, m.end() + 1))
            continue
        count, k = 1, 0
        if len(toks) >= 2 and re.fullmatch(r"\d+", first) and toks[1][0] == "x":
            count = int(first)
            if count <= 0:
                raise TBNParseError("monomer count must be positive", lineno, col0)
            k = 2
        name = None
        if k < len(toks) and toks[k][0].endswith(":"):
            name, ncol = toks[k][0][:-1], toks[k][1]
            if not _NAME.match(name or ""):
                raise TBNParseError(f"invalid monomer name {name!r}", lineno, ncol)
            if name in _RESERVED:
                raise TBNParseError(f"{name!r} is a reserved word", lineno, ncol)
            if name in doc.monomers:
                raise TBNParseError(f"monomer {name!r} declared twice", lineno, ncol)
            k += 1
        sites = []
        for tok, col in toks[k:]:
            try:
                s = SiteType.parse(tok)
            except TBNError:
                raise TBNParseError(f"invalid site {tok!r}", lineno, col) from None
            if tok.count("*") > 1 or not s.name:
                raise TBNParseError(f"invalid site {tok!r}", lineno, col)
            sites.append(s)
        if not sites:
            raise TBNParseError("monomer has no sites", lineno, col0)
        if name is None:
            unnamed += 1
            name = f"m{unnamed}"
            while name in doc.monomers:
                unnamed += 1
                name = f"m{unnamed}"
        mono = Monomer(tuple(sites), name)
        if mono.key in by_type:
            raise TBNParseError(
                f"monomer {name!r} has the same sites as {by_type[mono.key]!r}; use a count prefix instead",
                lineno, col0)
        by_type[mono.key] = name
        doc.monomers[name] = (mono, count)
    if not doc.monomers:
        raise TBNParseError("document declares no monomers", 1, 1)
    for name, body, lineno, col in pending_confs:
        doc.configurations[name] = _parse_polymers(body, doc, lineno, col)
    return doc


def render_tbn(doc: TbnDocument) -> str:
    lines = []
    if doc.w is not None:
        lines.append(f"w: {doc.w}")
    for name, (m, k) in doc.monomers.items():
        prefix = f"{k} x " if k != 1 else ""
        lines.append(f"{prefix}{name}: {m.key}")
    for name, c in doc.configurations.items():
        lines.append(f"conf {name}: {doc.format_configuration(c)}")
    return "\n".join(lines) + "\n"


def document_for(tbn: TBN, configurations: Mapping[str, Configuration] | None = None, w=None) -> TbnDocument:
    return TbnDocument.from_tbn(tbn, configurations, w)
