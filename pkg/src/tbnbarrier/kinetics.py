"""Merge/split moves, paths and their heights, and the saturation machinery.

A configuration changes by merging two polymers into their union or by
splitting one polymer into two.  Merging incompatible polymers ("clean")
costs exactly +1 energy; merging compatible polymers ("bind") gains at least
w - 1.  ``bind_first_decompose`` and ``saturate_path`` are the constructive
versions of the facts that any merge chain can be reordered to do all bind
merges first, and that any path between saturated configurations can be
replaced by a saturated one at extra height at most ``max(0, 2 - w)``.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .model import Configuration, Monomer, Polymer, TBNError, as_w


class PathError(TBNError):
    """Adjacent configurations of a path are not one merge or split apart."""


class UnsupportedRegime(TBNError):
    pass


class MergeKind(enum.Enum):
    CLEAN = "clean"
    BIND = "bind"


@dataclass(frozen=True)
class Move:
    """One elementary step applied to a canonical configuration.

    ``merge``: ``indices`` is the pair (i, j), i < j, of polymers merged.
    ``split``: ``indices`` is (i,) and ``part`` the sub-multiset split off.
    """

    kind: str
    indices: tuple[int, ...]
    part: Polymer | None = None

    def __post_init__(self):
        if self.kind == "merge":
            if len(self.indices) != 2 or self.indices[0] >= self.indices[1] or self.part is not None:
                raise TBNError(f"malformed merge move {self}")
        elif self.kind == "split":
            if len(self.indices) != 1 or self.part is None:
                raise TBNError(f"malformed split move {self}")
        else:
            raise TBNError(f"unknown move kind {self.kind!r}")

    def to_json(self) -> dict:
        out = {"kind": self.kind, "indices": list(self.indices)}
        if self.part is not None:
            out["part"] = [m.display for m in self.part]
        return out


def _replace(c: Configuration, drop: Sequence[int], add: Iterable[Polymer]) -> Configuration:
    dropped = set(drop)
    return Configuration([p for k, p in enumerate(c.polymers) if k not in dropped] + list(add))


def _sub_multiset(whole: Polymer, part: Polymer) -> Polymer | None:
    rest = whole.counts()
    rest.subtract(part.counts())
    if any(v < 0 for v in rest.values()):
        return None
    remaining = list(rest.elements())
    return Polymer(remaining) if remaining else None


def apply_move(c: Configuration, move: Move) -> Configuration:
    if move.kind == "merge":
        i, j = move.indices
        if j >= len(c):
            raise TBNError(f"merge indices {move.indices} out of range")
        return _replace(c, (i, j), [c.polymers[i].union(c.polymers[j])])
    (i,) = move.indices
    if i >= len(c):
        raise TBNError(f"split index {i} out of range")
    rest = _sub_multiset(c.polymers[i], move.part)
    if rest is None:
        raise TBNError(f"split part {move.part} is not a proper sub-multiset of {c.polymers[i]}")
    return _replace(c, (i,), [move.part, rest])


def _index_of(c: Configuration, p: Polymer, avoid: int = -1) -> int:
    for k, q in enumerate(c.polymers):
        if k != avoid and q == p:
            return k
    raise TBNError(f"polymer {p} not found")


def invert_move(c: Configuration, move: Move) -> Move:
    """The move taking ``apply_move(c, move)`` back to ``c``."""
    result = apply_move(c, move)
    if move.kind == "merge":
        i, j = move.indices
        merged = c.polymers[i].union(c.polymers[j])
        return Move("split", (_index_of(result, merged),), c.polymers[i])
    (i,) = move.indices
    rest = _sub_multiset(c.polymers[i], move.part)
    a = _index_of(result, move.part)
    b = _index_of(result, rest, avoid=a)
    return Move("merge", tuple(sorted((a, b))))


def split_parts(p: Polymer) -> list[Polymer]:
    """Every way to split ``p`` in two, each unordered bipartition once.

    The split-off part is the side whose count vector is lexicographically
    smaller (over the polymer's sorted distinct monomer types).
    """
    counts = p.counts()
    types = sorted(counts)
    full = [counts[t] for t in types]
    parts = []
    for vec in product(*(range(k + 1) for k in full)):
        comp = tuple(k - v for k, v in zip(full, vec))
        if not any(vec) or not any(comp) or vec > comp:
            continue
        parts.append(Polymer([t for t, v in zip(types, vec) for _ in range(v)]))
    return parts


def neighbors(c: Configuration, mode: str = "all") -> list[tuple[Move, Configuration]]:
    """All configurations one merge or split away, deduplicated by result."""
    if mode not in ("all", "saturated_only"):
        raise TBNError(f"unknown neighbor mode {mode!r}")
    seen: dict[Configuration, Move] = {}
    ps = c.polymers
    for i, j in combinations(range(len(ps)), 2):
        nxt = _replace(c, (i, j), [ps[i].union(ps[j])])
        if nxt not in seen:
            seen[nxt] = Move("merge", (i, j))
    for i, p in enumerate(ps):
        if len(p) == 1 or (i and ps[i - 1] == p):
            continue
        for part in split_parts(p):
            rest = _sub_multiset(p, part)
            nxt = _replace(c, (i,), [part, rest])
            if nxt not in seen:
                seen[nxt] = Move("split", (i,), part)
    out = [(m, n) for n, m in seen.items()]
    if mode == "saturated_only":
        out = [(m, n) for m, n in out if n.saturated]
    return out


def infer_move(a: Configuration, b: Configuration) -> Move:
    """The unique merge or split taking ``a`` to ``b``; PathError otherwise."""
    ca, cb = Counter(a.polymers), Counter(b.polymers)
    gone = list((ca - cb).elements())
    new = list((cb - ca).elements())
    if len(gone) == 2 and len(new) == 1 and gone[0].union(gone[1]) == new[0]:
        i = _index_of(a, gone[0])
        j = _index_of(a, gone[1], avoid=i)
        return Move("merge", tuple(sorted((i, j))))
    if len(gone) == 1 and len(new) == 2 and new[0].union(new[1]) == gone[0]:
        part = min(split_parts(gone[0]), key=lambda q: q not in (new[0], new[1]))
        return Move("split", (_index_of(a, gone[0]),), part)
    raise PathError(f"{a} and {b} are not one merge or split apart")


class Path:
    """A nonempty sequence of configurations, each one move from the next."""

    __slots__ = ("configurations", "moves")

    def __init__(self, configurations: Sequence[Configuration], moves: Sequence[Move] | None = None):
        configurations = tuple(configurations)
        if not configurations:
            raise PathError("a path must contain at least one configuration")
        if moves is None:
            moves = tuple(infer_move(a, b) for a, b in zip(configurations, configurations[1:]))
        else:
            moves = tuple(moves)
            if len(moves) != len(configurations) - 1:
                raise PathError("need exactly one move per adjacent pair")
            for a, m, b in zip(configurations, moves, configurations[1:]):
                if apply_move(a, m) != b:
                    raise PathError(f"move {m} does not take {a} to {b}")
        self.configurations = configurations
        self.moves = moves

    def __len__(self):
        return len(self.configurations)

    def __iter__(self):
        return iter(self.configurations)

    def __getitem__(self, k):
        return self.configurations[k]

    def __eq__(self, other):
        return isinstance(other, Path) and self.configurations == other.configurations

    def __repr__(self):
        return f"Path({len(self.configurations)} configurations)"

    @property
    def start(self) -> Configuration:
        return self.configurations[0]

    @property
    def end(self) -> Configuration:
        return self.configurations[-1]

    def reversed(self) -> "Path":
        confs = self.configurations[::-1]
        moves = [invert_move(a, m) for a, m in zip(self.configurations, self.moves)][::-1]
        return Path(confs, moves)

    def concat(self, other: "Path") -> "Path":
        if self.end != other.start:
            raise PathError("paths do not meet")
        return Path(self.configurations + other.configurations[1:], self.moves + other.moves)

    def height(self, w) -> Fraction:
        return height(self, w)

    def is_saturated(self) -> bool:
        return all(c.saturated for c in self.configurations)


def height(path: Path, w) -> Fraction:
    """max over the path of E(config) - E(first config)."""
    w = as_w(w)
    e0 = path.start.energy(w)
    return max(c.energy(w) for c in path.configurations) - e0


def classify_merge(c: Configuration, move: Move) -> MergeKind:
    if move.kind != "merge":
        raise TBNError("classify_merge needs a merge move")
    i, j = move.indices
    if j >= len(c):
        raise TBNError(f"merge indices {move.indices} out of range")
    return MergeKind.BIND if c.polymers[i].compatible(c.polymers[j]) else MergeKind.CLEAN


# --- labelled partitions -------------------------------------------------
#
# Refinement between configurations is only well defined once monomer
# instances carry identities, so the constructions below work on partitions
# of instance ids and project back to canonical configurations at the end.

Block = frozenset
Labelled = frozenset  # frozenset of blocks


class _Instances:
    def __init__(self, monomers: Sequence[Monomer]):
        self.monomers = tuple(monomers)
        self._poly: dict[Block, Polymer] = {}

    def polymer(self, block: Block) -> Polymer:
        p = self._poly.get(block)
        if p is None:
            p = self._poly[block] = Polymer(self.monomers[i] for i in block)
        return p

    def project(self, lab: Labelled) -> Configuration:
        return Configuration(self.polymer(b) for b in lab)

    def block_key(self, block: Block):
        return (self.polymer(block).key, tuple(sorted(block)))


def _lift(c: Configuration) -> tuple[_Instances, Labelled]:
    monomers, blocks = [], []
    for p in c.polymers:
        ids = []
        for m in p.monomers:
            ids.append(len(monomers))
            monomers.append(m)
        blocks.append(frozenset(ids))
    return _Instances(monomers), frozenset(blocks)


def _take(inst: _Instances, block: Block, part: Polymer) -> Block:
    need = part.counts()
    chosen = []
    for i in sorted(block):
        m = inst.monomers[i]
        if need[m] > 0:
            need[m] -= 1
            chosen.append(i)
    if any(v > 0 for v in need.values()):
        raise TBNError("part is not contained in block")
    return frozenset(chosen)


def _find_block(inst: _Instances, lab: Labelled, p: Polymer, avoid=None) -> Block:
    for b in sorted(lab, key=inst.block_key):
        if b is not avoid and b != avoid and inst.polymer(b) == p:
            return b
    raise TBNError(f"no block holds {p}")


def _lift_path(path: Path) -> tuple[_Instances, list[Labelled]]:
    inst, lab = _lift(path.start)
    labs = [lab]
    for c, move in zip(path.configurations, path.moves):
        if move.kind == "merge":
            i, j = move.indices
            a = _find_block(inst, lab, c.polymers[i])
            b = _find_block(inst, lab, c.polymers[j], avoid=a)
            lab = (lab - {a, b}) | {a | b}
        else:
            (i,) = move.indices
            a = _find_block(inst, lab, c.polymers[i])
            part = _take(inst, a, move.part)
            lab = (lab - {a}) | {part, a - part}
        labs.append(lab)
    return inst, labs


def _refine_into(inst: _Instances, fine: Labelled, coarse: Labelled) -> dict[Block, list[Block]]:
    out: dict[Block, list[Block]] = {b: [] for b in coarse}
    owner = {i: b for b in coarse for i in b}
    for f in fine:
        homes = {owner[i] for i in f}
        if len(homes) != 1:
            raise TBNError("fine configuration does not refine coarse configuration")
        out[homes.pop()].append(f)
    return out


def _greedy_bind(inst: _Instances, fine: Labelled, coarse: Labelled) -> tuple[Labelled, list[Labelled]]:
    """Merge compatible pairs inside each coarse block until none remain.

    Returns the most-merged configuration and the labelled chain leading to it.
    Always merges the lexicographically smallest compatible pair.
    """
    groups = _refine_into(inst, fine, coarse)
    chain = [fine]
    current = set(fine)
    while True:
        best = None
        for members in groups.values():
            ordered = sorted(members, key=inst.block_key)
            for x, y in combinations(ordered, 2):
                if inst.polymer(x).compatible(inst.polymer(y)):
                    cand = (inst.block_key(x), inst.block_key(y), members, x, y)
                    if best is None or cand[:2] < best[:2]:
                        best = cand
                    break
        if best is None:
            return frozenset(current), chain
        _, _, members, x, y = best
        members.remove(x)
        members.remove(y)
        members.append(x | y)
        current -= {x, y}
        current.add(x | y)
        chain.append(frozenset(current))


def _split_chain(inst: _Instances, coarse: Labelled, fine: Labelled) -> list[Labelled]:
    """Splits from ``coarse`` down to its refinement ``fine``, one block at a time."""
    groups = _refine_into(inst, fine, coarse)
    chain = [coarse]
    current = set(coarse)
    for whole in sorted(groups, key=inst.block_key):
        pieces = sorted(groups[whole], key=inst.block_key)
        rest = whole
        for piece in pieces[:-1]:
            current.discard(rest)
            rest = rest - piece
            current |= {piece, rest}
            chain.append(frozenset(current))
    return chain


def _merge_chain(inst: _Instances, fine: Labelled, coarse: Labelled) -> list[Labelled]:
    return _split_chain(inst, coarse, fine)[::-1]


def _labelled_refinement(fine: Configuration, coarse: Configuration) -> tuple[_Instances, Labelled, Labelled]:
    """Label instances so that ``fine`` refines ``coarse``; TBNError if impossible."""
    if fine.monomers() != coarse.monomers():
        raise TBNError("configurations are over different monomers")
    fine_ps = sorted(fine.polymers, key=lambda p: (-len(p), p.key))
    caps = [p.counts() for p in coarse.polymers]
    assign = [0] * len(fine_ps)

    def place(k: int) -> bool:
        if k == len(fine_ps):
            return all(not +cap for cap in caps)
        need = fine_ps[k].counts()
        tried = set()
        for b, cap in enumerate(caps):
            sig = tuple(sorted(cap.items()))
            if sig in tried or any(cap[m] < v for m, v in need.items()):
                continue
            tried.add(sig)
            cap.subtract(need)
            assign[k] = b
            if place(k + 1):
                return True
            cap.update(need)
        return False

    if not place(0):
        raise TBNError("fine does not reach coarse by merges only")
    monomers: list[Monomer] = []
    coarse_blocks: list[list[int]] = [[] for _ in coarse.polymers]
    fine_blocks = []
    for p, b in zip(fine_ps, assign):
        ids = []
        for m in p.monomers:
            ids.append(len(monomers))
            monomers.append(m)
        coarse_blocks[b].extend(ids)
        fine_blocks.append(frozenset(ids))
    inst = _Instances(monomers)
    return inst, frozenset(fine_blocks), frozenset(frozenset(b) for b in coarse_blocks)


def bind_first_paths(fine: Configuration, coarse: Configuration) -> tuple[Path, Path]:
    """Paths fine -> mid (bind merges only) and mid -> coarse (clean merges only)."""
    inst, f, c = _labelled_refinement(fine, coarse)
    mid, chain = _greedy_bind(inst, f, c)
    clean = _merge_chain(inst, mid, c)
    return (Path([inst.project(x) for x in chain]), Path([inst.project(x) for x in clean]))


def bind_first_decompose(fine: Configuration, coarse: Configuration) -> Configuration:
    """A most-merged ``mid`` with fine ->bind*-> mid ->clean*-> coarse."""
    return bind_first_paths(fine, coarse)[0].end


def saturate_path(path: Path, w) -> Path:
    """Replace ``path`` by a saturated path with the same endpoints.

    Follows the step-by-step construction: keep a saturated alpha'_k obtained
    from alpha_k by bind merges; a split step is answered by clean splits of
    alpha'_k, a merge step by at most one merge followed by clean splits.
    The result has height at most ``height(path) + max(0, 2 - w)``.
    """
    w = as_w(w)
    if w < 1:
        raise UnsupportedRegime("path saturation needs bond strength w >= 1")
    if not (path.start.saturated and path.end.saturated):
        raise TBNError("path endpoints must be saturated")
    inst, labs = _lift_path(path)
    current = labs[0]
    out: list[Labelled] = [current]
    for k, (move, nxt) in enumerate(zip(path.moves, labs[1:])):
        prev = labs[k]
        if move.kind == "split":
            mid, _ = _greedy_bind(inst, nxt, current)
            out.extend(_split_chain(inst, current, mid)[1:])
            current = mid
            continue
        if current == prev:
            out.append(nxt)
            current = nxt
            continue
        (merged,) = nxt - prev
        touching = [b for b in current if b & merged]
        if len(touching) > 1:
            medium = (current - set(touching)) | {frozenset().union(*touching)}
            out.append(medium)
        else:
            medium = current
        mid, _ = _greedy_bind(inst, nxt, medium)
        out.extend(_split_chain(inst, medium, mid)[1:])
        current = mid
    if current != labs[-1]:
        # a saturated endpoint admits no bind merges, so this cannot happen
        raise AssertionError("saturated path did not end at the original endpoint")
    result = Path([inst.project(x) for x in out])
    assert result.is_saturated()
    return result
