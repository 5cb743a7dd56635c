"""Exact barrier search and stability certification.

The barrier from ``start`` to ``goal`` is the least, over all paths, of the
largest energy excess ``E(x) - E(start)`` met along the path.  Composing by
``max`` is monotone, so a Dijkstra-style best-first search keyed by the
bottleneck value finalizes each state optimally the first time it is popped.
"""
from __future__ import annotations

import heapq
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Generic, Hashable, Iterable, Iterator, TypeVar

from .kinetics import Path, neighbors, split_parts, _sub_multiset, _replace
from .model import TBN, Configuration, Polymer, TBNError, as_w

S = TypeVar("S", bound=Hashable)

EXACT = "exact"
UNREACHABLE = "unreachable"
BUDGET = "budget_exhausted"


@dataclass(frozen=True)
class SearchBudget:
    max_states: int | None = None
    max_polymer_size: int | None = None
    timeout: float | None = None


@dataclass
class BarrierResult:
    barrier: Fraction | None
    witness: object | None
    explored: int
    mode: str
    status: str = EXACT
    lower_bound: Fraction | None = None
    upper_bound_only: bool = False

    @property
    def reachable(self) -> bool:
        return self.status != UNREACHABLE

    @property
    def budget_hit(self) -> bool:
        return self.status == BUDGET


@dataclass
class StabilityResult:
    max_S: int
    stable_configurations: list[Configuration]
    min_energy: Fraction
    explored: int
    complete: bool = True
    # certified bounds on max_S when the budget ran out
    bounds: tuple[int, int] | None = None


@dataclass
class _Outcome(Generic[S]):
    status: str
    bottleneck: Fraction | None
    states: list[S] = field(default_factory=list)
    moves: list = field(default_factory=list)
    explored: int = 0
    frontier_min: Fraction | None = None


def bottleneck_search(
    start: S,
    is_goal: Callable[[S], bool],
    expand: Callable[[S], Iterable[tuple[object, S]]],
    energy: Callable[[S], Fraction],
    sort_key: Callable[[S], object],
    budget: SearchBudget | None = None,
) -> _Outcome[S]:
    """Minimize the maximum energy along a path from ``start`` to a goal state.

    Priority is (bottleneck, moves so far, sort_key); the witness is rebuilt
    from parent links.
    """
    budget = budget or SearchBudget()
    deadline = None if budget.timeout is None else time.monotonic() + budget.timeout
    e0 = energy(start)
    best: dict[S, tuple[Fraction, int]] = {start: (e0, 0)}
    parent: dict[S, tuple[S, object] | None] = {start: None}
    done: set[S] = set()
    heap = [(e0, 0, sort_key(start), start)]
    explored = 0
    while heap:
        b, depth, _, s = heapq.heappop(heap)
        if s in done or best[s] != (b, depth):
            continue
        if budget.max_states is not None and explored >= budget.max_states or (
            deadline is not None and time.monotonic() > deadline
        ):
            return _Outcome(BUDGET, None, explored=explored, frontier_min=b)
        done.add(s)
        explored += 1
        if is_goal(s):
            states, moves = [s], []
            while parent[states[-1]] is not None:
                prev, mv = parent[states[-1]]
                states.append(prev)
                moves.append(mv)
            return _Outcome(EXACT, b, states[::-1], moves[::-1], explored)
        for mv, t in expand(s):
            if t in done:
                continue
            nb = max(b, energy(t))
            cand = (nb, depth + 1)
            old = best.get(t)
            if old is None or cand < old:
                best[t] = cand
                parent[t] = (s, mv)
                heapq.heappush(heap, (nb, depth + 1, sort_key(t), t))
    return _Outcome(UNREACHABLE, None, explored=explored)


def bottleneck_map(
    start: S,
    expand: Callable[[S], Iterable[tuple[object, S]]],
    energy: Callable[[S], Fraction],
    sort_key: Callable[[S], object],
) -> dict[S, Fraction]:
    """Bottleneck excess from ``start`` to every reachable state."""
    e0 = energy(start)
    best = {start: e0}
    done = {}
    heap = [(e0, sort_key(start), start)]
    while heap:
        b, _, s = heapq.heappop(heap)
        if s in done:
            continue
        done[s] = b - e0
        for _, t in expand(s):
            if t in done:
                continue
            nb = max(b, energy(t))
            if t not in best or nb < best[t]:
                best[t] = nb
                heapq.heappush(heap, (nb, sort_key(t), t))
    return done


def _config_expander(mode: str, budget: SearchBudget | None):
    cap = budget.max_polymer_size if budget else None

    def expand(c: Configuration):
        for mv, n in neighbors(c, mode):
            if cap is not None and any(len(p) > cap for p in n.polymers):
                continue
            yield mv, n

    return expand


def _check_mode(mode: str) -> str:
    if mode not in ("all", "saturated_only"):
        raise TBNError(f"unknown barrier mode {mode!r}")
    return mode


def barrier(
    tbn: TBN | None,
    start: Configuration,
    goal: Configuration | Callable[[Configuration], bool],
    w,
    mode: str = "all",
    budget: SearchBudget | None = None,
) -> BarrierResult:
    """Exact barrier from ``start`` to ``goal`` (a configuration or a predicate).

    ``mode="saturated_only"`` restricts every configuration on the path to be
    saturated.
    """
    w = as_w(w)
    _check_mode(mode)
    if tbn is not None:
        tbn.check(start)
        if isinstance(goal, Configuration):
            tbn.check(goal)
    if isinstance(goal, Configuration):
        if goal.monomers() != start.monomers():
            raise TBNError("start and goal are over different monomers")
        target = goal
        is_goal = lambda c: c == target  # noqa: E731
    else:
        is_goal = goal
    if mode == "saturated_only":
        if not start.saturated or (isinstance(goal, Configuration) and not goal.saturated):
            raise TBNError("saturated-mode barrier needs saturated endpoints")
    out = bottleneck_search(
        start, is_goal, _config_expander(mode, budget), lambda c: c.energy(w), lambda c: c.key, budget
    )
    capped = bool(budget and budget.max_polymer_size is not None)
    e0 = start.energy(w)
    if out.status == EXACT:
        witness = Path(out.states, out.moves)
        return BarrierResult(out.bottleneck - e0, witness, out.explored, mode, EXACT, upper_bound_only=capped)
    if out.status == BUDGET:
        return BarrierResult(None, None, out.explored, mode, BUDGET, lower_bound=out.frontier_min - e0,
                             upper_bound_only=capped)
    return BarrierResult(None, None, out.explored, mode, UNREACHABLE, upper_bound_only=capped)


def barrier_map(start: Configuration, w, mode: str = "all") -> dict[Configuration, Fraction]:
    """Barrier from ``start`` to every configuration reachable in ``mode``."""
    w = as_w(w)
    _check_mode(mode)
    if mode == "saturated_only" and not start.saturated:
        raise TBNError("saturated-mode barrier needs a saturated start")
    return bottleneck_map(start, _config_expander(mode, None), lambda c: c.energy(w), lambda c: c.key)


def saturated_equals_unrestricted_check(
    tbn: TBN | None, start: Configuration, goal: Configuration, w, budget: SearchBudget | None = None
) -> bool:
    """Whether the saturated-only barrier equals the unrestricted one (needs w >= 2)."""
    w = as_w(w)
    if w < 2:
        raise TBNError("saturated/unrestricted equality is only claimed for w >= 2")
    full = barrier(tbn, start, goal, w, "all", budget)
    sat = barrier(tbn, start, goal, w, "saturated_only", budget)
    if full.budget_hit or sat.budget_hit:
        raise TBNError("search budget exhausted before both barriers were found")
    return full.barrier == sat.barrier


# --- stability -------------------------------------------------------------

class _BudgetOut(Exception):
    pass


def stable_configurations(tbn: TBN, w=2, budget: SearchBudget | None = None) -> StabilityResult:
    """All minimum-energy configurations.

    Branch and bound over assignments of monomer instances to polymers.
    Instances of one type are interchangeable, so each is placed in a polymer
    index no smaller than its predecessor's.  For ``w >= 2`` every stable
    configuration is saturated, so leaves are filtered to saturated ones and
    ranked by polymer count; otherwise leaves are ranked by energy.
    """
    w = as_w(w)
    saturated_shortcut = w >= 2
    monomers = tbn.monomers()
    n = len(monomers)
    h_max = tbn.max_bonds()
    max_states = budget.max_states if budget else None
    deadline = None if not budget or budget.timeout is None else time.monotonic() + budget.timeout

    blocks: list[list] = []
    found: set[Configuration] = set()
    best = [None]  # best S (shortcut) or best energy
    visited = [0]
    last_block = [-1] * n

    def score_bound(k: int):
        # most polymers any completion can reach
        s_opt = len(blocks) + (n - k)
        return s_opt if saturated_shortcut else -w * h_max - s_opt

    def better(a, b):
        return a > b if saturated_shortcut else a < b

    def leaf():
        c = Configuration(Polymer(b) for b in blocks)
        if saturated_shortcut:
            if not c.saturated:
                return
            score = len(c)
        else:
            score = c.energy(w)
        if best[0] is None or better(score, best[0]):
            best[0] = score
            found.clear()
        if score == best[0]:
            found.add(c)

    def rec(k: int):
        visited[0] += 1
        if max_states is not None and visited[0] > max_states or (
            deadline is not None and time.monotonic() > deadline
        ):
            raise _BudgetOut
        if best[0] is not None and better(best[0], score_bound(k)):
            return
        if k == n:
            leaf()
            return
        m = monomers[k]
        lo = last_block[k - 1] if k and monomers[k - 1] == m else 0
        for b in range(lo, len(blocks)):
            blocks[b].append(m)
            last_block[k] = b
            rec(k + 1)
            blocks[b].pop()
        blocks.append([m])
        last_block[k] = len(blocks) - 1
        rec(k + 1)
        blocks.pop()

    complete = True
    try:
        rec(0)
    except _BudgetOut:
        complete = False
    confs = sorted(found, key=lambda c: c.key)
    if not confs:
        return StabilityResult(0, [], Fraction(0), visited[0], False, (1, n))
    max_s = max(len(c) for c in confs)
    result = StabilityResult(max_s, confs, min(c.energy(w) for c in confs), visited[0], complete)
    if not complete:
        result.bounds = (max_s, n)
    return result


def self_stabilize(tbn: TBN | None, c: Configuration) -> Path:
    """Greedy descent by saturation-preserving splits until none is possible.

    Returns the splits-only path; the caller judges whether its end is stable.
    """
    if tbn is not None:
        tbn.check(c)
    if not c.saturated:
        raise TBNError("self_stabilize needs a saturated configuration")
    confs = [c]
    while True:
        cur = confs[-1]
        nxt = None
        for i, p in enumerate(cur.polymers):
            if len(p) == 1:
                continue
            for part in split_parts(p):
                cand = _replace(cur, (i,), [part, _sub_multiset(p, part)])
                if cand.saturated:
                    nxt = cand
                    break
            if nxt is not None:
                break
        if nxt is None:
            return Path(confs)
        confs.append(nxt)


def iter_configurations(tbn: TBN, saturated_only: bool = False) -> Iterator[Configuration]:
    """Every configuration of ``tbn`` exactly once, in no particular order.

    Same-type instances are placed in non-decreasing block order, which
    removes most relabellings; the rest are dropped by a seen-set.
    """
    monomers = tbn.monomers()
    n = len(monomers)
    blocks: list[list] = []
    last = [0] * n
    seen: set[Configuration] = set()

    def rec(k: int):
        if k == n:
            c = Configuration(Polymer(b) for b in blocks)
            if c not in seen and (not saturated_only or c.saturated):
                seen.add(c)
                yield c
            return
        m = monomers[k]
        lo = last[k - 1] if k and monomers[k - 1] == m else 0
        for b in range(lo, len(blocks)):
            blocks[b].append(m)
            last[k] = b
            yield from rec(k + 1)
            blocks[b].pop()
        blocks.append([m])
        last[k] = len(blocks) - 1
        yield from rec(k + 1)
        blocks.pop()

    yield from rec(0)
