"""Named checks of the barrier, stability and path results at small sizes.

Each suite returns a :class:`Report`; ``ok`` is False as soon as one checked
instance disagrees with the expected statement.  Counts of checked instances
are reported so that vacuous checks are visible.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .kinetics import neighbors, saturate_path
from .model import TBN, Configuration, Monomer, SiteType, TBNError, as_w
from .search import barrier, iter_configurations, self_stabilize, stable_configurations
from .constructions.grid import GridSpec, gen_grid, grid_catalyzed_path
from .constructions.translator import (
    TranslatorSpec,
    all_perfect_matchings,
    configuration_offset,
    exposed_size_check,
    find_cutoff,
    gen_translator,
    is_normal_form,
    n_prime,
    offset_diagnostics,
    pair_offset,
    perfect_matching,
    translator_catalyzed_path,
    translator_cheat_path,
    _indices,
)


@dataclass
class Report:
    suite: str
    ok: bool
    details: dict = field(default_factory=dict)

    def fail(self, **details) -> "Report":
        self.ok = False
        self.details.setdefault("counterexamples", []).append(details)
        return self


def grid_barrier(n: int = 2, w="2") -> Report:
    net = gen_grid(GridSpec(n))
    c = net.configurations
    r = barrier(net.tbn, c["base_H"], c["base_V"], w)
    rep = Report("grid-barrier", r.barrier == n, {"n": n, "barrier": r.barrier, "expected": n,
                                                  "explored": r.explored})
    if r.witness is not None and r.witness.height(w) != r.barrier:
        rep.fail(reason="witness height differs from barrier")
    return rep


def grid_catalyzed(n: int = 2, w="2") -> Report:
    net = gen_grid(GridSpec(n, catalysts=1))
    c = net.configurations
    fwd = barrier(net.tbn, c["cat_H"], c["cat_V"], w).barrier
    back = barrier(net.tbn, c["cat_V"], c["cat_H"], w).barrier
    path = grid_catalyzed_path(net)
    h = path.height(w)
    ok = fwd == 1 and back == 1 and h == 1 and path.is_saturated()
    return Report("grid-catalyzed", ok, {"n": n, "forward": fwd, "backward": back, "path_height": h,
                                         "path_saturated": path.is_saturated()})


def autocatalysis(n: int = 2, w="2") -> Report:
    net = gen_grid(GridSpec(n, autocatalytic=True))
    c = net.configurations
    st = stable_configurations(net.tbn, w)
    stable_h = c["auto_H"] in st.stable_configurations
    stable_v = c["auto_V"] in st.stable_configurations
    b = barrier(net.tbn, c["auto_H"], c["auto_V"], w).barrier
    path = grid_catalyzed_path(net)
    ok = stable_h and stable_v and st.max_S == n + 2 and b == 1 and path.height(w) == 1
    return Report("autocatalysis", ok, {"n": n, "max_S": st.max_S, "expected_S": n + 2,
                                        "auto_H_stable": stable_h, "auto_V_stable": stable_v,
                                        "barrier": b, "path_height": path.height(w)})


def grid_self_stabilize(n: int = 2) -> Report:
    net = gen_grid(GridSpec(n))
    bases = set(net.base_configurations())
    rep = Report("grid-self-stabilize", True, {"n": n})
    checked = 0
    for conf in iter_configurations(net.tbn, saturated_only=True):
        checked += 1
        end = self_stabilize(net.tbn, conf).end
        if end not in bases:
            rep.fail(start=str(conf), reached=str(end))
    rep.details["saturated_configurations"] = checked
    return rep


def grid_stability(n: int = 2, catalysts: int = 0, w="2") -> Report:
    """Base configurations plus free catalysts are stable and attain the polymer-count bound.

    Other stable configurations can exist (a catalyst may stand in for one H or V);
    they are listed, not counted as failures.
    """
    net = gen_grid(GridSpec(n, catalysts=catalysts))
    st = stable_configurations(net.tbn, w)
    stable = set(st.stable_configurations)
    expected = set(net.base_configurations())
    k = net.tbn.counts[net.G]
    want_s = len(net.tbn) - k * n
    ok = expected <= stable and st.max_S == want_s
    return Report("grid-stability", ok, {"n": n, "catalysts": catalysts, "max_S": st.max_S,
                                         "expected_S": want_s, "stable": len(stable),
                                         "base_stable": len(expected & stable), "base": len(expected),
                                         "other_stable": sorted(str(c) for c in stable - expected)})


def translator_catalyzed(z: int = 2, c: int = 4, w="2") -> Report:
    net = gen_translator(TranslatorSpec(z, c, extra_catalysts=1))
    path = translator_catalyzed_path(net)
    b = barrier(net.tbn, net.initial, net.triggered, w).barrier
    ok = path.height(w) == 1 and path.is_saturated() and b == 1
    return Report("translator-catalyzed", ok, {"z": z, "c": c, "path_height": path.height(w), "barrier": b})


def translator_cheat(z: int = 3, c: int = 9, w="2") -> Report:
    net = gen_translator(TranslatorSpec(z, c))
    path = translator_cheat_path(net)
    want = Fraction(2 * c, z)
    ok = path.height(w) == want and path.is_saturated()
    return Report("translator-cheat", ok, {"z": z, "c": c, "path_height": path.height(w), "expected": want,
                                           "saturated": path.is_saturated(), "steps": len(path) - 1})


def translator_barrier(n: int = 2, w="2") -> Report:
    net = gen_translator(TranslatorSpec(n, n * n))
    r = barrier(net.tbn, net.initial, net.triggered, w)
    bound = Fraction(n * n, 2 * n + 1)
    return Report("translator-barrier", r.barrier >= bound,
                  {"n": n, "barrier": r.barrier, "lower_bound": bound, "integer_bound": math.ceil(bound)})


def _normal_form(conf: Configuration, n: int) -> bool:
    return all(is_normal_form(p, n) for p in conf.polymers)


def _small(conf: Configuration, n: int) -> bool:
    return all(len(p) < n_prime(n) for p in conf.polymers)


def translator_offset(n: int = 2) -> Report:
    """Offsets: initial 0, triggered -n^2, unchanged along small normal-form saturated merges."""
    net = gen_translator(TranslatorSpec(n, n * n))
    f_init = configuration_offset(net.initial, n)
    f_trig = configuration_offset(net.triggered, n)
    rep = Report("translator-offset", f_init == 0 and f_trig == -n * n,
                 {"n": n, "initial_offset": f_init, "triggered_offset": f_trig})
    steps = 0
    for conf in iter_configurations(net.tbn, saturated_only=True):
        if not (_normal_form(conf, n) and _small(conf, n)):
            continue
        for move, nxt in neighbors(conf, "saturated_only"):
            if move.kind != "merge" or not (_normal_form(nxt, n) and _small(nxt, n)):
                continue
            steps += 1
            if configuration_offset(conf, n, True) != configuration_offset(nxt, n, True):
                rep.fail(before=str(conf), after=str(nxt))
    rep.details["merge_steps_checked"] = steps
    return rep


def translator_lemmas(n: int = 2) -> Report:
    """Exposed-size, perfect matching, matching independence, offset-size and large-polymer checks."""
    net = gen_translator(TranslatorSpec(n, n * n))
    rep = Report("translator-lemmas", True, {"n": n})
    counts = dict.fromkeys(["exposed_size", "perfect_matching", "matching_independence",
                            "offset_size", "non_normal_form"], 0)
    seen_polymers = set()
    for conf in iter_configurations(net.tbn, saturated_only=True):
        if not _normal_form(conf, n):
            counts["non_normal_form"] += 1
            if not any(len(_indices(p, n)[1]) >= n for p in conf.polymers):
                rep.fail(lemma="non_normal_form", configuration=str(conf))
            continue
        for p in conf.polymers:
            if p in seen_polymers:
                continue
            seen_polymers.add(p)
            counts["exposed_size"] += 1
            if not exposed_size_check(p, n).holds:
                rep.fail(lemma="exposed_size", polymer=str(p))
            bots, tops = _indices(p, n)
            counts["perfect_matching"] += 1
            if perfect_matching(bots, tops, n) is None:
                rep.fail(lemma="perfect_matching", polymer=str(p))
                continue
            if len(p) >= n_prime(n) or find_cutoff(bots, n) is None:
                continue
            counts["matching_independence"] += 1
            offsets = {sum(pair_offset(i, j, n) for i, j in m) for m in all_perfect_matchings(bots, tops, n)}
            if len(offsets) != 1:
                rep.fail(lemma="matching_independence", polymer=str(p), offsets=sorted(offsets))
            d = offset_diagnostics(p, n)
            top_offset = max(d.pair_offsets)
            if top_offset > 0:
                counts["offset_size"] += 1
                if len(p) < 2 * (top_offset + 1):
                    rep.fail(lemma="offset_size", polymer=str(p))
    rep.details["checked"] = counts
    return rep


def random_tbn(rng: random.Random, max_monomers: int = 5, max_names: int = 3, max_sites: int = 3) -> TBN:
    """A random TBN with at most ``max_monomers`` monomer instances."""
    names = [chr(ord("a") + k) for k in range(rng.randint(1, max_names))]
    monomers = []
    for _ in range(rng.randint(2, max_monomers)):
        sites = tuple(SiteType(rng.choice(names), rng.random() < 0.5) for _ in range(rng.randint(1, max_sites)))
        monomers.append(Monomer(sites))
    return TBN(monomers)


def saturated_equivalence(count: int = 200, seed: int = 0, ws=("2", "5/2")) -> Report:
    """b-hat equals b between random saturated pairs of random small TBNs."""
    rng = random.Random(seed)
    rep = Report("saturated-equivalence", True, {"count": count, "seed": seed, "w": [str(as_w(w)) for w in ws]})
    pairs = 0
    for _ in range(count):
        tbn = random_tbn(rng)
        sats = sorted(iter_configurations(tbn, saturated_only=True), key=lambda c: c.key)
        a, b = rng.choice(sats), rng.choice(sats)
        for w in ws:
            pairs += 1
            full = barrier(tbn, a, b, w).barrier
            sat = barrier(tbn, a, b, w, "saturated_only").barrier
            if full != sat:
                rep.fail(tbn=repr(tbn), start=str(a), goal=str(b), w=str(w), b=str(full), b_hat=str(sat))
    rep.details["pairs_checked"] = pairs
    return rep


def path_saturation(count: int = 50, seed: int = 0, ws=("1", "3/2", "2")) -> Report:
    """Saturating a witness path never adds more than max(0, 2-w) height."""
    rng = random.Random(seed)
    rep = Report("path-saturation", True, {"count": count, "seed": seed})
    checked = 0
    for _ in range(count):
        tbn = random_tbn(rng, max_monomers=4)
        sats = sorted(iter_configurations(tbn, saturated_only=True), key=lambda c: c.key)
        a, b = rng.choice(sats), rng.choice(sats)
        for w in ws:
            w = as_w(w)
            path = barrier(tbn, a, b, w).witness
            out = saturate_path(path, w)
            checked += 1
            if out.height(w) > path.height(w) + max(Fraction(0), 2 - w) or not out.is_saturated():
                rep.fail(tbn=repr(tbn), start=str(a), goal=str(b), w=str(w))
    rep.details["paths_checked"] = checked
    return rep


SUITES: dict[str, tuple[Callable[..., Report], tuple[str, ...]]] = {
    "grid-barrier": (grid_barrier, ("n",)),
    "grid-catalyzed": (grid_catalyzed, ("n",)),
    "autocatalysis": (autocatalysis, ("n",)),
    "grid-self-stabilize": (grid_self_stabilize, ("n",)),
    "grid-stability": (grid_stability, ("n", "catalysts")),
    "translator-catalyzed": (translator_catalyzed, ("z", "c")),
    "translator-cheat": (translator_cheat, ("z", "c")),
    "translator-barrier": (translator_barrier, ("n",)),
    "translator-offset": (translator_offset, ("n",)),
    "translator-lemmas": (translator_lemmas, ("n",)),
    "saturated-equivalence": (saturated_equivalence, ("count", "seed")),
    "path-saturation": (path_saturation, ("count", "seed")),
}


def run_suite(name: str, **params) -> Report:
    try:
        fn, accepted = SUITES[name]
    except KeyError:
        raise TBNError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}") from None
    return fn(**{k: v for k, v in params.items() if k in accepted and v is not None})
