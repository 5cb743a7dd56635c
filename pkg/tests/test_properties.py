"""Property-based checks of the structural invariants on random small networks."""
import itertools
import random
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings, strategies as st

from tbnbarrier import (
    TBN,
    BondConfiguration,
    TBNError,
    Configuration,
    MergeKind,
    Monomer,
    Path,
    apply_move,
    barrier,
    bind_first_paths,
    bond_neighbors,
    canonicalize,
    classify_merge,
    invert_move,
    iter_configurations,
    neighbors,
    parse_tbn,
    render_tbn,
    saturate_path,
    simplify,
    stable_configurations,
)
from tbnbarrier.constructions import (
    TranslatorSpec,
    all_perfect_matchings,
    bottom,
    exposed_size_check,
    find_cutoff,
    gen_translator,
    n_prime,
    offset_diagnostics,
    pair_compatible,
    pair_offset,
    perfect_matching,
    top,
)
from tbnbarrier.model import Polymer
from tbnbarrier.textio import document_for

import oracle

FAST = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

site = st.builds(lambda name, star: name + ("*" if star else ""), st.sampled_from("abc"), st.booleans())
monomer_spec = st.lists(site, min_size=1, max_size=3).map(lambda s: " ".join(sorted(s)))
weights = st.sampled_from([Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3)])


@st.composite
def networks(draw, max_monomers=5):
    specs = draw(st.lists(monomer_spec, min_size=2, max_size=max_monomers))
    return specs, TBN([Monomer.of(s) for s in specs])


@st.composite
def configurations(draw, max_monomers=5):
    specs, tbn = draw(networks(max_monomers))
    ms = [Monomer.of(s) for s in specs]
    labels = draw(st.lists(st.integers(0, len(ms) - 1), min_size=len(ms), max_size=len(ms)))
    blocks = {}
    for m, k in zip(ms, labels):
        blocks.setdefault(k, []).append(m)
    return specs, tbn, tbn.configuration(blocks.values())


class TestModel:
    @FAST
    @given(configurations())
    def test_exposed_plus_twice_bonds_is_size(self, drawn):
        _, _, conf = drawn
        for p in conf.polymers:
            assert sum(p.exposed_sites().values()) + 2 * p.bond_count == p.site_count

    @FAST
    @given(networks())
    def test_saturated_iff_maximum_bonds(self, drawn):
        specs, tbn = drawn
        confs = list(iter_configurations(tbn))
        best = max(c.bonds for c in confs)
        assert len(confs) == len(oracle.partitions(oracle.tbn_to_oracle(tbn)))
        for c in confs:
            assert c.saturated == (c.bonds == best) == oracle.saturated_by_pairs(oracle.to_oracle(c))

    @FAST
    @given(networks(), st.sampled_from([Fraction(2), Fraction(5, 2), Fraction(4)]))
    def test_stable_configurations_are_saturated(self, drawn, w):
        _, tbn = drawn
        res = stable_configurations(tbn, w)
        assert res.stable_configurations and all(c.saturated for c in res.stable_configurations)
        confs = list(iter_configurations(tbn))
        low = min(c.energy(w) for c in confs)
        assert set(res.stable_configurations) == {c for c in confs if c.energy(w) == low}
        assert len(set(res.stable_configurations)) == len(res.stable_configurations)

    @FAST
    @given(configurations(), st.randoms(use_true_random=False), weights)
    def test_canonical_form(self, drawn, rnd, w):
        _, _, conf = drawn
        shuffled = [list(p.monomers) for p in conf.polymers]
        rnd.shuffle(shuffled)
        for block in shuffled:
            rnd.shuffle(block)
        again = Configuration(shuffled)
        assert again == conf and canonicalize(again) == canonicalize(conf)
        assert again.energy(w) == conf.energy(w)
        assert canonicalize(Configuration([p.monomers for p in again.polymers])) == canonicalize(conf)


class TestKinetics:
    @FAST
    @given(configurations(), weights)
    def test_moves_invert_and_obey_energy_laws(self, drawn, w):
        _, _, conf = drawn
        for move, nxt in neighbors(conf):
            assert apply_move(conf, move) == nxt
            assert apply_move(nxt, invert_move(conf, move)) == conf
            assert conf in {c for _, c in neighbors(nxt)}
            if move.kind == "merge":
                if classify_merge(conf, move) is MergeKind.CLEAN:
                    assert nxt.energy(w) == conf.energy(w) + 1
                else:
                    assert nxt.energy(w) <= conf.energy(w) + 1 - w

    @FAST
    @given(configurations(), st.data())
    def test_bind_first_decomposition(self, drawn, data):
        _, tbn, fine = drawn
        # a coarsening reached by a random merge chain
        coarse = fine
        for _ in range(data.draw(st.integers(0, len(fine) - 1))):
            merges = [c for m, c in neighbors(coarse) if m.kind == "merge"]
            if not merges:
                break
            coarse = data.draw(st.sampled_from(merges))
        bind, clean = bind_first_paths(fine, coarse)
        assert bind.start == fine and bind.end == clean.start and clean.end == coarse
        for path, kind in ((bind, MergeKind.BIND), (clean, MergeKind.CLEAN)):
            for a, b in zip(path, list(path)[1:]):
                move = next(m for m, c in neighbors(a) if c == b and m.kind == "merge")
                assert classify_merge(a, move) is kind
        mid = bind.end
        assert not any(classify_merge(mid, m) is MergeKind.BIND and _refines(c, coarse)
                       for m, c in neighbors(mid) if m.kind == "merge")

    @FAST
    @given(networks(max_monomers=4), st.data(), st.sampled_from([Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]))
    def test_saturating_a_random_walk(self, drawn, data, w):
        _, tbn = drawn
        sats = sorted(iter_configurations(tbn, saturated_only=True), key=lambda c: c.key)
        start = data.draw(st.sampled_from(sats))
        walk = [start]
        for _ in range(data.draw(st.integers(0, 6))):
            walk.append(data.draw(st.sampled_from([c for _, c in neighbors(walk[-1])])))
        goal = data.draw(st.sampled_from(sats))
        tail = barrier(tbn, walk[-1], goal, w).witness
        path = Path(walk).concat(tail)
        out = saturate_path(path, w)
        assert out.start == path.start and out.end == path.end and out.is_saturated()
        assert out.height(w) <= path.height(w) + max(Fraction(0), 2 - w)


def _refines(fine, coarse):
    try:
        bind_first_paths(fine, coarse)
    except TBNError:
        return False
    return True


class TestSearch:
    @FAST
    @given(networks(), weights, st.data())
    def test_matches_oracle_and_witness_replays(self, drawn, w, data):
        specs, tbn = drawn
        orc = oracle.BarrierOracle(oracle.tbn_to_oracle(tbn), w)
        confs = sorted(iter_configurations(tbn), key=lambda c: c.key)
        a, b = data.draw(st.sampled_from(confs)), data.draw(st.sampled_from(confs))
        res = barrier(tbn, a, b, w)
        assert res.barrier == orc.barrier(oracle.to_oracle(a), oracle.to_oracle(b))
        assert res.witness.start == a and res.witness.end == b
        assert res.witness.height(w) == res.barrier
        if a.energy(w) == b.energy(w):
            assert barrier(tbn, b, a, w).barrier == res.barrier
        if a.saturated and b.saturated:
            sat = barrier(tbn, a, b, w, "saturated_only")
            assert sat.barrier >= res.barrier
            assert sat.barrier == orc.barrier(oracle.to_oracle(a), oracle.to_oracle(b), saturated=True)
            assert sat.witness.is_saturated()

    @FAST
    @given(configurations())
    def test_saturated_neighbors_are_a_subset(self, drawn):
        _, _, conf = drawn
        every = {c for _, c in neighbors(conf)}
        sat = {c for _, c in neighbors(conf, "saturated_only")}
        assert sat <= every and all(c.saturated for c in sat)


class TestBonds:
    @FAST
    @given(configurations(max_monomers=4), weights)
    def test_simplify_never_raises_energy(self, drawn, w):
        _, _, conf = drawn
        seen = {BondConfiguration.from_configuration(conf, "none")}
        frontier = list(seen)
        while frontier and len(seen) < 200:
            here = frontier.pop()
            for move, nxt in bond_neighbors(here):
                coarse = simplify(nxt)
                assert coarse.energy(w) <= nxt.energy(w)
                assert coarse.polymer_count == nxt.polymer_count
                if move.kind not in ("merge", "split"):
                    assert coarse == simplify(here)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)

    @FAST
    @given(configurations(max_monomers=4))
    def test_max_matching_lift(self, drawn):
        _, _, conf = drawn
        bc = BondConfiguration.from_configuration(conf)
        assert simplify(bc) == conf and bc.bonds == conf.bonds
        assert bc.saturated == conf.saturated


class TestTextFormat:
    @FAST
    @given(configurations(), st.one_of(st.none(), weights))
    def test_round_trip(self, drawn, w):
        _, tbn, conf = drawn
        doc = document_for(tbn, {"c": conf}, w)
        again = parse_tbn(render_tbn(doc))
        assert again == doc and again.conf("c") == conf and again.tbn == tbn


class TestTranslator:
    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([(2, 4), (3, 5)]), st.randoms(use_true_random=False))
    def test_top_count_bounds_polymer_count(self, zc, rnd):
        net = gen_translator(TranslatorSpec(*zc))
        k = len(net.tops)
        conf = _random_saturated(net.tbn, rnd)
        assert conf.saturated
        for p in conf.polymers:
            tops = sum(1 for m in p.monomers if m in set(net.tops))
            assert conf.polymer_count <= k - tops + 1


def _random_saturated(tbn, rnd):
    ms = tbn.monomers()
    rnd.shuffle(ms)
    conf = Configuration([[m] for m in ms])
    while not conf.saturated:
        ps = list(conf.polymers)
        pairs = [(i, j) for i, j in itertools.combinations(range(len(ps)), 2) if ps[i].compatible(ps[j])]
        i, j = rnd.choice(pairs)
        conf = Configuration([p for k, p in enumerate(ps) if k not in (i, j)] + [ps[i].union(ps[j])])
    return conf


N5 = 5
C5 = N5 * N5


def _covered(bots, tops):
    p = Polymer([bottom(i, N5, C5) for i in bots] + [top(j, N5, C5) for j in tops])
    return p if all(v >= 0 for v in p.net.values()) else None


@st.composite
def small_polymers(draw):
    """Normal-form polymers at n = 5 that are smaller than n' and expose no starred site."""
    size = draw(st.sampled_from([1, 2]))
    bots = sorted(draw(st.lists(st.integers(0, C5 - 1), min_size=size, max_size=size)))
    options = [tops for tops in itertools.combinations_with_replacement(range(C5), size)
               if _covered(bots, tops) is not None]
    assume(options)
    tops = draw(st.sampled_from(options))
    return bots, list(tops), _covered(bots, tops)


class TestOffsetLemmasAtFive:
    @settings(max_examples=150, deadline=None)
    @given(small_polymers())
    def test_polymer_lemmas(self, drawn):
        bots, tops, p = drawn
        assert len(p) < n_prime(N5) < 2 * N5 + 1
        report = exposed_size_check(p)
        assert report.holds and report.size == 2 * report.exposed
        assert perfect_matching(bots, tops, N5) is not None
        assert find_cutoff(bots, N5) is not None
        offsets = {sum(pair_offset(i, j, N5) for i, j in m) for m in all_perfect_matchings(bots, tops, N5)}
        assert len(offsets) == 1
        d = offset_diagnostics(p, N5)
        assert d.sorted_matching and d.polymer_offset in offsets
        largest = max(d.pair_offsets)
        assert len(p) >= 2 * (largest + 1)

    @settings(max_examples=150, deadline=None)
    @given(small_polymers(), small_polymers())
    def test_offset_adds_across_merges(self, first, second):
        b1, t1, p1 = first
        b2, t2, p2 = second
        assume(len(p1) + len(p2) < n_prime(N5))
        merged = p1.union(p2)
        assert offset_diagnostics(merged, N5).polymer_offset == \
            offset_diagnostics(p1, N5).polymer_offset + offset_diagnostics(p2, N5).polymer_offset

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, C5 - 1), st.integers(0, C5 - 1))
    def test_compatibility_window(self, i, j):
        shared = {s.name for s in bottom(i, N5, C5).sites} & {s.name for s in top(j, N5, C5).sites}
        assert pair_compatible(i, j, N5) == bool(shared)
        if shared:
            assert -N5 <= pair_offset(i, j, N5) < N5
