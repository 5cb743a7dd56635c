import random
from fractions import Fraction

import pytest

from tbnbarrier import (
    TBN,
    Configuration,
    Monomer,
    Path,
    SearchBudget,
    TBNError,
    barrier,
    barrier_map,
    iter_configurations,
    saturated_equals_unrestricted_check,
    self_stabilize,
    stable_configurations,
)
from tbnbarrier.constructions import GridSpec, TranslatorSpec, gen_grid, gen_translator
from tbnbarrier.search import BUDGET, EXACT, UNREACHABLE
from tbnbarrier.verify import random_tbn

import oracle


class TestBarrier:
    def test_square(self, square):
        r = barrier(square["tbn"], square["gamma"], square["delta"], 2)
        assert r.barrier == 1 and r.status == EXACT
        assert r.witness.start == square["gamma"] and r.witness.end == square["delta"]
        assert r.witness.height(2) == 1

    def test_square_matches_oracle(self, square):
        orc = oracle.BarrierOracle(oracle.tbn_to_oracle(square["tbn"]), 2)
        a, b = oracle.to_oracle(square["gamma"]), oracle.to_oracle(square["delta"])
        assert orc.barrier(a, b) == 1
        # the top path is not optimal, the bottom one is
        assert Path(square["top"]).height(2) > orc.barrier(a, b)

    def test_same_endpoints(self, square):
        r = barrier(square["tbn"], square["gamma"], square["gamma"], 2)
        assert r.barrier == 0 and len(r.witness) == 1

    def test_tightness_at_w1(self, tightness):
        tbn, gamma, delta = tightness
        b = barrier(tbn, gamma, delta, 1).barrier
        assert barrier(tbn, gamma, delta, 1, "saturated_only").barrier == b + 1
        orc = oracle.BarrierOracle(oracle.tbn_to_oracle(tbn), 1)
        g, d = oracle.to_oracle(gamma), oracle.to_oracle(delta)
        assert orc.barrier(g, d) == b
        assert orc.barrier(g, d, saturated=True) == b + 1

    def test_symmetric_for_equal_energies(self, doubled):
        tbn = TBN([Monomer.of("a b"), Monomer.of("a*"), Monomer.of("b*")])
        confs = list(iter_configurations(tbn, saturated_only=True))
        for a in confs:
            for b in confs:
                if a.energy(2) == b.energy(2):
                    assert barrier(tbn, a, b, 2).barrier == barrier(tbn, b, a, 2).barrier

    def test_predicate_goal_and_unreachable(self, square):
        r = barrier(square["tbn"], square["gamma"], lambda c: len(c) == 4, 2)
        assert r.barrier == 2 and len(r.witness.end) == 4
        r = barrier(square["tbn"], square["gamma"], lambda c: len(c) == 4, 2, "saturated_only")
        assert r.status == UNREACHABLE and not r.reachable and r.barrier is None

    def test_budget_gives_lower_bound(self):
        net = gen_grid(GridSpec(3))
        c = net.configurations
        r = barrier(net.tbn, c["base_H"], c["base_V"], 2, budget=SearchBudget(max_states=5))
        assert r.status == BUDGET and r.budget_hit and r.barrier is None
        assert 0 <= r.lower_bound <= 3

    def test_polymer_cap_is_flagged(self):
        net = gen_grid(GridSpec(2))
        c = net.configurations
        r = barrier(net.tbn, c["base_H"], c["base_V"], 2, budget=SearchBudget(max_polymer_size=4))
        assert r.upper_bound_only and r.barrier >= 2

    def test_saturated_mode_needs_saturated_endpoints(self, square):
        with pytest.raises(TBNError):
            barrier(square["tbn"], square["top"][1], square["delta"], 2, "saturated_only")

    def test_wrong_monomers(self, square, doubled):
        with pytest.raises(TBNError):
            barrier(None, square["gamma"], doubled[3], 2)

    def test_barrier_map_agrees(self, square):
        m = barrier_map(square["gamma"], 2)
        assert m[square["delta"]] == 1
        assert len(m) == 15  # Bell(4): every configuration is reachable


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(8))
    def test_random_small(self, seed):
        rng = random.Random(seed)
        tbn = random_tbn(rng, max_monomers=4)
        w = rng.choice([Fraction(1), Fraction(3, 2), Fraction(2)])
        orc = oracle.BarrierOracle(oracle.tbn_to_oracle(tbn), w)
        confs = list(iter_configurations(tbn))
        assert len(confs) == len(orc.confs)
        start = rng.choice(confs)
        bmap = barrier_map(start, w)
        for c in confs:
            assert bmap[c] == orc.barrier(oracle.to_oracle(start), oracle.to_oracle(c))


class TestSaturatedEquality:
    def test_square(self, square):
        assert saturated_equals_unrestricted_check(square["tbn"], square["gamma"], square["delta"], 2)

    def test_w_below_two_rejected(self, square):
        with pytest.raises(TBNError):
            saturated_equals_unrestricted_check(square["tbn"], square["gamma"], square["delta"], "3/2")


class TestIterConfigurations:
    @pytest.mark.parametrize("specs", [("a", "a", "a*"), ("a b", "a*", "b*", "a"), ("a a", "a* b", "a* b")])
    def test_counts_match_oracle(self, specs):
        tbn = TBN([Monomer.of(s) for s in specs])
        got = {oracle.to_oracle(c) for c in iter_configurations(tbn)}
        assert got == set(oracle.partitions(oracle.tbn_to_oracle(tbn)))
        sat = {oracle.to_oracle(c) for c in iter_configurations(tbn, saturated_only=True)}
        assert sat == {c for c in got if oracle.saturated_by_pairs(c)}


class TestStable:
    def test_grid_two_base_configurations(self):
        net = gen_grid(GridSpec(2))
        st = stable_configurations(net.tbn, 2)
        assert set(st.stable_configurations) == {net.configurations["base_H"], net.configurations["base_V"]}
        assert st.max_S == 3 and st.complete

    def test_translator_3_5_both_stable(self):
        net = gen_translator(TranslatorSpec(3, 5))
        st = stable_configurations(net.tbn, 2)
        assert net.initial in st.stable_configurations
        assert net.triggered in st.stable_configurations
        assert net.initial.polymer_count == net.triggered.polymer_count == st.max_S

    def test_no_complements(self):
        tbn = TBN({Monomer.of("a"): 2, Monomer.of("b c"): 1})
        st = stable_configurations(tbn, 2)
        assert st.max_S == 3 and st.stable_configurations == [tbn.all_singletons()]

    def test_matches_oracle(self, doubled, square):
        for tbn in (doubled[0], square["tbn"]):
            confs = oracle.partitions(oracle.tbn_to_oracle(tbn))
            emin = min(oracle.energy(c, 2) for c in confs)
            want = {c for c in confs if oracle.energy(c, 2) == emin}
            got = {oracle.to_oracle(c) for c in stable_configurations(tbn, 2).stable_configurations}
            assert got == want

    def test_low_w_minimizes_energy(self):
        tbn = TBN([Monomer.of("a"), Monomer.of("a*")])
        st = stable_configurations(tbn, "1/2")
        # one bond is worth less than a polymer here
        assert st.stable_configurations == [tbn.all_singletons()]
        assert st.min_energy == -2

    def test_budget(self):
        net = gen_translator(TranslatorSpec(3, 5))
        st = stable_configurations(net.tbn, 2, SearchBudget(max_states=50))
        assert not st.complete and st.bounds is not None


class TestSelfStabilize:
    def test_grid_everything_merged(self):
        net = gen_grid(GridSpec(2))
        start = Configuration([net.tbn.monomers()])
        path = self_stabilize(net.tbn, start)
        assert path.end in (net.configurations["base_H"], net.configurations["base_V"])
        assert all(m.kind == "split" for m in path.moves)
        assert path.is_saturated()

    def test_base_configuration_is_fixed(self):
        net = gen_grid(GridSpec(2))
        path = self_stabilize(net.tbn, net.configurations["base_H"])
        assert len(path) == 1

    def test_translator_is_not_self_stabilizing(self):
        net = gen_translator(TranslatorSpec(2, 4))
        best = stable_configurations(net.tbn, 2).max_S
        stuck = [c for c in iter_configurations(net.tbn, saturated_only=True)
                 if len(self_stabilize(net.tbn, c)) == 1 and len(c) < best]
        assert stuck, "expected a saturated split-maximal configuration that is not stable"

    def test_requires_saturated(self, doubled):
        with pytest.raises(TBNError):
            self_stabilize(doubled[0], doubled[4])
