from collections import Counter
from fractions import Fraction

import pytest

from tbnbarrier import (
    TBN,
    Configuration,
    Energy,
    Monomer,
    Polymer,
    SiteType,
    TBNError,
    as_w,
    bond_count,
    canonicalize,
    compatible,
    energy,
    exposed_sites,
    is_saturated,
)

import oracle


def P(*specs):
    return Polymer(Monomer.of(s) for s in specs)


def sites(*tokens):
    return Counter(SiteType.parse(t) for t in tokens)


class TestSiteType:
    def test_complement_is_an_involution(self):
        s = SiteType("x")
        assert s.complement().complement() == s
        assert s.complement() == SiteType("x", True)

    def test_bonding_needs_same_name_and_opposite_star(self):
        assert SiteType("a").bonds_with(SiteType("a", True))
        assert not SiteType("a").bonds_with(SiteType("a"))
        assert not SiteType("a").bonds_with(SiteType("b", True))

    @pytest.mark.parametrize("bad", ["", "a b", "a{", "x:y", "#"])
    def test_invalid_names_rejected(self, bad):
        with pytest.raises(TBNError):
            SiteType(bad)


class TestMonomer:
    def test_repeated_sites_allowed(self):
        m = Monomer.of("a a")
        assert len(m) == 2 and m.sites == (SiteType("a"), SiteType("a"))

    def test_equality_ignores_label_and_site_order(self):
        assert Monomer.of("b a*", "x") == Monomer.of("a* b", "y")
        assert hash(Monomer.of("b a*")) == hash(Monomer.of("a* b"))


class TestExposedSites:
    def test_doubled_right_polymer(self):
        assert exposed_sites(P("a a", "a* b")) == sites("a", "b")

    def test_single_monomer_exposes_everything(self):
        assert exposed_sites(P("a* b")) == sites("a*", "b")

    def test_complementary_pair_exposes_nothing(self):
        assert exposed_sites(P("a b", "a* b*")) == Counter()


class TestBondCount:
    @pytest.mark.parametrize("polymer, expected", [
        (("a a", "a* b"), 1),
        (("a b", "a* b*"), 2),
        (("a", "b"), 0),
    ])
    def test_examples(self, polymer, expected):
        assert bond_count(P(*polymer)) == expected

    def test_configuration_sums_polymers(self, square):
        assert square["gamma"].bonds == 2


class TestCompatible:
    def test_doubled_polymers_compatible(self):
        assert compatible(P("a a", "a* b"), P("a* b"))

    def test_identical_exposure_incompatible(self):
        assert not compatible(P("a"), P("a"))

    def test_nothing_exposed_incompatible(self):
        assert not compatible(P("a b", "a* b*"), P("a"))


class TestSaturation:
    def test_doubled(self, doubled):
        _, _, _, g1, g2 = doubled
        assert is_saturated(g1)
        assert not is_saturated(g2)

    def test_no_complements_all_separate(self):
        tbn = TBN([Monomer.of("a"), Monomer.of("b c")])
        assert is_saturated(tbn.all_singletons())

    def test_two_copies_of_one_polymer_type_can_be_compatible(self):
        m = Monomer.of("a a*")
        n = Monomer.of("a")
        k = Monomer.of("a*")
        c = Configuration([[m, n], [m, k]])
        assert not c.saturated


class TestEnergy:
    @pytest.mark.parametrize("h, s, value", [(2, 2, -6), (0, 4, -4), (2, 1, -5)])
    def test_energy_pairs_at_w2(self, h, s, value):
        assert Energy(h, s).value(2) == value

    def test_square_reference_values(self, square):
        assert energy(square["gamma"], 2) == -6
        assert energy(square["top"][2], 2) == -4
        assert energy(square["bottom"][1], 2) == -5

    def test_exact_rationals(self, square):
        e = energy(square["gamma"], "3/2")
        assert isinstance(e, Fraction) and e == Fraction(-5)
        assert energy(square["gamma"], Fraction(1, 3)) == Fraction(-8, 3)

    def test_always_negative(self, square):
        for c in square["top"] + square["bottom"]:
            assert energy(c, 0) < 0

    @pytest.mark.parametrize("bad", [2.0, "1.5", "-1", True, "1/0", None])
    def test_bad_bond_strengths(self, bad):
        with pytest.raises(TBNError):
            as_w(bad)

    def test_w_normalised(self):
        assert as_w("4/2") == Fraction(2)


class TestCanonical:
    def test_order_of_polymers_irrelevant(self, square):
        a, b, ab, st = (square[k] for k in ("a", "b", "ab", "st"))
        c1 = Configuration([[a, b, st], [ab]])
        c2 = Configuration([[ab], [st, b, a]])
        assert canonicalize(c1) == canonicalize(c2)
        assert c1 == c2 and hash(c1) == hash(c2)

    def test_swapping_same_type_monomers_is_not_new(self):
        x = Monomer.of("a")
        y = Monomer.of("a*")
        # two polymers {x, y}: exchanging the two x's gives the same key
        c1 = Configuration([[x, y], [Monomer.of("a", "other label"), y]])
        c2 = Configuration([[y, x], [y, x]])
        assert canonicalize(c1) == canonicalize(c2)

    def test_doubled_configurations_distinct(self, doubled):
        _, _, _, g1, g2 = doubled
        assert canonicalize(g1) != canonicalize(g2)

    def test_idempotent_and_energy_invariant(self, square):
        for c in square["top"]:
            again = Configuration(c.polymers)
            assert canonicalize(again) == canonicalize(c)
            assert again.energy(2) == c.energy(2)


class TestTBN:
    def test_empty_rejected(self):
        with pytest.raises(TBNError):
            TBN([])

    def test_nonpositive_count_rejected(self):
        with pytest.raises(TBNError):
            TBN({Monomer.of("a"): 0})

    def test_partition_check(self, square):
        tbn = square["tbn"]
        with pytest.raises(TBNError):
            tbn.configuration([[square["a"]], [square["b"]]])

    def test_keeps_labels(self, square):
        assert {m.label for m in square["tbn"].types} == {"a", "b", "ab", "st"}

    def test_doubled_counts(self, doubled):
        tbn = doubled[0]
        assert len(tbn) == 3 and len(tbn.types) == 2
        assert sum(len(m) for m in tbn.monomers()) == 6
        assert len(tbn.site_names()) == 2


def test_saturation_matches_oracle_on_doubled(doubled):
    tbn = doubled[0]
    confs = oracle.partitions(oracle.tbn_to_oracle(tbn))
    assert len(confs) == 4
    for c in confs:
        assert oracle.saturated_by_pairs(c) == oracle.saturated_by_max_bonds(c, confs)
