from fractions import Fraction

import pytest

from tbnbarrier import Monomer, TBNError, TBNParseError, parse_tbn, render_tbn
from tbnbarrier.constructions import GridSpec, TranslatorSpec, gen_grid, gen_translator
from tbnbarrier.textio import document_for

GRID_N2 = """\
# the n = 2 grid gate
G: 11* 12* 21* 22*
H1: 11 12
H2: 21 22
V1: 11 21
V2: 12 22
conf base_H: {G H1 H2} {V1} {V2}
conf base_V: {G V1 V2} {H1} {H2}
"""


def test_grid_document():
    doc = parse_tbn(GRID_N2)
    net = gen_grid(GridSpec(2))
    assert doc.tbn == net.tbn
    assert doc.conf("base_H") == net.configurations["base_H"]
    assert doc.conf("base_V") == net.configurations["base_V"]
    assert doc.w is None


@pytest.mark.parametrize("make", [
    lambda: gen_grid(GridSpec(2)),
    lambda: gen_grid(GridSpec(3, catalysts=2)),
    lambda: gen_grid(GridSpec(2, autocatalytic=True)),
    lambda: gen_translator(TranslatorSpec(2, 4, extra_catalysts=1)),
])
def test_round_trip(make):
    net = make()
    doc = document_for(net.tbn, net.configurations, w=2)
    again = parse_tbn(render_tbn(doc))
    assert again == doc
    assert render_tbn(again) == render_tbn(doc)


def test_counts_and_w():
    doc = parse_tbn("w: 3/2\n3 x a: x y\nb: x* y*\nconf all: {a a a b}\n")
    assert doc.w == Fraction(3, 2)
    assert doc.tbn.counts[Monomer.of("x y")] == 3
    assert len(doc.conf("all")) == 1
    assert "3 x a: x y" in render_tbn(doc)


def test_unnamed_monomers_get_names():
    doc = parse_tbn("a b\na* b*\n")
    assert sorted(doc.monomers) == ["m1", "m2"]


def test_comments_and_blank_lines():
    doc = parse_tbn("\n# header\nx: a   # trailing\n\ny: a*\n")
    assert len(doc.tbn) == 2


@pytest.mark.parametrize("text, line, column", [
    ("x: a\ny: a*\nconf c: {x z}\n", 3, 12),
    ("x: a\nconf c: {x\n", 2, 9),
    ("x: a\nx: b\n", 2, 1),
    ("w: 0.5\nx: a\n", 1, 4),
])
def test_errors_carry_position(text, line, column):
    with pytest.raises(TBNParseError) as info:
        parse_tbn(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_undeclared_monomer_message():
    with pytest.raises(TBNParseError, match="unknown monomer 'z'"):
        parse_tbn("x: a\ny: a*\nconf c: {x z}\n")


@pytest.mark.parametrize("conf", ["{x}", "{x y} {y}", "{x x y}"])
def test_non_partition_rejected(conf):
    with pytest.raises(TBNParseError, match="partition"):
        parse_tbn(f"x: a\ny: a*\nconf c: {conf}\n")


@pytest.mark.parametrize("text", ["", "# nothing\n", "w: 2\n"])
def test_empty_document(text):
    with pytest.raises(TBNParseError):
        parse_tbn(text)


@pytest.mark.parametrize("text", ["w: a\n", "conf: a\n", "x: a**\n", "0 x x: a\n", "x:\n"])
def test_malformed_lines(text):
    with pytest.raises(TBNParseError):
        parse_tbn(text)


def test_duplicate_site_multiset_rejected():
    with pytest.raises(TBNParseError):
        parse_tbn("x: a b\ny: b a\n")


def test_unknown_configuration_name():
    doc = parse_tbn(GRID_N2)
    with pytest.raises(TBNError, match="base_H"):
        doc.conf("nope")


def test_parse_and_format_configuration():
    doc = parse_tbn(GRID_N2)
    c = doc.parse_configuration("{H1 G H2} {V1} {V2}")
    assert c == doc.conf("base_H")
    assert doc.parse_configuration(doc.format_configuration(c)) == c
