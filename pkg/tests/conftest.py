import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tbnbarrier import TBN, Monomer  # noqa: E402


@pytest.fixture
def doubled():
    """{a,a}, 2 x {a*,b}: gamma1 all together, gamma2 with one {a*,b} apart."""
    aa, ab = Monomer.of("a a", "aa"), Monomer.of("a* b", "sb")
    tbn = TBN({aa: 1, ab: 2})
    g1 = tbn.configuration([[aa, ab, ab]])
    g2 = tbn.configuration([[ab], [aa, ab]])
    return tbn, aa, ab, g1, g2


@pytest.fixture
def square():
    """{a}, {b}, {a,b}, {a*,b*} with the two endpoint configurations and both paths."""
    a, b, ab, st = Monomer.of("a", "a"), Monomer.of("b", "b"), Monomer.of("a b", "ab"), Monomer.of("a* b*", "st")
    tbn = TBN([a, b, ab, st])
    gamma = tbn.configuration([[a, b, st], [ab]])
    delta = tbn.configuration([[ab, st], [a], [b]])
    top = [gamma,
           tbn.configuration([[b, st], [a], [ab]]),
           tbn.configuration([[a], [b], [ab], [st]]),
           delta]
    bottom = [gamma,
              tbn.configuration([[a, b, ab, st]]),
              tbn.configuration([[a], [b, ab, st]]),
              delta]
    return {"tbn": tbn, "a": a, "b": b, "ab": ab, "st": st, "gamma": gamma, "delta": delta,
            "top": top, "bottom": bottom}


@pytest.fixture
def tightness():
    """m1 = {a,b}, m2 = {a*}, m3 = {a,c}."""
    m1, m2, m3 = Monomer.of("a b", "m1"), Monomer.of("a*", "m2"), Monomer.of("a c", "m3")
    tbn = TBN([m1, m2, m3])
    return tbn, tbn.configuration([[m1, m2], [m3]]), tbn.configuration([[m1], [m2, m3]])


def pytest_terminal_summary(terminalreporter):
    verdicts = getattr(sys.modules.get("test_acceptance"), "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        terminalreporter.write_line(verdicts[number])
