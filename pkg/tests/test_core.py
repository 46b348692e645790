from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from polychrome.core import (
    NO_PUNCTURE,
    PunctureSpec,
    StarPattern,
    enumerate_subcubes,
    gap_vector_of,
    pattern_from_gaps,
    puncture_choices,
    sub_subcubes,
)


def words(n, i):
    return {p.word for p in enumerate_subcubes(n, i)}


def test_parse_and_print():
    p = StarPattern.parse("[010*]")
    assert p.word == "010*"
    assert str(p) == "[010*]"
    assert StarPattern.parse("010*") == p
    assert (p.n, p.dim, p.ones) == (4, 1, 1)


@pytest.mark.parametrize("bad", ["", "01x", "[01", "2*"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        StarPattern.parse(bad)


def test_gap_vectors():
    assert gap_vector_of(StarPattern("010*")) == (1, 0)
    assert gap_vector_of(StarPattern("01110*0*11*01001*11011")) == (3, 0, 2, 2, 4)
    assert gap_vector_of(StarPattern("0*00*0*")) == (0, 0, 0, 0)


def test_pattern_from_gaps_roundtrip():
    assert pattern_from_gaps((2, 0, 1)).word == "11**1"
    assert gap_vector_of(pattern_from_gaps((3, 0, 2, 2, 4))) == (3, 0, 2, 2, 4)


def test_enumerate_counts():
    assert [p.word for p in enumerate_subcubes(2, 1)] == ["*0", "*1", "0*", "1*"]
    assert len(words(5, 2)) == 80
    assert len(words(5, 3)) == 40
    for n in range(1, 7):
        for i in range(n + 1):
            assert len(words(n, i)) == comb(n, i) * 2 ** (n - i)


def test_enumerate_rejects():
    with pytest.raises(ValueError):
        list(enumerate_subcubes(3, 4))


def test_puncture_parse():
    spec = PunctureSpec.parse("vertex:[0110]")
    assert spec == PunctureSpec.vertex("0110")
    assert str(spec) == "vertex:[0110]"
    assert PunctureSpec.parse("none") == NO_PUNCTURE
    assert PunctureSpec.parse(str(PunctureSpec.edge("1*0"))) == PunctureSpec.edge("1*0")
    with pytest.raises(ValueError):
        PunctureSpec.vertex("01*")
    with pytest.raises(ValueError):
        PunctureSpec.edge("0110")


def test_puncture_choices_counts():
    assert len(puncture_choices(4, "vertex")) == 16
    assert len(puncture_choices(4, "edge")) == 32
    assert puncture_choices(4, "none") == [NO_PUNCTURE]


def test_sub_subcubes_examples():
    host = StarPattern("***00")
    assert len(list(sub_subcubes(host, 1, PunctureSpec.vertex("111")))) == 9
    assert list(sub_subcubes(host, 3)) == [host]
    assert len(list(sub_subcubes(StarPattern("1111*011*10110*101*001"), 2))) == 24


def _contains(big: str, small: str) -> bool:
    return all(b == "*" or b == s for b, s in zip(big, small))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_sub_subcubes_brute_force(data):
    n = data.draw(st.integers(1, 7))
    d = data.draw(st.integers(1, n))
    i = data.draw(st.integers(1, d))
    host = data.draw(st.sampled_from(sorted(words(n, d))))
    got = [q.word for q in sub_subcubes(StarPattern(host), i)]
    assert len(got) == len(set(got)) == comb(d, i) * 2 ** (d - i)
    assert set(got) == {q for q in words(n, i) if _contains(host, q)}
