import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pselect.errors import FormatError, RangeError
from pselect.universe import (
    Ordering,
    Universe,
    decode_pair,
    encode_pair,
    format_word,
    parse_word,
    prefix_search,
    rank,
    setcode,
    setcode_inv,
    shortlex_compare,
    slmax,
    unrank,
)

words = st.text(alphabet="01", max_size=8)


@pytest.mark.parametrize("x,y,expected", [
    ("", "0", Ordering.LT),
    ("10", "01", Ordering.GT),
    ("1", "00", Ordering.LT),
    ("01", "01", Ordering.EQ),
])
def test_shortlex_examples(x, y, expected):
    assert shortlex_compare(x, y) == expected


def test_shortlex_is_strict_total_order():
    ws = Universe(4).words
    for x, y in itertools.product(ws, repeat=2):
        c = shortlex_compare(x, y)
        assert c == -shortlex_compare(y, x)
        assert (c == Ordering.EQ) == (x == y)
    # transitivity over a sample of triples; the key makes it exhaustive-cheap
    for x, y, z in itertools.product(Universe(2).words, repeat=3):
        if shortlex_compare(x, y) == Ordering.LT and shortlex_compare(y, z) == Ordering.LT:
            assert shortlex_compare(x, z) == Ordering.LT


def test_enumeration():
    u = Universe(2)
    assert u.exact(1) == ["0", "1"]
    assert u.upto(1) == ["", "0", "1"]
    assert u.exact(2) == ["00", "01", "10", "11"]
    assert len(u.words) == 7 == u.size
    assert list(u.words) == sorted(u.words, key=lambda w: (len(w), w))
    with pytest.raises(RangeError):
        u.exact(3)
    with pytest.raises(RangeError):
        u.upto(3)


@given(words)
def test_rank_roundtrip(w):
    assert unrank(rank(w)) == w


def test_rank_matches_enumeration():
    for i, w in enumerate(Universe(5).words):
        assert rank(w) == i


def test_pair_examples():
    assert encode_pair("0", "11") == "10011"
    assert encode_pair("", "") == "0"
    assert decode_pair("10011") == ("0", "11")


@given(words, words)
def test_pair_roundtrip(x, w):
    p = encode_pair(x, w)
    assert len(p) == 2 * len(x) + 1 + len(w)
    assert decode_pair(p) == (x, w)


@pytest.mark.parametrize("bad", ["", "111", "1100"])
def test_pair_malformed(bad):
    with pytest.raises(FormatError):
        decode_pair(bad)


def test_setcode_examples():
    assert setcode({"01", "11"}, 2) == "1101"
    assert setcode({"0"}, 1) == "0"
    assert setcode_inv("1101", 2) == {"11", "01"}


def test_setcode_errors():
    with pytest.raises(FormatError):
        setcode({"0", "11"})
    with pytest.raises(FormatError):
        setcode(set())
    with pytest.raises(FormatError):
        setcode_inv("110", 2)
    with pytest.raises(FormatError):
        setcode_inv("0111", 2)


@given(st.integers(1, 4).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.text("01", min_size=n, max_size=n), min_size=1))))
def test_setcode_roundtrip(arg):
    n, ys = arg
    assert setcode_inv(setcode(ys, n), n) == ys


def test_setcodes_injective():
    n = 2
    layer = Universe(n).exact(n)
    codes = {setcode(c, n) for k in range(1, 5) for c in itertools.combinations(layer, k)}
    assert len(codes) == 15


def _counting(pred, n):
    calls = []

    def exists(p):
        calls.append(p)
        return any(pred(p + "".join(t)) for t in itertools.product("01", repeat=n - len(p)))
    return exists, calls


def test_prefix_search_examples():
    exists, calls = _counting(lambda w: w == "01", 2)
    assert prefix_search(2, exists) == "01"
    assert len(calls) <= 5
    exists, _ = _counting(lambda w: w[1] == "1", 2)
    assert prefix_search(2, exists) == "11"
    exists, _ = _counting(lambda w: False, 3)
    assert prefix_search(3, exists) is None


@given(st.integers(0, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.text("01", min_size=n, max_size=n)))))
def test_prefix_search_is_max_of_set(arg):
    n, S = arg
    exists, calls = _counting(S.__contains__, n)
    got = prefix_search(n, exists)
    assert got == (slmax(*S) if S else None)
    assert len(calls) <= 2 * n + 1


def test_prefix_search_detects_inconsistent_predicate():
    with pytest.raises(FormatError):
        prefix_search(2, lambda p: p == "")


def test_text_form():
    assert parse_word("-") == ""
    assert format_word("") == "-"
    with pytest.raises(FormatError):
        parse_word("012")
    with pytest.raises(RangeError):
        Universe(1).check("000")
