import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import random_selector, random_target, upward_closed_sets

from pselect import advice as adv
from pselect.errors import FormatError, InvariantError, PreconditionError
from pselect.functions import Table, TargetSet, enumerate_class, is_associative_on, is_selector_for, maxlex
from pselect.transforms import (
    GapLengths,
    associativize_full,
    associativize_total,
    etime_selector,
    gapset_selector,
    score_selector,
    union_commutativize,
)
from pselect.universe import Universe, decode_pair

seeds = st.integers(0, 2 ** 32 - 1)
KINDS = ["p", "np", "conp", "strong"]


def upward(u, words):
    return TargetSet.from_words(u, words)


def test_source_advice_examples():
    u = Universe(3)
    B = upward(u, ["01", "10", "11"])
    f = maxlex(u)
    assert adv.extract_source_advice(f, B, 2).advice == "101"
    assert adv.extract_source_advice(f, B, 3).advice == "0000"
    strong = adv.extract_source_advice(f, upward(u, ["1", "00", "01", "10", "11"]), 2, strong=True)
    assert strong.named == "1" and strong.advice == "011"


def test_clique_advice_examples():
    u = Universe(1)
    codes = maxlex(u).codes(u.words).copy()
    codes[1, 2] = codes[2, 1] = 3
    f = Table(u, codes)
    B = upward(u, ["0", "1"])
    assert is_selector_for(f, B).passed
    assert adv.extract_clique_advice(f, B, 1, "np").advice == "10"
    u2 = Universe(2)
    full = upward(u2, u2.exact(2))
    assert adv.extract_clique_advice(maxlex(u2), full, 2, "conp").advice == "011"
    B2 = upward(u2, ["01", "10", "11"])
    assert adv.extract_clique_advice(maxlex(u2), B2, 2, "conp").advice == "100"
    assert adv.extract_clique_advice(maxlex(u2), upward(u2, []), 2, "conp").advice == "000"


def test_decode_examples():
    u = Universe(2)
    f = maxlex(u)
    p = adv.AdvicePackage(2, adv.AdviceKind.P, "101")
    assert adv.decode(p, "10", f) is True
    assert adv.decode(p, "00", f) is False
    c = adv.AdvicePackage(2, adv.AdviceKind.CONP, "100")
    assert adv.decode(c, "00", f) is False
    assert adv.decode(c, "01", f) is True
    with pytest.raises(PreconditionError):
        adv.decode(p, "1", f)
    s = adv.AdvicePackage(2, adv.AdviceKind.STRONG, "011")
    assert adv.decode(s, "", f) is False and adv.decode(s, "1", f) is True
    with pytest.raises(PreconditionError):
        adv.decode(s, "000", f)


def test_conp_at_length_zero():
    u = Universe(1)
    f = maxlex(u)
    for B in (upward(u, []), upward(u, ["1"])):
        pkg = adv.extract(f, B, 0, "conp")
        assert len(pkg.advice) == 1
        assert adv.decode(pkg, "", f) is False
    pkg = adv.extract(f, upward(u, ["", "0", "1"]), 0, "conp")
    assert pkg.advice == "0" and adv.decode(pkg, "", f) is True


def test_strong_encoding_roundtrip():
    for n in range(5):
        seen = set()
        for s in [None, *Universe(n).words]:
            a = adv.strong_encode(s, n)
            assert len(a) == n + 1 and adv.strong_decode_word(a) == s
            seen.add(a)
        assert len(seen) == 2 ** (n + 1)
    with pytest.raises(PreconditionError):
        adv.strong_encode("000", 2)


def test_package_invariants():
    with pytest.raises(InvariantError):
        adv.AdvicePackage(2, adv.AdviceKind.P, "10")
    assert adv.AdviceKind.parse("CONP") is adv.AdviceKind.CONP
    assert adv.AdviceKind.parse(adv.AdviceKind.NP) is adv.AdviceKind.NP
    with pytest.raises(FormatError):
        adv.AdviceKind.parse("sharp-p")
    pkg = adv.AdvicePackage(1, adv.AdviceKind.P, "11")
    assert pkg.line() == "ADVICE n=1 word=11"
    assert pkg.line(True) == "ADVICE n=1 word=11 verify=PASS"


def test_extract_rejects_non_associative_slice():
    u = Universe(2)
    codes = maxlex(u).codes(u.words).copy()
    i, j, k = (u.index(w) for w in ("00", "01", "10"))
    # 00 -> 01 -> 10 -> 00 among the members
    codes[i, j], codes[j, i] = 2, 1
    codes[j, k], codes[k, j] = 2, 1
    codes[k, i], codes[i, k] = 2, 1
    f = Table(u, codes)
    B = upward(u, u.exact(2))
    with pytest.raises(PreconditionError) as e:
        adv.extract(f, B, 2, "p")
    assert e.value.witness is not None
    with pytest.raises(PreconditionError):
        adv.extract(f, B, 2, "np")


@given(seeds)
def test_roundtrip_score_selector(seed):
    rng = np.random.default_rng(seed)
    u = Universe(3)
    B = random_target(u, rng)
    base = random_selector(u, B, rng, mode="single", commutative=True)
    g = score_selector(base, B)
    for kind in ("p", "np", "conp"):
        rep = adv.verify_roundtrip(g, B, 3, kind)
        assert rep.passed, rep.text()
        assert all(rep.verdicts.values())
    for n in range(4):
        pkg = adv.extract(g, B, n, "p")
        if pkg.named is not None:
            assert pkg.named in B
            for x in u.exact(n):
                assert (g.value(x, pkg.named) == x) == (x in B)
        np_pkg, co_pkg = adv.extract(g, B, n, "np"), adv.extract(g, B, n, "conp")
        if np_pkg.named is not None:
            assert np_pkg.named in B
        if co_pkg.named is not None:
            assert co_pkg.named not in B


def test_roundtrip_gapset_and_etime():
    u = Universe(3)
    for B in upward_closed_sets(u, [1, 2]):
        f = gapset_selector(B, GapLengths((1, 2)))
        for kind in KINDS:
            assert adv.verify_roundtrip(f, B, 3, kind).passed
    rng = np.random.default_rng(7)
    for _ in range(10):
        B = random_target(u, rng)
        base = random_selector(u, B, rng, mode="single", commutative=True)
        f, _ = etime_selector(B, base)
        for kind in KINDS:
            assert adv.verify_roundtrip(f, B, 3, kind).passed


@given(seeds, st.booleans())
def test_roundtrip_connector_selectors(seed, total):
    rng = np.random.default_rng(seed)
    u = Universe(2)
    B = random_target(u, rng)
    f = random_selector(u, B, rng, mode="multi", total=total)
    k = associativize_full(f)
    for kind in KINDS:
        assert adv.verify_roundtrip(k, B, 2, kind).passed
    if total:
        g = associativize_total(f)
        for kind in KINDS:
            assert adv.verify_roundtrip(g, B, 2, kind).passed


def test_roundtrip_union_of_enumerated_associative():
    u = Universe(1)
    for f in enumerate_class(u.words, "multi"):
        if not is_associative_on(f):
            continue
        fh = union_commutativize(f)
        for bits in itertools.product([False, True], repeat=3):
            B = TargetSet(u, np.array(bits))
            if not is_selector_for(fh, B):
                continue
            for kind in ("np", "conp"):
                assert adv.verify_roundtrip(fh, B, 1, kind).passed


@given(seeds, st.sampled_from(KINDS))
def test_fast_and_pointwise_decoding_agree(seed, kind):
    rng = np.random.default_rng(seed)
    u = Universe(2)
    B = random_target(u, rng)
    g = associativize_full(random_selector(u, B, rng, mode="multi", total=False))
    for n in range(3):
        pkg = adv.extract(g, B, n, kind)
        words = u.upto(n) if kind == "strong" else u.exact(n)
        slow = [adv.decode(pkg, x, g) for x in words]
        assert adv.decode_layer(pkg, words, g).tolist() == slow
    assert adv.verify_roundtrip(g, B, 2, kind, fast=False).passed


def test_decoder_members():
    u = Universe(2)
    B = upward(u, ["01", "10", "11"])
    pkg = adv.extract(maxlex(u), B, 2, "p")
    members = list(adv.decoder_members(pkg, maxlex(u)))
    assert [decode_pair(m) for m in members] == [(x, "101") for x in ("01", "10", "11")]
