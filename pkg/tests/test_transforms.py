import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import (
    naive_connector_rule,
    random_ordinal_sum,
    random_selector,
    random_target,
    upward_closed_sets,
)

from pselect.errors import PreconditionError, RangeError
from pselect.functions import (
    MultiMap,
    Table,
    TargetSet,
    ValueSet,
    canonical_selector,
    enumerate_class,
    is_associative_at_each_length,
    is_associative_on,
    is_commutative_on,
    is_selector_for,
    is_strongly_associative_on,
    is_total_on,
    maxlex,
    minlex,
    pointwise_equal,
    undefined_everywhere,
)
from pselect.instances import (
    FOOTNOTE4_WORDS,
    FOOTNOTE5_WORDS,
    PROP43_WORDS,
    first_projection,
    footnote4_function,
    footnote5_function,
    prop43_function,
)
from pselect import transforms as tf
from pselect.universe import Universe

seeds = st.integers(0, 2 ** 32 - 1)


def pairwise(f, words=None):
    """Codes through the per-pair procedure, bypassing any bulk path."""
    return MultiMap.codes(f, list(f.universe.words if words is None else words))


def both_routes_agree(f):
    return np.array_equal(pairwise(f), f.codes(f.universe.words))


# -- commutativizations --------------------------------------------------------

def test_minmax_breaks_associativity_values():
    a, b, c = (PROP43_WORDS[k] for k in "abc")
    fp = tf.minmax_commutativize(prop43_function())
    assert fp.values(a, c) == {a, c}
    assert fp.values(a, b) == {a}
    assert fp.values(b, c) == {b, c}
    assert is_commutative_on(fp).passed


def test_commutative_inputs_are_fixed_points():
    u = Universe(2)
    f = maxlex(u)
    for g in (tf.minmax_commutativize(f), tf.maxvals_commutativize(f), tf.union_commutativize(f)):
        assert pointwise_equal(f, g)


def test_maxvals_of_first_projection_is_maxlex():
    u = Universe(2)
    assert pointwise_equal(tf.maxvals_commutativize(first_projection(u)), maxlex(u))
    with pytest.raises(PreconditionError):
        tf.maxvals_commutativize(prop43_function())
    with pytest.raises(PreconditionError):
        tf.maxvals_commutativize(footnote5_function())


def test_union_commutativization_counterexamples():
    a, b, c = (PROP43_WORDS[k] for k in "abc")
    fh = tf.union_commutativize(prop43_function())
    assert fh.values(a, b) == {a, b} and fh.values(a, c) == {a, c} and fh.values(b, c) == {b, c}
    w = FOOTNOTE5_WORDS
    rep = is_strongly_associative_on(tf.union_commutativize(footnote5_function()), list(w.values()))
    assert not rep.passed and rep.values == ({w["c"]}, frozenset())


def test_minmax_single_valued_counterexample():
    w = FOOTNOTE4_WORDS
    f = footnote4_function()
    fp = tf.minmax_commutativize(f)
    left = frozenset().union(*(fp.values(w["a"], v) for v in fp.values(w["b"], w["c"])))
    right = frozenset().union(*(fp.values(v, w["c"]) for v in fp.values(w["a"], w["b"])))
    assert (left, right) == ({w["c"]}, frozenset())
    assert is_strongly_associative_on(f, list(w.values())).passed


@given(seeds, st.sampled_from(["single", "multi"]), st.booleans())
def test_commutativizations_routes_agree(seed, mode, total):
    rng = np.random.default_rng(seed)
    u = Universe(2)
    f = random_selector(u, random_target(u, rng), rng, mode=mode, total=total)
    for g in (tf.minmax_commutativize(f), tf.union_commutativize(f)):
        assert both_routes_agree(g)
        assert is_commutative_on(g).passed
    if mode == "single" and total:
        assert both_routes_agree(tf.maxvals_commutativize(f))


@given(seeds, st.integers(1, 3))
def test_single_valued_preservation(seed, N):
    rng = np.random.default_rng(seed)
    f = random_ordinal_sum(Universe(N), rng, "single")
    assert is_associative_on(tf.minmax_commutativize(f)).passed
    assert is_associative_on(tf.maxvals_commutativize(f)).passed


@given(seeds, st.integers(1, 3))
def test_union_preserves_total_multivalued(seed, N):
    rng = np.random.default_rng(seed)
    f = random_ordinal_sum(Universe(N), rng, "multi")
    assert is_associative_on(tf.union_commutativize(f)).passed


@given(seeds)
def test_per_length_preservation(seed):
    rng = np.random.default_rng(seed)
    u = Universe(3)
    codes = np.zeros((u.size, u.size), np.uint8)
    multi = np.zeros_like(codes)
    for n in range(4):
        layer = u.exact(n)
        idx = np.ix_([u.index(w) for w in layer], [u.index(w) for w in layer])
        codes[idx] = random_ordinal_sum(u, rng, "single", words=layer).codes(u.words)[idx]
        multi[idx] = random_ordinal_sum(u, rng, "multi", words=layer).codes(u.words)[idx]
    f, g = Table(u, codes), Table(u, multi)
    assert is_associative_at_each_length(tf.minmax_commutativize(f)).passed
    assert is_associative_at_each_length(tf.union_commutativize(g)).passed


# -- connectors ---------------------------------------------------------------

def test_smallest_connector_examples():
    u = Universe(2)
    f = maxlex(u)
    for x, y in itertools.combinations(u.words, 2):
        assert tf.smallest_connector(f, x, y) == x
        assert tf.smallest_connector(f, y, x) == x
    nowhere = undefined_everywhere(u)
    assert tf.smallest_connector(nowhere, "00", "01", bound="1") is None


@given(seeds, st.integers(1, 2))
def test_total_connector_within_bound(seed, N):
    rng = np.random.default_rng(seed)
    u = Universe(N)
    f = random_selector(u, random_target(u, rng), rng, mode="multi")
    for x, y in itertools.product(u.words, repeat=2):
        w = tf.smallest_connector(f, x, y)
        assert w is not None and (len(w), w) <= min((len(x), x), (len(y), y))


def test_associativize_total_examples():
    u = Universe(3)
    assert pointwise_equal(tf.associativize_total(maxlex(u)), maxlex(u))
    both = Table(u, np.full((u.size, u.size), 3, np.uint8))
    assert pointwise_equal(tf.associativize_total(both), maxlex(u))
    with pytest.raises(PreconditionError):
        tf.associativize_total(footnote5_function())


def test_associativize_partial_examples():
    u = Universe(2)
    assert pointwise_equal(tf.associativize_partial(undefined_everywhere(u)), maxlex(u))
    assert pointwise_equal(tf.associativize_full(undefined_everywhere(u)), maxlex(u))
    w = FOOTNOTE5_WORDS
    B = TargetSet.from_words(u, [w["c"]])
    codes = footnote5_function().table.copy()
    ic = u.index(w["c"])
    codes[ic, :], codes[:, ic] = 1, 2
    codes[ic, ic] = 1
    f = Table(u, codes, name="footnote5_style")
    assert is_selector_for(f, B).passed and not is_total_on(f).passed
    h = tf.associativize_partial(f)
    assert h.values(w["a"], w["b"])
    assert is_selector_for(h, B).passed and is_associative_on(h, [w["c"]]).passed


@given(seeds, st.integers(1, 3), st.booleans())
def test_connector_routes_agree(seed, N, total):
    rng = np.random.default_rng(seed)
    u = Universe(N)
    f = random_selector(u, random_target(u, rng), rng, mode="multi", total=total)
    rules = [tf.associativize_partial(f)] + ([tf.associativize_total(f)] if total else [])
    for g in rules:
        assert both_routes_agree(g)


@given(seeds, st.booleans())
def test_connector_rule_matches_case_table(seed, total):
    rng = np.random.default_rng(seed)
    u = Universe(2)
    f = random_selector(u, random_target(u, rng), rng, mode="multi", total=total, commutative=True)
    h = tf.associativize_partial(f)
    for x, y in itertools.product(u.words, repeat=2):
        bound = max(x, y, key=lambda s: (len(s), s))
        assert h.value(x, y) == naive_connector_rule(f, x, y, bound)
    if total:
        g = tf.associativize_total(f)
        for x, y in itertools.product(u.words, repeat=2):
            bound = min(x, y, key=lambda s: (len(s), s))
            assert g.value(x, y) == naive_connector_rule(f, x, y, bound)


def test_associativize_contracts_on_three_words():
    u = Universe(1)
    for f in enumerate_class(u.words, "multi", commutative_only=False):
        g = tf.associativize_total(f)
        h = tf.associativize_partial(f)
        k = tf.associativize_full(f)
        assert is_associative_on(g).passed and is_commutative_on(g).passed
        assert is_associative_on(k).passed
        for bits in itertools.product([False, True], repeat=3):
            B = TargetSet(u, np.array(bits))
            if is_selector_for(f, B):
                assert is_selector_for(g, B).passed
                assert is_selector_for(h, B).passed and is_associative_on(h, B.members()).passed
                assert is_selector_for(k, B).passed


# -- score selector -------------------------------------------------------------

def test_score_selector_of_maxlex():
    u = Universe(3)
    B = TargetSet.from_words(u, u.words[-3:])
    g = tf.score_selector(maxlex(u), B)
    assert pointwise_equal(g, maxlex(u))
    assert g.scores(2).tolist() == [1, 2, 3, 4]
    assert both_routes_agree(g)


def test_score_selector_preconditions():
    u = Universe(2)
    B = TargetSet.from_words(u, ["11"])
    with pytest.raises(PreconditionError):
        tf.score_selector(first_projection(u), B)
    with pytest.raises(PreconditionError):
        tf.score_selector(maxlex(u), TargetSet.from_words(u, ["00"]))
    with pytest.raises(RangeError):
        tf.check_budget(15)


@given(seeds)
def test_score_selector_properties(seed):
    rng = np.random.default_rng(seed)
    u = Universe(3)
    B = random_target(u, rng)
    f = random_selector(u, B, rng, mode="single", commutative=True)
    g = tf.score_selector(f, B)
    assert is_selector_for(g, B).passed
    assert is_associative_at_each_length(g).passed
    assert both_routes_agree(g)
    for n in range(4):
        for x in B.at_length(n):
            for y in B.outside_at_length(n):
                assert g.value(x, y) == x


# -- gap-length selector --------------------------------------------------------

def test_gapset_examples():
    u = Universe(2)
    B = TargetSet.from_words(u, ["1", "10", "11"])
    f = tf.gapset_selector(B, tf.GapLengths((1, 2)))
    assert f.value("0", "10") == "10"
    assert f.value("1", "00") == "1"
    g = tf.gapset_selector(TargetSet.from_words(u, ["11"]), tf.GapLengths((2,)))
    assert g.value("0", "10") == "10"
    assert both_routes_agree(f) and both_routes_agree(g)


def test_gapset_default_lengths():
    assert tf.GapLengths.default(3).lengths == (2,)
    assert tf.GapLengths.default(16).lengths == (2, 16)
    assert tf.GapLengths.parse("2, 1").lengths == (1, 2)


def test_gapset_preconditions():
    u = Universe(2)
    with pytest.raises(PreconditionError) as e:
        tf.gapset_selector(TargetSet.from_words(u, ["1"]), tf.GapLengths((2,)))
    assert e.value.witness == ("1",)
    with pytest.raises(PreconditionError) as e:
        tf.gapset_selector(TargetSet.from_words(u, ["10"]), tf.GapLengths((2,)))
    assert e.value.witness == ("10", "11")
    with pytest.raises(PreconditionError):
        tf.gapset_selector(TargetSet.from_words(u, []), tf.GapLengths(()))


def test_gapset_exhaustive_maxlen3():
    u = Universe(3)
    L = tf.GapLengths((1, 3))
    for B in upward_closed_sets(u, [1, 3]):
        f = tf.gapset_selector(B, L)
        assert is_associative_on(f).passed and is_commutative_on(f).passed
        assert is_selector_for(f, B).passed


# -- MERGE and the exponential-time selector --------------------------------------

def test_merge_micro_examples():
    u = Universe(1)
    S0 = tf.OrderList(("",))
    out = tf.merge_orders(S0, tf.OrderList(("0", "1")), maxlex(u))
    assert out.items == ("", "0", "1")
    out = tf.merge_orders(S0, tf.OrderList(("1", "0")), minlex(u))
    assert out.items == ("1", "0", "")
    with pytest.raises(PreconditionError):
        tf.merge_orders(S0, tf.OrderList(("0",)), maxlex(u))
    with pytest.raises(PreconditionError):
        tf.OrderList(("0", "0"))


def test_etime_example():
    u = Universe(1)
    B = TargetSet.from_words(u, ["", "0"])
    f, orders = tf.etime_selector(B, minlex(u))
    assert orders[1].items == ("1", "0", "")
    assert f.value("1", "0") == "0" and f.value("1", "") == "" and f.value("0", "") == ""
    assert is_selector_for(f, B).passed


@given(seeds)
def test_etime_properties(seed):
    rng = np.random.default_rng(seed)
    u = Universe(3)
    B = random_target(u, rng)
    base = random_selector(u, B, rng, mode="single", commutative=True)
    f, orders = tf.etime_selector(B, base)
    assert is_associative_on(f).passed and is_commutative_on(f).passed
    assert is_selector_for(f, B).passed
    assert both_routes_agree(f)
    h = tf.score_selector(base, B)
    for n in range(3):
        assert orders[n + 1].respects(orders[n])
        assert orders[n + 1].respects(tf.length_order(h, n + 1))
        assert sorted(orders[n + 1].items, key=lambda s: (len(s), s)) == u.upto(n + 1)
    for x, y, z in itertools.product(u.upto(2), repeat=3):
        top = max((x, y, z), key=orders[2].positions().get)
        assert f.value(x, f.value(y, z)) == top == f.value(f.value(x, y), z)


def test_etime_range():
    u = Universe(2)
    with pytest.raises(RangeError):
        tf.etime_selector(TargetSet.from_words(u, []), maxlex(u), N=3)
    f, orders = tf.etime_selector(TargetSet.from_words(u, []), maxlex(u), N=1)
    assert f.universe.max_len == 1 and len(orders) == 2


def test_canonical_selector_selects():
    u = Universe(2)
    B = TargetSet.from_words(u, ["0", "11"])
    g = canonical_selector(B)
    assert is_selector_for(g, B).passed and is_associative_on(g).passed
    assert both_routes_agree(g)
    assert is_total_on(g).passed and g.values("0", "0") == {"0"}
    assert g.eval("1", "0") == ValueSet.SECOND
