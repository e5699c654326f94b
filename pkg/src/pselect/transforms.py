"""Function-to-function constructions.

Commutativizations (min/max argument order, max of both orders, union of
both orders), the connector-based associativizations, the score selector
that is associative at each length, the gap-length selector, and the
MERGE-driven exponential-time selector.

Every connector construction has two evaluation routes: the pairwise rule
(a bounded shortlex scan per pair) and a vectorized bulk path over the whole
universe.  Tests compare the two.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import PreconditionError, RangeError
from .functions import (
    MultiMap,
    Rule,
    TargetSet,
    ValueSet,
    is_commutative_on,
    is_selector_for,
    is_single_valued_on,
    require_total,
    swap_flags,
)
from .universe import Universe, Word, format_word, rank, slmax, slmin, unrank

SCORE_BUDGET = 1 << 28
# precondition scans over the whole universe stop at this many words
CHECK_LIMIT = 1023


def _keys(words: Sequence[Word]) -> np.ndarray:
    return np.array([rank(w) for w in words], dtype=np.int64)


def _max_codes(words: Sequence[Word]) -> np.ndarray:
    k = _keys(words)
    codes = np.where(k[:, None] >= k[None, :], 1, 2).astype(np.uint8)
    return codes


def _check_scope(f: MultiMap) -> list[Word]:
    u = f.universe
    if u.size <= CHECK_LIMIT:
        return list(u.words)
    n = 0
    while (1 << (n + 2)) - 1 <= CHECK_LIMIT:
        n += 1
    return u.upto(n)


def _require(rep, f: MultiMap, what: str):
    if not rep:
        raise PreconditionError(f"{f.name} is not {what}: {rep.text()}", rep.witness)


# -- commutativizations -------------------------------------------------------

def minmax_commutativize(f: MultiMap) -> Rule:
    """``f'(x, y) = f(min(x, y), max(x, y))``."""
    def fn(x, y):
        lo, hi = slmin(x, y), slmax(x, y)
        return ValueSet.of(f.values(lo, hi), x, y)

    def bulk(words):
        C = f.codes(words)
        k = _keys(words)
        return np.where(k[:, None] <= k[None, :], C, swap_flags(C).T).astype(np.uint8)

    return Rule(f.universe, fn, f"prime:{f.name}", f.single_valued, bulk)


def maxvals_commutativize(f: MultiMap) -> Rule:
    """``f''(x, y) = max(f(x, y), f(y, x))`` for single-valued total ``f``."""
    scope = _check_scope(f)
    require_total(f, scope)
    _require(is_single_valued_on(f, scope), f, "single-valued")

    def fn(x, y):
        w = slmax(f.value(x, y), f.value(y, x))
        return ValueSet.of({w}, x, y)

    def bulk(words):
        C = f.codes(words)
        n = len(words)
        idx = np.arange(n)
        first = np.where(C == 1, idx[:, None], idx[None, :])      # f(x, y)
        second = np.where(C.T == 1, idx[None, :], idx[:, None])   # f(y, x)
        k = _keys(words)
        win = np.where(k[first] >= k[second], first, second)
        codes = np.where(win == idx[:, None], 1, 2).astype(np.uint8)
        np.fill_diagonal(codes, 1)
        return codes

    return Rule(f.universe, fn, f"dprime:{f.name}", True, bulk)


def union_commutativize(f: MultiMap) -> Rule:
    """``set-f^(x, y) = set-f(x, y) ∪ set-f(y, x)``."""
    def fn(x, y):
        return ValueSet.of(f.values(x, y) | f.values(y, x), x, y)

    def bulk(words):
        C = f.codes(words)
        return (C | swap_flags(C).T).astype(np.uint8)

    return Rule(f.universe, fn, f"hat:{f.name}", False, bulk)


def _commutative(f: MultiMap) -> MultiMap:
    if is_commutative_on(f, _check_scope(f)):
        return f
    return union_commutativize(f)


# -- connectors ---------------------------------------------------------------

def _clauses(f: MultiMap, x: Word, y: Word, w: Word) -> tuple[bool, bool]:
    fxw, fwy = f.values(x, w), f.values(w, y)
    return (w in fxw and y in fwy), (x in fxw and w in fwy)


def smallest_connector(f: MultiMap, x: Word, y: Word,
                       bound: Optional[Word] = None) -> Optional[Word]:
    """Shortlex-first ``ω`` up to ``bound`` (default min(x, y)) with
    (a) ω ∈ set-f(x, ω) and y ∈ set-f(ω, y), or
    (b) x ∈ set-f(x, ω) and ω ∈ set-f(ω, y)."""
    f.universe.check(x, y)
    bound = slmin(x, y) if bound is None else bound
    top = min(rank(bound), f.universe.size - 1)
    for i in range(top + 1):
        w = unrank(i)
        a, b = _clauses(f, x, y, w)
        if a or b:
            return w
    return None


def _connector_value(f: MultiMap, x: Word, y: Word, bound: Word) -> ValueSet:
    if x == y:
        return ValueSet.FIRST
    w = smallest_connector(f, x, y, bound)
    if w is None:
        winner = slmax(x, y)
    else:
        a, b = _clauses(f, x, y, w)
        winner = y if a and not b else x if b and not a else slmax(x, y)
    return ValueSet.FIRST if winner == x else ValueSet.SECOND


def connector_table(C: np.ndarray, bound: str) -> np.ndarray:
    """Vectorized connector rule over a whole universe in shortlex order.

    ``C`` holds the value codes of a function over every word; ``bound`` is
    ``min`` or ``max`` of the pair's indices.
    """
    M = C.shape[0]
    S = (C & 2).astype(bool)   # S[u, v]: v in set-f(u, v)
    F = (C & 1).astype(bool)   # F[u, v]: u in set-f(u, v)
    d = np.diag_indices(M)
    S[d] = F[d] = np.diag(C) > 0
    idx = np.arange(M)
    out = np.zeros((M, M), dtype=np.uint8)
    for i in range(M):
        A = S[i][:, None] & S                         # [ω, y] clause (a)
        Bc = F[i][:, None] & F                        # [ω, y] clause (b)
        lim = np.minimum(i, idx) if bound == "min" else np.maximum(i, idx)
        hit = (A | Bc) & (idx[:, None] <= lim[None, :])
        has = hit.any(axis=0)
        w = hit.argmax(axis=0)
        a, b = A[w, idx], Bc[w, idx]
        larger = np.where(i >= idx, 1, 2)
        row = np.where(a & ~b, 2, np.where(b & ~a, 1, larger))
        out[i] = np.where(has, row, larger)
    np.fill_diagonal(out, 1)
    return out


class _ConnectorRule(Rule):
    def __init__(self, f: MultiMap, bound: str, spec: str):
        self._base = f
        self._bound = bound
        self._full = None
        pick = slmin if bound == "min" else slmax
        super().__init__(f.universe, lambda x, y: _connector_value(f, x, y, pick(x, y)),
                         spec, True, bulk=self._bulk)

    def full_table(self) -> np.ndarray:
        if self._full is None:
            u = self.universe
            self._full = connector_table(self._base.codes(u.words), self._bound)
            self._full.flags.writeable = False
        return self._full

    def _bulk(self, words):
        idx = [self.universe.index(w) for w in words]
        return self.full_table()[np.ix_(idx, idx)]


def associativize_total(f: MultiMap) -> Rule:
    """Single-valued commutative associative selector from a total one,
    via the smallest connector at or below min(x, y)."""
    require_total(f, None, " (use associativize_partial)")
    return _ConnectorRule(_commutative(f), "min", f"assoc:{f.name}")


def associativize_partial(f: MultiMap) -> Rule:
    """Connector rule with search bound max(x, y); the shortlex maximum
    when no connector lies within the bound."""
    return _ConnectorRule(_commutative(f), "max", f"assocp:{f.name}")


def associativize_full(f: MultiMap) -> Rule:
    h = associativize_partial(f)
    g = associativize_total(h)
    g.name = g.spec = f"assocf:{f.name}"
    return g


# -- score selector -----------------------------------------------------------

def check_budget(n: int, budget: int = SCORE_BUDGET) -> None:
    if 4 ** n > budget:
        raise RangeError(f"length {n} needs {4 ** n} evaluations, over the budget of {budget}")


def length_scores(f: MultiMap, n: int, budget: int = SCORE_BUDGET) -> np.ndarray:
    """Scores of the words of ``Σ^n`` (in lex order) under single-valued ``f``."""
    check_budget(n, budget)
    layer = f.universe.exact(n)
    C = f.codes(layer)
    if np.any(C == 0):
        i, j = np.argwhere(C == 0)[0]
        raise PreconditionError(f"{f.name} is partial at length {n}", (layer[i], layer[j]))
    if np.any(C == 3):
        i, j = np.argwhere(C == 3)[0]
        raise PreconditionError(f"{f.name} is multivalued at length {n}", (layer[i], layer[j]))
    return (C == 1).sum(axis=1)


def score_selector(f: MultiMap, B: TargetSet, budget: int = SCORE_BUDGET) -> Rule:
    """Cross-length pairs defer to ``f``; same-length pairs go to the higher
    score, the shortlex maximum on ties."""
    scope = _check_scope(f)
    require_total(f, scope)
    _require(is_single_valued_on(f, scope), f, "single-valued")
    _require(is_commutative_on(f, scope), f, "commutative")
    _require(is_selector_for(f, B, scope), f, "a selector for the target set")
    check_budget(f.universe.max_len, budget)

    @lru_cache(maxsize=None)
    def scores(n):
        return length_scores(f, n, budget)

    def score_of(w):
        return int(scores(len(w))[int(w, 2) if w else 0])

    def fn(x, y):
        if len(x) != len(y):
            return f.eval(x, y)
        sx, sy = score_of(x), score_of(y)
        if sx != sy:
            return ValueSet.FIRST if sx > sy else ValueSet.SECOND
        return ValueSet.FIRST if slmax(x, y) == x else ValueSet.SECOND

    def bulk(words):
        C = f.codes(words).copy()
        lens = np.array([len(w) for w in words])
        sc = np.array([score_of(w) for w in words])
        k = _keys(words)
        same = lens[:, None] == lens[None, :]
        first = (sc[:, None] > sc[None, :]) | ((sc[:, None] == sc[None, :]) & (k[:, None] >= k[None, :]))
        C[same] = np.where(first, 1, 2)[same]
        return C

    rule = Rule(f.universe, fn, f"score:{f.name}", True, bulk)
    rule.scores = scores
    return rule


# -- gap-length selector ------------------------------------------------------

@dataclass(frozen=True)
class GapLengths:
    lengths: tuple[int, ...]

    def __post_init__(self):
        if list(self.lengths) != sorted(set(self.lengths)) or any(n < 0 for n in self.lengths):
            raise PreconditionError("gap lengths must be distinct, ascending and non-negative")

    @classmethod
    def parse(cls, text: str) -> "GapLengths":
        return cls(tuple(sorted({int(t) for t in text.split(",") if t.strip()})))

    @classmethod
    def default(cls, max_len: int) -> "GapLengths":
        """2, 2^(2^2), ... truncated to ``max_len``."""
        out, n = [], 2
        while n <= max_len:
            out.append(n)
            n = 2 ** (2 ** n)
        return cls(tuple(out))

    def __contains__(self, n) -> bool:
        return n in self.lengths

    def __bool__(self):
        return bool(self.lengths)


def check_gap_set(B: TargetSet, L: GapLengths) -> None:
    """Members only at gap lengths; each length slice lex-upward-closed."""
    for n in range(B.universe.max_len + 1):
        members = B.at_length(n)
        if members and n not in L:
            raise PreconditionError(f"member {format_word(members[0])} has a length outside the gap set",
                                    (members[0],))
        layer = B.universe.exact(n)
        bits = [w in B for w in layer]
        for lo, hi, a, b in zip(layer, layer[1:], bits, bits[1:]):
            if a and not b:
                raise PreconditionError(
                    f"length {n} slice not upward-closed: {format_word(lo)} in, {format_word(hi)} out",
                    (lo, hi))


def gapset_selector(B: TargetSet, L: Optional[GapLengths] = None,
                    universe: Optional[Universe] = None) -> Rule:
    universe = universe or B.universe
    L = L if L is not None else GapLengths.default(universe.max_len)
    if not L:
        raise PreconditionError("gap length set is empty")
    check_gap_set(B, L)

    def winner(x, y):
        ix, iy = len(x) in L, len(y) in L
        if ix and not iy:
            return x
        if iy and not ix:
            return y
        if ix and iy and len(x) < len(y):
            return x if x in B else y
        if ix and iy and len(x) > len(y):
            return y if y in B else x
        return slmax(x, y)

    def fn(x, y):
        return ValueSet.FIRST if winner(x, y) == x else ValueSet.SECOND

    def bulk(words):
        lens = np.array([len(w) for w in words])
        inL = np.isin(lens, L.lengths)
        inB = np.array([w in B for w in words])
        codes = _max_codes(words)
        both = inL[:, None] & inL[None, :]
        shorter = lens[:, None] < lens[None, :]
        longer = lens[:, None] > lens[None, :]
        first = np.where(both & shorter, inB[:, None], np.where(both & longer, ~inB[None, :], codes == 1))
        first = np.where(inL[:, None] & ~inL[None, :], True, first)
        first = np.where(~inL[:, None] & inL[None, :], False, first)
        out = np.where(first, 1, 2).astype(np.uint8)
        np.fill_diagonal(out, 1)
        return out

    lengths = ",".join(map(str, L.lengths))
    return Rule(universe, fn, f"gapset:lengths={lengths}", True, bulk)


# -- MERGE and the exponential-time selector ---------------------------------

@dataclass(frozen=True)
class OrderList:
    """A total order as a list, ascending; the last item is the maximum."""

    items: tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.items)) != len(self.items):
            raise PreconditionError("order list has duplicates")

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def positions(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.items)}

    def respects(self, other: "OrderList") -> bool:
        """``other`` occurs in this list as a subsequence."""
        it = iter(self.items)
        return all(any(w == v for v in it) for w in other.items)

    def text(self) -> str:
        return "(" + ", ".join(format_word(w) for w in self.items) + ")"


def merge_orders(S: OrderList, L: OrderList, g: MultiMap) -> OrderList:
    """MERGE an order on Σ^{≤n} with an order on Σ^{n+1}, guided by ``g``.

    The bare merge loop leaves the ``y`` not consumed by any ``x`` unplaced; they
    are appended after the loop so the output orders all of Σ^{≤n+1}.
    """
    if not S.items:
        raise PreconditionError("first order is empty")
    n = max(len(w) for w in S.items)
    u = g.universe
    if sorted(S.items, key=rank) != u.upto(n):
        raise PreconditionError(f"first order does not list exactly the words up to length {n}")
    if sorted(L.items) != u.exact(n + 1):
        raise PreconditionError(f"second order does not list exactly the words of length {n + 1}")
    xs, ys = S.items, L.items
    out: list[Word] = []
    ell = 0
    for x in xs:
        r = None
        for j in range(len(ys) - 1, ell - 1, -1):
            if g.value(x, ys[j]) == x:
                r = j
                break
        if r is not None:
            out.extend(ys[ell:r + 1])
            ell = r + 1
        out.append(x)
    out.extend(ys[ell:])
    return OrderList(tuple(out))


def length_order(h: MultiMap, n: int) -> OrderList:
    """Order on Σ^n with ``x`` below ``y`` iff ``h(x, y) = y``.

    Valid when ``h`` is single-valued, total and associative at length
    ``n``; the order is then by score, which is a permutation of 1..2^n.
    """
    layer = h.universe.exact(n)
    C = h.codes(layer)
    sc = (C == 1).sum(axis=1)
    if sorted(sc.tolist()) != list(range(1, len(layer) + 1)):
        raise PreconditionError(f"{h.name} does not induce a total order at length {n}")
    return OrderList(tuple(layer[i] for i in np.argsort(sc, kind="stable")))


def etime_selector(B: TargetSet, base: MultiMap, N: Optional[int] = None,
                   budget: int = SCORE_BUDGET) -> tuple[Rule, list[OrderList]]:
    """``f(x, y) = max`` of x and y in ``S_{max(|x|, |y|)}``.

    Returns the selector (over the universe of max length ``N``) together
    with the orders ``S_0 .. S_N``.
    """
    N = base.universe.max_len if N is None else N
    if N < 0 or N > base.universe.max_len:
        raise RangeError(f"upto {N} outside 0..{base.universe.max_len}")
    h = score_selector(base, B, budget)
    orders = [OrderList(("",))]
    for n in range(N):
        orders.append(merge_orders(orders[-1], length_order(h, n + 1), base))
    pos = [orders[m].positions() for m in range(N + 1)]
    universe = Universe(N)

    def fn(x, y):
        p = pos[max(len(x), len(y))]
        return ValueSet.FIRST if p[x] >= p[y] else ValueSet.SECOND

    def bulk(words):
        lens = np.array([len(w) for w in words])
        P = np.array([[pos[m].get(w, -1) for w in words] for m in range(N + 1)])
        m = np.maximum(lens[:, None], lens[None, :])
        cols = np.arange(len(words))
        px = P[m, cols[:, None]]
        py = P[m, cols[None, :]]
        out = np.where(px >= py, 1, 2).astype(np.uint8)
        return out

    f = Rule(universe, fn, f"etime:{base.name}", True, bulk)
    return f, orders


def restrict(B: TargetSet, universe: Universe) -> TargetSet:
    return TargetSet.from_words(universe, [w for w in B.members() if w in universe])
