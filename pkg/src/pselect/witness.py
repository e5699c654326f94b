"""Scores, the top-score string, dominating covers and printable subsets.

The existence oracles of the constructions are realized by brute force; the
prefix-search structure is kept so query counts mirror the constructions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .digraph import dominating_set, induce
from .errors import FormatError, InvariantError, PreconditionError, RangeError
from .functions import (
    MultiMap,
    TargetSet,
    is_associative_on,
    is_commutative_on,
    is_selector_for,
    is_single_valued_on,
    require_total,
)
from .transforms import length_scores
from .universe import Word, format_word, prefix_search, setcode, sort_words

LEXMAX_GUARD = 5


@dataclass(frozen=True)
class HintSet:
    """Lengths at which the target set is promised to be nonempty."""

    name: str
    pred: Callable[[int], bool]

    def __contains__(self, n: int) -> bool:
        return bool(self.pred(n))

    def lengths(self, upto: int) -> list[int]:
        return [n for n in range(upto + 1) if n in self]

    @classmethod
    def parse(cls, text: str) -> "HintSet":
        if text == "even":
            return cls(text, lambda n: n > 0 and n % 2 == 0)
        if text == "odd":
            return cls(text, lambda n: n % 2 == 1)
        if text == "all":
            return cls(text, lambda n: True)
        if text.startswith("list:"):
            try:
                chosen = frozenset(int(t) for t in text[5:].split(",") if t.strip())
            except ValueError:
                raise FormatError(f"bad hint list {text!r}") from None
            return cls(text, chosen.__contains__)
        raise FormatError(f"unknown hint {text!r}; expected even, odd, all or list:N,M,...")


@dataclass(frozen=True)
class CoverWitness:
    n: int
    members: frozenset
    source: str

    @property
    def code(self) -> Word:
        return setcode(self.members, self.n)

    def dominates(self, f: MultiMap) -> bool:
        """Every ``x`` of length ``n`` has a member ``y`` with ``y ∈ set-f(x, y)``."""
        layer = f.universe.exact(self.n)
        ys = sort_words(self.members)
        return all(any(y in f.values(x, y) for y in ys) for x in layer)

    def text(self) -> str:
        return (f"COVER n={self.n} source={self.source} size={len(self.members)} "
                f"members={','.join(format_word(w) for w in sort_words(self.members, reverse=True))}")


# -- scores ---------------------------------------------------------------------

def score(f: MultiMap, x: Word) -> int:
    """Number of ``z`` of length ``|x|`` with ``f(x, z) = x``, ``x`` itself included."""
    f.universe.check(x)
    return int(length_scores(f, len(x))[int(x, 2) if x else 0])


def _require_length_associative(f: MultiMap, n: int) -> list[Word]:
    layer = f.universe.exact(n)
    require_total(f, layer, f" at length {n}")
    for rep in (is_single_valued_on(f, layer), is_commutative_on(f, layer),
                is_associative_on(f, layer)):
        if not rep:
            raise PreconditionError(f"{f.name} fails {rep.name} at length {n}: {rep.text()}",
                                    rep.witness)
    return layer


def _direct_score(f: MultiMap, z: Word) -> int:
    return sum(f.value(z, w) == z for w in f.universe.exact(len(z)))


def top_string(f: MultiMap, n: int, method: str = "scan") -> Optional[Word]:
    """The unique word of length ``n`` with score ``2^n``."""
    layer = _require_length_associative(f, n)
    full = 1 << n
    if method == "scan":
        sc = length_scores(f, n)
        hits = np.flatnonzero(sc == full)
        if len(hits) != 1:
            raise InvariantError(f"{len(hits)} words reach score {full} at length {n}")
        return layer[hits[0]]
    if method == "prefix_search":
        def exists(p: Word) -> bool:
            rest = n - len(p)
            return any(_direct_score(f, p + "".join(w)) == full
                       for w in itertools.product("01", repeat=rest))
        d = prefix_search(n, exists)
        if d is None:
            raise InvariantError(f"no word reaches score {full} at length {n}")
        return d
    raise ValueError(f"unknown method {method!r}")


# -- covers ---------------------------------------------------------------------

def dominating_cover(f: MultiMap, B: TargetSet, n: int) -> CoverWitness:
    members = B.at_length(n)
    if not members:
        raise PreconditionError(f"target set has no member of length {n}")
    layer = f.universe.exact(n)
    rep = is_selector_for(f, B, layer)
    if not rep:
        raise PreconditionError(f"{f.name} is not a selector at length {n}: {rep.text()}", rep.witness)
    if not is_single_valued_on(f, members):
        raise PreconditionError(f"{f.name} is multivalued on the members of length {n}")
    rep = is_commutative_on(f, members)
    if not rep:
        raise PreconditionError(f"{f.name} is not commutative on the members of length {n}: {rep.text()}",
                                rep.witness)
    D = dominating_set(induce(f, members))
    cover = CoverWitness(n, frozenset(D), "greedy")
    if len(D) > n + 1 or not cover.dominates(f):
        raise InvariantError(f"greedy cover at length {n} fails its guarantee")
    return cover


def _domination_masks(f: MultiMap, layer: list[Word], printed: bool) -> list[int]:
    """Per candidate ``y``, the bit set of ``x`` it handles."""
    C = f.codes(layer)
    if printed:
        ok = (C & 1) == 0          # x ∉ set-f(x, y)
        np.fill_diagonal(ok, np.diag(C) == 0)
    else:
        ok = (C & 2) > 0           # y ∈ set-f(x, y)
        np.fill_diagonal(ok, np.diag(C) > 0)
    return [int(sum(1 << i for i in np.flatnonzero(ok[:, j]))) for j in range(len(layer))]


def lexmax_cover(f: MultiMap, n: int, B: Optional[TargetSet] = None,
                 printed: bool = False) -> Optional[CoverWitness]:
    """Valid cover of at most ``n + 1`` words with the shortlex-largest setcode.

    A candidate ``{y_1, ..., y_j}`` is valid when every ``x`` of length ``n``
    has some ``y_i ∈ set-f(x, y_i)``.  ``printed=True`` uses the literal
    alternative condition ``x ∉ set-f(x, y_i)`` instead.
    """
    if n > LEXMAX_GUARD:
        raise RangeError(f"lexmax_cover is limited to n <= {LEXMAX_GUARD}; use dominating_cover")
    layer = f.universe.exact(n)
    masks = _domination_masks(f, layer, printed)
    full = (1 << len(layer)) - 1
    # candidates in descending order; within one size itertools yields
    # descending setcodes, and longer codes are shortlex-larger
    desc = list(range(len(layer)))[::-1]
    found = None
    for j in range(min(n + 1, len(layer)), 0, -1):
        for combo in itertools.combinations(desc, j):
            acc = 0
            for y in combo:
                acc |= masks[y]
            if acc == full:
                found = combo
                break
        if found:
            break
    if found is None:
        return None
    cover = CoverWitness(n, frozenset(layer[y] for y in found), "lexmax")
    if B is not None and B.at_length(n) and not (cover.members & set(B.at_length(n))):
        raise InvariantError(f"lexmax cover at length {n} misses the target set")
    return cover


def printable_subset(f: MultiMap, B: TargetSet, n: int,
                     mode: str = "lexmax") -> tuple[frozenset, int]:
    """Members of ``B`` among the cover words of every length up to ``n``,
    plus the number of membership queries spent."""
    out: set[Word] = set()
    queries = 0
    for i in range(n + 1):
        if mode == "lexmax":
            cover = lexmax_cover(f, i, B)
        elif mode == "greedy":
            cover = dominating_cover(f, B, i) if B.at_length(i) else None
        else:
            raise ValueError(f"unknown mode {mode!r}")
        if cover is None:
            continue
        queries += len(cover.members)
        out |= {w for w in cover.members if w in B}
    return frozenset(out), queries


def hinted_subset(f: MultiMap, B: TargetSet, T: HintSet, n: int) -> frozenset:
    """Top-score words at the hinted lengths up to ``n``."""
    out = set()
    for i in T.lengths(n):
        if not B.at_length(i):
            raise PreconditionError(f"hint promises a member of length {i} but there is none")
        rep = is_selector_for(f, B, f.universe.exact(i))
        if not rep:
            raise PreconditionError(f"{f.name} is not a selector at length {i}: {rep.text()}", rep.witness)
        d = top_string(f, i)
        if d not in B:
            raise InvariantError(f"top word {format_word(d)} of length {i} is not in the target set")
        out.add(d)
    return frozenset(out)
