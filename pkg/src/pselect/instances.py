"""Named example functions: the counterexample instances and small patterns
used throughout the tests and the ``demo`` command."""
from __future__ import annotations

from .functions import Table, ValueSet
from .universe import Universe, Word, slmax

# The three-word instance whose min/max commutativization breaks associativity.
PROP43_WORDS = {"a": "", "b": "0", "c": "1"}
# Partial instances on one length; the minmax counterexample needs b < c < a.
FOOTNOTE4_WORDS = {"a": "10", "b": "00", "c": "01"}
FOOTNOTE5_WORDS = {"a": "00", "b": "01", "c": "10"}


def _extend(universe: Universe, core: dict, core_words, core_wins: bool, name: str,
            single_valued=None) -> Table:
    """Complete a table defined on ``core_words`` to the whole universe.

    Pairs with exactly one core word go to the core word (``core_wins``) or
    to the other word; pairs of two non-core words take the shortlex max.
    """
    values = {}
    for x in universe.words:
        for y in universe.words:
            if x == y:
                if (x, x) in core:
                    values[(x, x)] = core[(x, x)]
                continue
            in_x, in_y = x in core_words, y in core_words
            if in_x and in_y:
                values[(x, y)] = core.get((x, y), set())
            elif in_x or in_y:
                winner = (x if in_x else y) if core_wins else (y if in_x else x)
                values[(x, y)] = {winner}
            else:
                values[(x, y)] = {slmax(x, y)}
    return Table.from_values(universe, values, name=name, single_valued=single_valued)


def prop43_function(universe: Universe | None = None) -> Table:
    """Total, associative, multivalued; its min/max commutativization is not
    associative.  Non-core words trump core words."""
    universe = universe or Universe(1)
    a, b, c = PROP43_WORDS["a"], PROP43_WORDS["b"], PROP43_WORDS["c"]
    core = {
        (a, b): {a}, (b, a): {b},
        (a, c): {a, c}, (c, a): {c},
        (b, c): {b, c}, (c, b): {c},
    }
    return _extend(universe, core, {a, b, c}, core_wins=False, name="prop43",
                   single_valued=False)


def _footnote_core(words: dict) -> dict:
    a, b, c = words["a"], words["b"], words["c"]
    return {
        (a, b): set(), (b, a): set(), (a, c): set(), (c, b): set(),
        (c, a): {c}, (b, c): {c},
        # only this diagonal choice makes the core strongly associative
        (c, c): set(),
    }


def footnote4_function(universe: Universe | None = None) -> Table:
    """Partial single-valued, associative on its three core words; the
    min/max commutativization yields c on one side and nothing on the other."""
    universe = universe or Universe(2)
    w = FOOTNOTE4_WORDS
    return _extend(universe, _footnote_core(w), set(w.values()), core_wins=True,
                   name="footnote4", single_valued=True)


def footnote5_function(universe: Universe | None = None) -> Table:
    """Same value pattern; the union commutativization is not associative."""
    universe = universe or Universe(2)
    w = FOOTNOTE5_WORDS
    return _extend(universe, _footnote_core(w), set(w.values()), core_wins=True,
                   name="footnote5", single_valued=True)


def three_cycle(universe: Universe, a: Word, b: Word, c: Word) -> Table:
    """Single-valued, commutative on {a, b, c}: b beats a, c beats b, a beats c.

    Undefined off the three words.
    """
    values = {
        (a, b): {b}, (b, a): {b},
        (b, c): {c}, (c, b): {c},
        (c, a): {a}, (a, c): {a},
    }
    codes = Table.from_values(universe, values, name="three_cycle", single_valued=True)
    return _restrict_diagonal(codes, {a, b, c})


def _restrict_diagonal(t: Table, keep) -> Table:
    codes = t.table.copy()
    for w in t.universe.words:
        if w not in keep:
            i = t.universe.index(w)
            codes[i, i] = 0
    return Table(t.universe, codes, t.name, t.single_valued)


def first_projection(universe: Universe) -> Table:
    values = {(x, y): {x} for x in universe.words for y in universe.words}
    return Table.from_values(universe, values, name="first", single_valued=True)


__all__ = [
    "PROP43_WORDS", "FOOTNOTE4_WORDS", "FOOTNOTE5_WORDS", "prop43_function",
    "footnote4_function", "footnote5_function", "three_cycle", "first_projection",
    "ValueSet",
]
