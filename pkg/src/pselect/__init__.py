"""Selector functions over bounded binary-string universes: property checks,
induced digraphs, commutativizing and associativizing transforms, advice
extraction and printable-subset witnesses."""
from .errors import FormatError, InvariantError, PreconditionError, RangeError, SelectorError
from .universe import Universe, Word, shortlex_compare, sort_words
from .functions import MultiMap, PropertyReport, Rule, Table, TargetSet, ValueSet, maxlex, minlex

__all__ = [
    "FormatError", "InvariantError", "PreconditionError", "RangeError", "SelectorError",
    "Universe", "Word", "shortlex_compare", "sort_words",
    "MultiMap", "PropertyReport", "Rule", "Table", "TargetSet", "ValueSet", "maxlex", "minlex",
]
