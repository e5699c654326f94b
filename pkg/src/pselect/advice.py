"""Per-length advice words and their decoders.

Four kinds:

* ``p``       source node of the induced s-tournament on ``B^{=n}``;
              decode ``x`` as a member iff ``f(x, s) = x``.
* ``np``      shortlex-least word of the source clique on ``B^{=n}``;
              member iff ``x ∈ set-f(u, x)``.
* ``conp``    shortlex-greatest word of the target clique on the complement
              at length ``n``; member iff ``v ∉ set-f(x, v)``.
* ``strong``  source node over all of ``B^{≤n}``, valid for every word of
              length at most ``n``.

Every advice word has exactly ``n + 1`` bits.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .digraph import extremal_clique, extremal_node, induce
from .errors import FormatError, InvariantError, PreconditionError
from .functions import (
    MultiMap,
    PropertyReport,
    TargetSet,
    is_associative_on,
    is_commutative_on,
    is_selector_for,
    is_single_valued_on,
    require_total,
)
from .universe import Word, encode_pair, format_word, slmax, slmin


class AdviceKind(str, enum.Enum):
    P = "p"
    NP = "np"
    CONP = "conp"
    STRONG = "strong"

    @classmethod
    def parse(cls, text) -> "AdviceKind":
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).lower())
        except ValueError:
            raise FormatError(f"unknown advice kind {text!r}; expected p, np, conp or strong") from None


@dataclass(frozen=True)
class AdvicePackage:
    n: int
    kind: AdviceKind
    advice: Word
    selector_name: str = ""

    def __post_init__(self):
        if len(self.advice) != self.n + 1:
            raise InvariantError(f"advice {self.advice} for length {self.n} has {len(self.advice)} bits")

    @property
    def named(self) -> Optional[Word]:
        """The word the advice points at, or None for the flag-only cases."""
        if self.kind is AdviceKind.STRONG:
            return strong_decode_word(self.advice)
        if self.advice[0] == "1":
            return self.advice[1:]
        return None

    def line(self, verified: Optional[bool] = None) -> str:
        s = f"ADVICE n={self.n} word={self.advice}"
        if verified is not None:
            s += f" verify={'PASS' if verified else 'FAIL'}"
        return s


# -- strong-advice encoding --------------------------------------------------

def strong_encode(s: Optional[Word], n: int) -> Word:
    """``n + 1``-bit binary of ``rank(s) + 1``; all zeros when there is no ``s``.

    Equivalently ``0^{n-|s|} 1 s``.
    """
    if s is None:
        return "0" * (n + 1)
    if len(s) > n:
        raise PreconditionError(f"word {format_word(s)} longer than {n}")
    return "0" * (n - len(s)) + "1" + s


def strong_decode_word(advice: Word) -> Optional[Word]:
    k = advice.find("1")
    return None if k < 0 else advice[k + 1:]


# -- checks shared by the extractors ---------------------------------------------

def _ensure(rep: PropertyReport, f: MultiMap, where: str) -> None:
    if not rep:
        raise PreconditionError(f"{f.name} {rep.name} check failed {where}: {rep.text()}", rep.witness)


def _slice(B: TargetSet, n: int, strong: bool) -> tuple[list[Word], list[Word]]:
    u = B.universe
    domain = u.upto(n) if strong else u.exact(n)
    return domain, [w for w in domain if w in B]


def extract_source_advice(f: MultiMap, B: TargetSet, n: int, strong: bool = False) -> AdvicePackage:
    domain, members = _slice(B, n, strong)
    where = f"on {'B up to' if strong else 'B at'} length {n}"
    _ensure(is_selector_for(f, B, domain), f, f"at length {n}")
    if members:
        require_total(f, members, f" {where}")
        _ensure(is_single_valued_on(f, members), f, where)
        _ensure(is_commutative_on(f, members), f, where)
        _ensure(is_associative_on(f, members), f, where)
        s = extremal_node(induce(f, members), "source")
        if s is None:
            raise InvariantError(f"no source node {where} although the tournament is transitive")
    else:
        s = None
    if strong:
        return AdvicePackage(n, AdviceKind.STRONG, strong_encode(s, n), f.name)
    word = "0" * (n + 1) if s is None else "1" + s
    return AdvicePackage(n, AdviceKind.P, word, f.name)


def extract_clique_advice(f: MultiMap, B: TargetSet, n: int, side: str = "np") -> AdvicePackage:
    kind = AdviceKind.parse(side)
    if kind not in (AdviceKind.NP, AdviceKind.CONP):
        raise PreconditionError("clique advice side must be np or conp")
    layer, members = _slice(B, n, strong=False)
    _ensure(is_selector_for(f, B, layer), f, f"at length {n}")
    require_total(f, layer, f" at length {n}")
    _ensure(is_commutative_on(f, layer), f, f"at length {n}")
    if kind is AdviceKind.NP:
        if not members:
            return AdvicePackage(n, kind, "0" * (n + 1), f.name)
        _ensure(is_associative_on(f, members), f, f"on B at length {n}")
        u = slmin(*extremal_clique(induce(f, members), "source"))
        return AdvicePackage(n, kind, "1" + u, f.name)
    outside = [w for w in layer if w not in B]
    if not outside:
        return AdvicePackage(n, kind, "0" + "1" * n, f.name)
    # at length 0 the empty-set flag 0 would collide with the full-set flag,
    # and the named-word branch is sound there, so it is used instead
    if not members and n > 0:
        return AdvicePackage(n, kind, "0" * (n + 1), f.name)
    _ensure(is_associative_on(f, outside), f, f"off B at length {n}")
    v = slmax(*extremal_clique(induce(f, outside), "target"))
    return AdvicePackage(n, kind, "1" + v, f.name)


def extract(f: MultiMap, B: TargetSet, n: int, kind) -> AdvicePackage:
    kind = AdviceKind.parse(kind)
    if kind is AdviceKind.P:
        return extract_source_advice(f, B, n)
    if kind is AdviceKind.STRONG:
        return extract_source_advice(f, B, n, strong=True)
    return extract_clique_advice(f, B, n, kind.value)


# -- decoding -------------------------------------------------------------------

def decode(pkg: AdvicePackage, x: Word, f: MultiMap) -> bool:
    if pkg.kind is AdviceKind.STRONG:
        if len(x) > pkg.n:
            raise PreconditionError(f"word {format_word(x)} longer than advice length {pkg.n}")
    elif len(x) != pkg.n:
        raise PreconditionError(f"word {format_word(x)} does not have length {pkg.n}")
    a = pkg.advice
    if pkg.kind is AdviceKind.CONP:
        if a == "0" + "1" * pkg.n:
            return True
        if a[0] != "1":
            return False
        return a[1:] not in f.values(x, a[1:])
    y = pkg.named
    if y is None:
        return False
    if pkg.kind is AdviceKind.NP:
        return x in f.values(y, x)
    return f.values(x, y) == {x}


def decode_layer(pkg: AdvicePackage, words: list[Word], f: MultiMap) -> np.ndarray:
    """Vectorized :func:`decode` over many words."""
    a = pkg.advice
    y = pkg.named
    if pkg.kind is AdviceKind.CONP:
        if a == "0" + "1" * pkg.n:
            return np.ones(len(words), dtype=bool)
        if a[0] != "1":
            return np.zeros(len(words), dtype=bool)
    if y is None:
        return np.zeros(len(words), dtype=bool)
    others = [w for w in words if w != y]
    cols = others + [y]
    C = f.codes(cols)
    pos = {w: i for i, w in enumerate(cols)}
    j = len(cols) - 1
    out = np.zeros(len(words), dtype=bool)
    for k, x in enumerate(words):
        i = pos[x]
        if pkg.kind is AdviceKind.CONP:
            out[k] = not (C[i, j] & 2) if i != j else C[i, j] == 0
        elif pkg.kind is AdviceKind.NP:
            out[k] = bool(C[j, i] & 2) if i != j else C[j, j] > 0
        else:
            out[k] = C[i, j] == 1
    return out


def verify_roundtrip(f: MultiMap, B: TargetSet, N: int, kind, fast: bool = True) -> PropertyReport:
    kind = AdviceKind.parse(kind)
    u = B.universe
    per_length = {}
    first_fail = None
    for n in range(N + 1):
        pkg = extract(f, B, n, kind)
        words = u.upto(n) if kind is AdviceKind.STRONG else u.exact(n)
        if fast:
            claims = decode_layer(pkg, words, f)
        else:
            claims = np.array([decode(pkg, x, f) for x in words], dtype=bool)
        truth = np.array([w in B for w in words], dtype=bool)
        ok = len(pkg.advice) == n + 1 and bool(np.array_equal(claims, truth))
        per_length[f"n{n}"] = ok
        if not ok and first_fail is None:
            bad = np.flatnonzero(claims != truth)
            witness = (words[bad[0]],) if len(bad) else None
            first_fail = PropertyReport(f"advice_{kind.value}", False, witness,
                                        detail=f"decoding fails at length {n} with advice {pkg.advice}")
    if first_fail is not None:
        first_fail.verdicts = per_length
        return first_fail
    return PropertyReport(f"advice_{kind.value}", True, verdicts=per_length)


def decoder_members(pkg: AdvicePackage, f: MultiMap) -> Iterator[Word]:
    """Pair codes ``<x, advice>`` accepted by the decoder, ``x`` in shortlex order."""
    u = f.universe
    words = u.upto(pkg.n) if pkg.kind is AdviceKind.STRONG else u.exact(pkg.n)
    for x in words:
        if decode(pkg, x, f):
            yield encode_pair(x, pkg.advice)


__all__ = [
    "AdviceKind", "AdvicePackage", "strong_encode", "strong_decode_word",
    "extract_source_advice", "extract_clique_advice", "extract", "decode",
    "decode_layer", "verify_roundtrip", "decoder_members",
]
