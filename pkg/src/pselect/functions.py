"""Self-contained 2-ary (partial, multivalued) functions, target sets and
the algebraic property checkers that operate on them.

A value ``set-f(x, y)`` is always a subset of ``{x, y}``, so it is stored as
two flags (:class:`ValueSet`).  Property checks materialize ``f`` on the
domain of interest as a small code matrix and evaluate the defining
equations directly; nothing here goes through digraphs.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import PreconditionError, RangeError
from .universe import Universe, Word, format_word, format_words, slmax, sort_words


class ValueSet(enum.IntFlag):
    """Which of the two arguments belong to ``set-f(x, y)``."""

    NONE = 0
    FIRST = 1
    SECOND = 2
    BOTH = 3

    def members(self, x: Word, y: Word) -> frozenset[Word]:
        out = set()
        if self & ValueSet.FIRST:
            out.add(x)
        if self & ValueSet.SECOND:
            out.add(y)
        return frozenset(out)

    @classmethod
    def of(cls, members: Iterable[Word], x: Word, y: Word) -> "ValueSet":
        members = set(members)
        if not members <= {x, y}:
            raise PreconditionError(
                f"value set {format_words(members)} is not a subset of "
                f"{{{format_word(x)}, {format_word(y)}}}")
        v = cls.NONE
        if x in members:
            v |= cls.FIRST
        if y in members:
            v |= cls.SECOND
        return normalize(v, x, y)


def normalize(v: ValueSet, x: Word, y: Word) -> ValueSet:
    # on the diagonal both flags name the same word
    if x == y and v:
        return ValueSet.FIRST
    return ValueSet(v)


def swap_flags(codes: np.ndarray) -> np.ndarray:
    return ((codes & 1) << 1) | ((codes & 2) >> 1)


class MultiMap:
    """A self-contained 2-ary function on a bounded universe."""

    backend = "abstract"

    def __init__(self, universe: Universe, name: str, single_valued: bool = False):
        self.universe = universe
        self.name = name
        self.single_valued = single_valued

    def _eval(self, x: Word, y: Word) -> ValueSet:
        raise NotImplementedError

    def eval(self, x: Word, y: Word) -> ValueSet:
        self.universe.check(x, y)
        return normalize(self._eval(x, y), x, y)

    __call__ = eval

    def values(self, x: Word, y: Word) -> frozenset[Word]:
        return self.eval(x, y).members(x, y)

    def value(self, x: Word, y: Word) -> Optional[Word]:
        """The single value, or None when undefined; multivalued is an error."""
        vs = self.values(x, y)
        if len(vs) > 1:
            raise PreconditionError(f"{self.name} is multivalued at "
                                    f"({format_word(x)}, {format_word(y)})", (x, y))
        return next(iter(vs), None)

    def defined(self, x: Word, y: Word) -> bool:
        return bool(self.eval(x, y))

    def codes(self, words: Sequence[Word]) -> np.ndarray:
        """Value-set codes of every ordered pair over ``words`` (row = x)."""
        k = len(words)
        out = np.zeros((k, k), dtype=np.uint8)
        for i, x in enumerate(words):
            for j, y in enumerate(words):
                out[i, j] = self.eval(x, y)
        return out

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} maxlen={self.universe.max_len}>"


class Table(MultiMap):
    """Explicit value set per ordered pair of the whole universe."""

    backend = "table"

    def __init__(self, universe: Universe, codes: np.ndarray, name: str = "table",
                 single_valued: Optional[bool] = None):
        n = universe.size
        codes = np.array(codes, dtype=np.uint8)
        if codes.shape != (n, n):
            raise RangeError(f"table shape {codes.shape} does not match universe size {n}")
        if codes.max(initial=0) > 3:
            raise PreconditionError("table codes must lie in 0..3")
        diag = np.diag_indices(n)
        codes[diag] = np.where(codes[diag] > 0, 1, 0)
        off = ~np.eye(n, dtype=bool)
        multi = bool(np.any((codes == 3) & off))
        if single_valued is None:
            single_valued = not multi
        elif single_valued and multi:
            i, j = np.argwhere((codes == 3) & off)[0]
            w = universe.words
            raise PreconditionError(f"table declared single-valued but multivalued at "
                                    f"({format_word(w[i])}, {format_word(w[j])})",
                                    (w[i], w[j]))
        codes.flags.writeable = False
        super().__init__(universe, name, single_valued)
        self.table = codes

    @classmethod
    def from_values(cls, universe: Universe, values: dict, name="table",
                    single_valued=None, default_diagonal=True) -> "Table":
        """Build from ``{(x, y): set of words}``; unlisted pairs are undefined."""
        codes = np.zeros((universe.size, universe.size), dtype=np.uint8)
        if default_diagonal:
            np.fill_diagonal(codes, 1)
        for (x, y), vals in values.items():
            codes[universe.index(x), universe.index(y)] = ValueSet.of(vals, x, y)
        return cls(universe, codes, name, single_valued)

    def _eval(self, x, y):
        return ValueSet(int(self.table[self.universe.index(x), self.universe.index(y)]))

    def codes(self, words):
        idx = [self.universe.index(w) for w in words]
        return self.table[idx][:, idx]


class Rule(MultiMap):
    """A deterministic evaluation procedure plus a readable spec string.

    ``bulk``, when given, computes :meth:`codes` for many words at once and
    must agree with the pairwise procedure.
    """

    backend = "rule"

    def __init__(self, universe: Universe, fn: Callable[[Word, Word], ValueSet],
                 spec: str, single_valued: bool = False,
                 bulk: Optional[Callable[[Sequence[Word]], np.ndarray]] = None,
                 memo: bool = False):
        super().__init__(universe, spec, single_valued)
        self.fn = fn
        self.spec = spec
        self.bulk = bulk
        self._memo = {} if memo else None

    def _eval(self, x, y):
        if self._memo is None:
            return ValueSet(self.fn(x, y))
        key = (x, y)
        v = self._memo.get(key)
        if v is None:
            v = self._memo[key] = ValueSet(self.fn(x, y))
        return v

    def codes(self, words):
        if self.bulk is not None:
            out = np.array(self.bulk(list(words)), dtype=np.uint8)
            d = np.diag_indices(len(out))
            out[d] = np.minimum(out[d], 1)
            return out
        return super().codes(words)


def materialize(f: MultiMap, name: Optional[str] = None) -> Table:
    """Tabulate ``f`` over its whole universe."""
    if isinstance(f, Table):
        return f
    return Table(f.universe, f.codes(f.universe.words), name or f.name, f.single_valued)


def pointwise_equal(f: MultiMap, g: MultiMap, words: Optional[Sequence[Word]] = None) -> bool:
    words = list(f.universe.words if words is None else words)
    return bool(np.array_equal(f.codes(words), g.codes(words)))


# -- target sets --------------------------------------------------------------

class TargetSet:
    """A finite set ``B`` of words in a universe, one membership bit per word."""

    def __init__(self, universe: Universe, bits: np.ndarray):
        bits = np.array(bits, dtype=bool)
        if bits.shape != (universe.size,):
            raise RangeError("membership vector does not match universe size")
        bits.flags.writeable = False
        self.universe = universe
        self.bits = bits

    @classmethod
    def from_words(cls, universe: Universe, words: Iterable[Word]) -> "TargetSet":
        bits = np.zeros(universe.size, dtype=bool)
        for w in words:
            bits[universe.index(w)] = True
        return cls(universe, bits)

    @classmethod
    def from_predicate(cls, universe: Universe, pred: Callable[[Word], bool]) -> "TargetSet":
        return cls(universe, np.array([bool(pred(w)) for w in universe.words], dtype=bool))

    def __contains__(self, w) -> bool:
        return w in self.universe and bool(self.bits[self.universe.index(w)])

    def members(self) -> list[Word]:
        words = self.universe.words
        return [words[i] for i in np.flatnonzero(self.bits)]

    def at_length(self, n: int) -> list[Word]:
        return [w for w in self.universe.exact(n) if w in self]

    def outside_at_length(self, n: int) -> list[Word]:
        return [w for w in self.universe.exact(n) if w not in self]

    def upto(self, n: int) -> list[Word]:
        return [w for w in self.universe.upto(n) if w in self]

    def __len__(self):
        return int(self.bits.sum())

    def __bool__(self):
        return bool(self.bits.any())

    def __eq__(self, other):
        return (isinstance(other, TargetSet) and self.universe == other.universe
                and np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.universe, self.bits.tobytes()))

    def __repr__(self):
        return f"TargetSet({format_words(self.members())})"


# -- reports ------------------------------------------------------------------

@dataclass
class PropertyReport:
    """Verdict of one property check.  A failing report carries a witness."""

    name: str
    passed: bool
    witness: Optional[tuple] = None
    values: Optional[tuple] = None
    detail: str = ""
    verdicts: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        parts = [f"CHECK prop={self.name}", f"verdict={self.verdict}"]
        if self.witness:
            parts.append("witness=" + ",".join(format_word(w) for w in self.witness))
        if self.values:
            parts.append("values=" + "|".join(
                ",".join(format_word(w) for w in sort_words(v)) or "none"
                for v in self.values))
        for k, v in self.verdicts.items():
            parts.append(f"{k}={'yes' if v else 'no'}")
        return " ".join(parts)

    def text(self) -> str:
        s = f"{self.verdict} {self.name}"
        if self.witness:
            s += " witness (" + ", ".join(format_word(w) for w in self.witness) + ")"
        if self.values:
            s += " values " + " vs ".join(format_words(v) for v in self.values)
        if self.detail:
            s += f": {self.detail}"
        return s


# -- evaluation helpers -------------------------------------------------------

def _domain(f: MultiMap, D: Optional[Iterable[Word]]) -> list[Word]:
    if D is None:
        return list(f.universe.words)
    words = sort_words(set(D))
    f.universe.check(*words)
    return words


def eval_ext(f: MultiMap, A: Iterable[Word], y: Word, side: str = "left") -> frozenset[Word]:
    """``set-f(A, y)`` (side ``left``) or ``set-f(y, A)`` (side ``right``)."""
    out: set[Word] = set()
    for a in A:
        out |= f.values(a, y) if side == "left" else f.values(y, a)
    return frozenset(out)


def nested_values(f: MultiMap, a: Word, b: Word, c: Word) -> tuple[frozenset, frozenset]:
    """``(set-f(a, set-f(b, c)), set-f(set-f(a, b), c))`` by direct evaluation."""
    return (eval_ext(f, f.values(b, c), a, side="right"),
            eval_ext(f, f.values(a, b), c, side="left"))


def membership_tensor(codes: np.ndarray) -> np.ndarray:
    """``V[i, j, m]`` is true iff word ``m`` is in ``set-f(word i, word j)``."""
    k = codes.shape[0]
    V = np.zeros((k, k, k), dtype=bool)
    ii, jj = np.indices((k, k))
    V[ii, jj, ii] |= (codes & 1).astype(bool)
    V[ii, jj, jj] |= (codes & 2).astype(bool)
    return V


def _nested(V: np.ndarray):
    """Yield ``(a, left, right)`` per first argument, where
    ``left[b, c]`` = set-f(a, set-f(b, c)) and ``right[b, c]`` =
    set-f(set-f(a, b), c), both as membership vectors."""
    k = V.shape[0]
    Vf = V.astype(np.float32)
    flat_bc = Vf.reshape(k * k, k)
    flat_cz = Vf.reshape(k, k * k)
    for a in range(k):
        left = (flat_bc @ Vf[a]).reshape(k, k, k) > 0.5
        right = (Vf[a] @ flat_cz).reshape(k, k, k) > 0.5
        yield a, left, right


def _members(vec: np.ndarray, words: Sequence[Word]) -> frozenset[Word]:
    return frozenset(words[m] for m in np.flatnonzero(vec))


def _first_undefined(codes: np.ndarray, words: Sequence[Word]):
    bad = np.argwhere(codes == 0)
    if len(bad):
        i, j = bad[0]
        return words[i], words[j]
    return None


def _associativity(f: MultiMap, words: list[Word], name: str, weak: bool) -> PropertyReport:
    V = membership_tensor(f.codes(words))
    for a, left, right in _nested(V):
        bad = np.any(left != right, axis=2)
        if weak:
            bad &= left.any(axis=2) & right.any(axis=2)
        if bad.any():
            b, c = np.argwhere(bad)[0]
            return PropertyReport(
                name, False, (words[a], words[b], words[c]),
                (_members(left[b, c], words), _members(right[b, c], words)),
                "set-f(a, set-f(b, c)) differs from set-f(set-f(a, b), c)")
    return PropertyReport(name, True)


# -- checkers -----------------------------------------------------------------

def is_total_on(f: MultiMap, D=None) -> PropertyReport:
    words = _domain(f, D)
    hole = _first_undefined(f.codes(words), words)
    if hole:
        return PropertyReport("total", False, hole, (frozenset(),), "undefined pair")
    return PropertyReport("total", True)


def is_commutative_on(f: MultiMap, D=None) -> PropertyReport:
    words = _domain(f, D)
    C = f.codes(words)
    bad = C != swap_flags(C).T
    np.fill_diagonal(bad, False)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        x, y = words[i], words[j]
        return PropertyReport("commutative", False, (x, y), (f.values(x, y), f.values(y, x)),
                              "set-f(x, y) differs from set-f(y, x)")
    return PropertyReport("commutative", True)


def is_single_valued_on(f: MultiMap, D=None) -> PropertyReport:
    words = _domain(f, D)
    bad = f.codes(words) == 3
    if bad.any():
        i, j = np.argwhere(bad)[0]
        x, y = words[i], words[j]
        return PropertyReport("single_valued", False, (x, y), (f.values(x, y),))
    return PropertyReport("single_valued", True)


def check_basic(f: MultiMap, D=None) -> tuple[PropertyReport, PropertyReport, PropertyReport]:
    return is_total_on(f, D), is_commutative_on(f, D), is_single_valued_on(f, D)


def require_total(f: MultiMap, D=None, what: str = "") -> None:
    rep = is_total_on(f, D)
    if not rep:
        x, y = rep.witness
        raise PreconditionError(
            f"{f.name} is not total{what}: undefined at ({format_word(x)}, {format_word(y)})",
            rep.witness)


def is_associative_on(f: MultiMap, D=None) -> PropertyReport:
    """Associativity on ``D`` for a function total on ``D``."""
    words = _domain(f, D)
    require_total(f, words, " on the checked domain")
    return _associativity(f, words, "associative", weak=False)


def is_strongly_associative_on(f: MultiMap, D=None) -> PropertyReport:
    """The equation on every triple, with no totality requirement."""
    return _associativity(f, _domain(f, D), "strongly_associative", weak=False)


def is_weakly_associative_on(f: MultiMap, D=None) -> PropertyReport:
    return _associativity(f, _domain(f, D), "weakly_associative", weak=True)


def is_associative_at_each_length(f: MultiMap, N: Optional[int] = None,
                                  lengths: Optional[Iterable[int]] = None) -> PropertyReport:
    """Associativity on every ``Σ^n``; a length where ``f`` is partial fails
    with detail ``partial at length n``."""
    if lengths is None:
        N = f.universe.max_len if N is None else N
        lengths = range(N + 1)
    per_length = {}
    first_fail = None
    for n in lengths:
        layer = f.universe.exact(n)
        tot = is_total_on(f, layer)
        if not tot:
            per_length[f"n{n}"] = False
            if first_fail is None:
                first_fail = PropertyReport(
                    "associative_each_length", False, tot.witness, tot.values,
                    f"partial at length {n}")
            continue
        rep = _associativity(f, layer, "associative", weak=False)
        per_length[f"n{n}"] = rep.passed
        if not rep and first_fail is None:
            first_fail = PropertyReport("associative_each_length", False, rep.witness,
                                        rep.values, f"not associative at length {n}")
    if first_fail is not None:
        first_fail.verdicts = per_length
        return first_fail
    return PropertyReport("associative_each_length", True, verdicts=per_length)


def is_selector_for(f: MultiMap, B: TargetSet, D=None) -> PropertyReport:
    """If one argument is in ``B`` the value set is nonempty and inside ``B``."""
    words = _domain(f, D)
    C = f.codes(words)
    inB = np.array([w in B for w in words], dtype=bool)
    touches = inB[:, None] | inB[None, :]
    first_out = (C & 1).astype(bool) & ~inB[:, None]
    second_out = (C & 2).astype(bool) & ~inB[None, :]
    bad = touches & ((C == 0) | first_out | second_out)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        x, y = words[i], words[j]
        return PropertyReport("selector", False, (x, y), (f.values(x, y),),
                              "a pair meeting B is undefined or leaves B")
    return PropertyReport("selector", True)


def _triple_conditions(f: MultiMap, words: list[Word]):
    """For each triple, whether set-f(a, set-f(b,c)), set-f(b, set-f(a,c)) and
    set-f(c, set-f(a,b)) coincide (condition 2 of the three-way equivalence)."""
    Vf = membership_tensor(f.codes(words)).astype(np.float32)
    # X[a, b, c] = set-f(a, set-f(b, c)) as a membership vector
    X = np.einsum("bcm,amz->abcz", Vf, Vf) > 0.5
    Y = X.transpose(1, 0, 2, 3)  # set-f(b, set-f(a, c)) indexed [a, b, c]
    Z = X.transpose(1, 2, 0, 3)  # set-f(c, set-f(a, b)) indexed [a, b, c]
    return np.all((X == Y) & (X == Z), axis=3)


def prop31_check(f: MultiMap, D=None) -> PropertyReport:
    """Evaluate the three equivalent associativity conditions independently.

    Passes iff all three verdicts agree; the verdicts themselves are in
    ``report.verdicts``.
    """
    words = _domain(f, D)
    require_total(f, words, " on the checked domain")
    comm = is_commutative_on(f, words)
    if not comm:
        raise PreconditionError(f"{f.name} is not commutative on the domain", comm.witness)
    c1 = _associativity(f, words, "associative", weak=False)
    ok = _triple_conditions(f, words)
    c2 = bool(ok.all())
    idx = np.arange(len(words))
    distinct = ((idx[:, None, None] != idx[None, :, None])
                & (idx[:, None, None] != idx[None, None, :])
                & (idx[None, :, None] != idx[None, None, :]))
    c3 = bool(ok[distinct].all())
    verdicts = {"cond1": c1.passed, "cond2": c2, "cond3": c3}
    agree = len(set(verdicts.values())) == 1
    witness = None
    if not agree or not c2:
        bad = np.argwhere(~ok)
        if len(bad):
            witness = tuple(words[i] for i in bad[0])
    return PropertyReport("prop31", agree, witness or c1.witness,
                          detail="conditions agree" if agree else "conditions disagree",
                          verdicts=verdicts)


def totality_consequence(f: MultiMap, B: TargetSet, per_length: bool = False) -> PropertyReport:
    """Associativity of a selector for nonempty ``B`` forces totality.

    For every undefined pair ``(x, y)`` (restricted to lengths where B is
    nonempty when ``per_length``) the triple ``(x, y, z)`` with ``z`` in B
    breaks associativity: ``set-f(x, set-f(y, z)) = {z}`` while the other
    side is empty.  Passes iff the implication "associative => total" holds.
    """
    if not B:
        raise PreconditionError("target set is empty")
    u = f.universe
    if per_length:
        domains = [(u.exact(n), B.at_length(n)) for n in range(u.max_len + 1) if B.at_length(n)]
    else:
        domains = [(list(u.words), B.members())]
    for words, members in domains:
        hole = _first_undefined(f.codes(words), words)
        if hole is None:
            continue
        x, y = hole
        z = members[0]
        left = eval_ext(f, f.values(y, z), x, side="right")
        right = eval_ext(f, f.values(x, y), z, side="left")
        if left == right:
            # the function is then not a selector for B at this pair
            return PropertyReport("totality_consequence", False, (x, y, z), (left, right),
                                  "undefined pair does not break associativity")
        return PropertyReport("totality_consequence", True, (x, y, z), (left, right),
                              "partial, hence not associative")
    return PropertyReport("totality_consequence", True, detail="total")


# -- enumeration --------------------------------------------------------------

CLASS_GUARD = 6


def value_options(single: bool, total: bool) -> list[ValueSet]:
    opts = [ValueSet.FIRST, ValueSet.SECOND]
    if not single:
        opts.append(ValueSet.BOTH)
    if not total:
        opts.insert(0, ValueSet.NONE)
    return opts


def enumerate_class(D: Iterable[Word], value_mode: str = "single",
                    commutative_only: bool = True, total_only: bool = True,
                    universe: Optional[Universe] = None) -> Iterator[Table]:
    """Every self-contained function on ``D`` of the requested kind, once.

    Pairs outside ``D`` are left undefined in the returned tables.
    """
    words = sort_words(set(D))
    if len(words) > CLASS_GUARD:
        raise RangeError(f"enumerate_class is limited to {CLASS_GUARD} words, got {len(words)}")
    if value_mode not in ("single", "multi"):
        raise ValueError(f"value mode must be single or multi, not {value_mode!r}")
    if universe is None:
        universe = Universe(max((len(w) for w in words), default=0))
    idx = [universe.index(w) for w in words]
    single = value_mode == "single"
    opts = value_options(single, total_only)
    diag_opts = [1] if total_only else [0, 1]
    if commutative_only:
        cells = list(itertools.combinations(range(len(words)), 2))
    else:
        cells = [(i, j) for i in range(len(words)) for j in range(len(words)) if i != j]
    n = universe.size
    for diag in itertools.product(diag_opts, repeat=len(words)):
        for choice in itertools.product(opts, repeat=len(cells)):
            codes = np.zeros((n, n), dtype=np.uint8)
            for i, d in zip(idx, diag):
                codes[i, i] = d
            for (i, j), v in zip(cells, choice):
                codes[idx[i], idx[j]] = v
                if commutative_only:
                    codes[idx[j], idx[i]] = swap_flags(np.uint8(v))
            yield Table(universe, codes, name="enumerated", single_valued=single)


def count_class(size: int, value_mode: str, commutative_only=True, total_only=True) -> int:
    k = len(value_options(value_mode == "single", total_only))
    pairs = size * (size - 1) // 2 if commutative_only else size * (size - 1)
    diag = 1 if total_only else 2 ** size
    return diag * k ** pairs


# -- simple rule functions ----------------------------------------------------

def _order_bulk(prefer_max: bool):
    def bulk(words):
        key = np.array([(1 << len(w)) - 1 + (int(w, 2) if w else 0) for w in words])
        first_wins = key[:, None] > key[None, :] if prefer_max else key[:, None] < key[None, :]
        codes = np.where(first_wins, 1, 2).astype(np.uint8)
        np.fill_diagonal(codes, 1)
        return codes
    return bulk


def maxlex(universe: Universe) -> Rule:
    """The shortlex-maximum selector; selects every shortlex-upward-closed set."""
    def fn(x, y):
        return ValueSet.FIRST if slmax(x, y) == x else ValueSet.SECOND
    return Rule(universe, fn, "maxlex", single_valued=True, bulk=_order_bulk(True))


def minlex(universe: Universe) -> Rule:
    def fn(x, y):
        return ValueSet.SECOND if slmax(x, y) == x else ValueSet.FIRST
    return Rule(universe, fn, "minlex", single_valued=True, bulk=_order_bulk(False))


def canonical_selector(B: TargetSet) -> Rule:
    """Members beat non-members, otherwise shortlex maximum."""
    u = B.universe

    def fn(x, y):
        if (x in B) != (y in B):
            return ValueSet.FIRST if x in B else ValueSet.SECOND
        return ValueSet.FIRST if slmax(x, y) == x else ValueSet.SECOND

    def bulk(words):
        inB = np.array([w in B for w in words])
        codes = _order_bulk(True)(words)
        codes = np.where(inB[:, None] & ~inB[None, :], 1, codes)
        codes = np.where(~inB[:, None] & inB[None, :], 2, codes)
        np.fill_diagonal(codes, 1)
        return codes.astype(np.uint8)

    return Rule(u, fn, "canonical", single_valued=True, bulk=bulk)


def undefined_everywhere(universe: Universe) -> Table:
    return Table(universe, np.zeros((universe.size, universe.size), dtype=np.uint8),
                 name="nowhere", single_valued=True)
