"""Bounded binary-string universes, the shortlex order and string encodings.

Words are plain ``str`` objects over the characters ``0`` and ``1``; the
empty word is ``""``.  In every text format (files, CLI arguments) the empty
word is written as ``-``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

from .errors import FormatError, RangeError

Word = str

EMPTY_TOKEN = "-"


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def shortlex_key(w: Word) -> tuple[int, str]:
    return (len(w), w)


def shortlex_compare(x: Word, y: Word) -> Ordering:
    """Shorter words first; equal lengths compare bitwise with 0 < 1."""
    kx, ky = shortlex_key(x), shortlex_key(y)
    if kx < ky:
        return Ordering.LT
    if kx > ky:
        return Ordering.GT
    return Ordering.EQ


def slmax(*words: Word) -> Word:
    return max(words, key=shortlex_key)


def slmin(*words: Word) -> Word:
    return min(words, key=shortlex_key)


def sort_words(words: Iterable[Word], reverse: bool = False) -> list[Word]:
    return sorted(words, key=shortlex_key, reverse=reverse)


def rank(w: Word) -> int:
    """Position of ``w`` in the shortlex enumeration of all binary words."""
    return (1 << len(w)) - 1 + (int(w, 2) if w else 0)


def unrank(i: int) -> Word:
    if i < 0:
        raise RangeError(f"negative rank {i}")
    # rank + 1 written in binary is "1" followed by the word itself
    return bin(i + 1)[3:]


def is_word(w) -> bool:
    return isinstance(w, str) and not w.strip("01")


def parse_word(token: str) -> Word:
    token = token.strip()
    if token == EMPTY_TOKEN:
        return ""
    if not token or not is_word(token):
        raise FormatError(f"not a binary word: {token!r}")
    return token


def format_word(w: Word) -> str:
    return w if w else EMPTY_TOKEN


def format_words(words: Iterable[Word]) -> str:
    return "{" + ", ".join(format_word(w) for w in sort_words(words)) + "}"


_RANK_CACHE_MAX = 14


@dataclass(frozen=True)
class Universe:
    """All binary words of length at most ``max_len``."""

    max_len: int

    def __post_init__(self):
        if self.max_len < 0:
            raise RangeError("max_len must be non-negative")

    @cached_property
    def words(self) -> tuple[Word, ...]:
        return tuple(unrank(i) for i in range(self.size))

    @property
    def size(self) -> int:
        return (1 << (self.max_len + 1)) - 1

    @cached_property
    def _rank(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.words)} if self.max_len <= _RANK_CACHE_MAX else {}

    def __contains__(self, w) -> bool:
        if not isinstance(w, str):
            return False
        return w in self._rank or (len(w) <= self.max_len and not w.strip("01"))

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return self.size

    def check(self, *words: Word) -> None:
        for w in words:
            if w not in self:
                raise RangeError(
                    f"word {format_word(w) if is_word(w) else w!r} outside "
                    f"universe of max length {self.max_len}"
                )

    def index(self, w: Word) -> int:
        i = self._rank.get(w) if isinstance(w, str) else None
        if i is not None:
            return i
        if w not in self:
            self.check(w)
        return (1 << len(w)) - 1 + (int(w, 2) if w else 0)

    def exact(self, n: int) -> list[Word]:
        self._check_length(n)
        return [format(i, f"0{n}b") if n else "" for i in range(1 << n)]

    def upto(self, n: int) -> list[Word]:
        self._check_length(n)
        return list(self.words[: (1 << (n + 1)) - 1])

    def enumerate(self, mode: str, n: int) -> list[Word]:
        if mode == "exact":
            return self.exact(n)
        if mode == "upto":
            return self.upto(n)
        raise ValueError(f"unknown enumeration mode {mode!r}")

    def _check_length(self, n: int) -> None:
        if n < 0 or n > self.max_len:
            raise RangeError(f"length {n} outside 0..{self.max_len}")


def enumerate_words(u: Universe, mode: str, n: int) -> list[Word]:
    return u.enumerate(mode, n)


# -- pairing -----------------------------------------------------------------

def encode_pair(x: Word, w: Word) -> Word:
    """Layout ``1^{|x|} 0 x w``."""
    return "1" * len(x) + "0" + x + w


def decode_pair(p: Word) -> tuple[Word, Word]:
    k = p.find("0")
    if k < 0:
        raise FormatError(f"pair code {format_word(p)} has no 0 after its unary prefix")
    rest = p[k + 1:]
    if len(rest) < k:
        raise FormatError(f"pair code {format_word(p)} too short for |x| = {k}")
    return rest[:k], rest[k:]


# -- set codes ---------------------------------------------------------------

def setcode(ys: Iterable[Word], n: Optional[int] = None) -> Word:
    """Concatenate the (same-length) members in descending shortlex order."""
    ys = set(ys)
    if not ys:
        raise FormatError("setcode of the empty set is undefined")
    lengths = {len(y) for y in ys}
    if len(lengths) != 1 or (n is not None and lengths != {n}):
        raise FormatError(f"setcode members must share one length, got {sorted(lengths)}")
    return "".join(sort_words(ys, reverse=True))


def setcode_inv(w: Word, n: int) -> frozenset[Word]:
    if n <= 0:
        raise FormatError("setcode blocks need positive length")
    if not w or len(w) % n:
        raise FormatError(f"code length {len(w)} is not a positive multiple of {n}")
    blocks = [w[i:i + n] for i in range(0, len(w), n)]
    if any(a <= b for a, b in zip(blocks, blocks[1:])):
        raise FormatError(f"blocks of {w} are not strictly descending")
    return frozenset(blocks)


# -- prefix search -----------------------------------------------------------

def prefix_search(n: int, exists: Callable[[Word], bool]) -> Optional[Word]:
    """Find the lexicographically largest length-``n`` word with a property.

    ``exists(p)`` must answer whether some length-``n`` extension of prefix
    ``p`` has the property.  Extends bit by bit preferring 1; every prefix
    whose 1-extension is rejected has its 0-extension queried too, so an
    inconsistent predicate is detected.  At most ``2n + 1`` calls.
    """
    if not exists(""):
        return None
    p = ""
    for _ in range(n):
        if exists(p + "1"):
            p += "1"
        elif exists(p + "0"):
            p += "0"
        else:
            raise FormatError(f"predicate inconsistent: prefix {format_word(p)} "
                              "accepted but neither extension is")
    return p


def all_subsets(items: Sequence, max_size: Optional[int] = None):
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(top + 1):
        yield from itertools.combinations(items, k)
