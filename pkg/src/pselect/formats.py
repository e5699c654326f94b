"""SET and TABLE text formats.

SET:   optional ``maxlen N`` header, then one word per line (``-`` is the
       empty word); ``#`` starts a comment line.
TABLE: header ``table maxlen N [single|multi]``, then ``x y -> V`` lines with
       V in {x, y, xy, none}; unlisted pairs are undefined and the diagonal
       defaults to {x}.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .errors import FormatError, RangeError
from .functions import MultiMap, Table, TargetSet, ValueSet
from .universe import Universe, format_word, parse_word

log = logging.getLogger(__name__)

_VALUE_TOKENS = {"x": ValueSet.FIRST, "y": ValueSet.SECOND, "xy": ValueSet.BOTH,
                 "none": ValueSet.NONE}
_TOKEN_OF = {v: k for k, v in _VALUE_TOKENS.items()}


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def _header_maxlen(tokens: list[str], no: int) -> int:
    try:
        n = int(tokens[1])
    except (IndexError, ValueError):
        raise FormatError(f"line {no}: bad maxlen header") from None
    if n < 0:
        raise FormatError(f"line {no}: negative maxlen")
    return n


def parse_set(text: str, max_len: Optional[int] = None) -> TargetSet:
    words: list[tuple[int, str]] = []
    header = None
    for no, line in _lines(text):
        tokens = line.split()
        if tokens[0] == "maxlen":
            if header is not None or words:
                raise FormatError(f"line {no}: maxlen header must come first")
            header = _header_maxlen(tokens, no)
            continue
        if len(tokens) != 1:
            raise FormatError(f"line {no}: expected one word, got {line!r}")
        try:
            words.append((no, parse_word(tokens[0])))
        except FormatError as e:
            raise FormatError(f"line {no}: {e}") from None
    N = max_len if max_len is not None else header
    if N is None:
        N = max((len(w) for _, w in words), default=0)
    u = Universe(N)
    seen = set()
    for no, w in words:
        if len(w) > N:
            raise FormatError(f"line {no}: word {w} longer than maxlen {N}")
        if w in seen:
            log.warning("line %d: duplicate word %s", no, format_word(w))
        seen.add(w)
    return TargetSet.from_words(u, seen)


def read_set(path, max_len: Optional[int] = None) -> TargetSet:
    return parse_set(Path(path).read_text(), max_len)


def dump_set(B: TargetSet, header: bool = True) -> str:
    out = [f"maxlen {B.universe.max_len}"] if header else []
    out += [format_word(w) for w in B.members()]
    return "\n".join(out) + "\n"


def parse_table(text: str, name: str = "table") -> Table:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty table file")
    no, head = lines[0]
    tokens = head.split()
    if len(tokens) not in (3, 4) or tokens[0] != "table" or tokens[1] != "maxlen":
        raise FormatError(f"line {no}: expected 'table maxlen N [single|multi]'")
    N = _header_maxlen(tokens[1:], no)
    mode = tokens[3] if len(tokens) == 4 else "multi"
    if mode not in ("single", "multi"):
        raise FormatError(f"line {no}: value mode must be single or multi")
    u = Universe(N)
    codes = np.zeros((u.size, u.size), dtype=np.uint8)
    np.fill_diagonal(codes, 1)
    for no, line in lines[1:]:
        parts = line.split()
        if len(parts) != 4 or parts[2] != "->":
            raise FormatError(f"line {no}: expected 'x y -> V'")
        try:
            x, y = parse_word(parts[0]), parse_word(parts[1])
            u.check(x, y)
        except (FormatError, RangeError) as e:
            raise FormatError(f"line {no}: {e}") from None
        if parts[3] not in _VALUE_TOKENS:
            raise FormatError(f"line {no}: value must be one of x, y, xy, none")
        v = _VALUE_TOKENS[parts[3]]
        if x == y and v not in (ValueSet.FIRST, ValueSet.NONE):
            raise FormatError(f"line {no}: a diagonal value must be x or none")
        codes[u.index(x), u.index(y)] = v
    try:
        return Table(u, codes, name=name, single_valued=True if mode == "single" else None)
    except Exception as e:
        raise FormatError(str(e)) from None


def read_table(path) -> Table:
    return parse_table(Path(path).read_text(), name=f"table:{path}")


def dump_table(f: MultiMap, words: Optional[Iterable[str]] = None) -> str:
    """Every pair whose value differs from the file defaults, shortlex order."""
    u = f.universe
    words = list(u.words if words is None else words)
    C = f.codes(words)
    mode = "single" if not np.any((C == 3) & ~np.eye(len(words), dtype=bool)) else "multi"
    out = [f"table maxlen {u.max_len} {mode}"]
    for i, x in enumerate(words):
        for j, y in enumerate(words):
            v = ValueSet(int(C[i, j]))
            default = ValueSet.FIRST if i == j else ValueSet.NONE
            if v != default:
                out.append(f"{format_word(x)} {format_word(y)} -> {_TOKEN_OF[v]}")
    return "\n".join(out) + "\n"
