"""Command-line front end.

Selector spec grammar::

    maxlex | minlex | prop43 | fn4 | fn5 | table:PATH | canonical:set=PATH
    prime:SPEC | dprime:SPEC | hat:SPEC | assoc:SPEC | assocp:SPEC | assocf:SPEC
    score:set=PATH;base=SPEC
    gapset:set=PATH;lengths=1,2
    etime:set=PATH;base=SPEC;upto=N
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import advice as adv
from . import digraph as dg
from . import instances
from . import transforms as tr
from . import witness as wt
from .errors import ConfigError, SelectorError
from .formats import dump_table, read_set, read_table
from .functions import (
    MultiMap,
    PropertyReport,
    TargetSet,
    canonical_selector,
    count_class,
    enumerate_class,
    is_associative_at_each_length,
    is_associative_on,
    is_commutative_on,
    is_selector_for,
    is_single_valued_on,
    is_strongly_associative_on,
    is_total_on,
    is_weakly_associative_on,
    maxlex,
    minlex,
    nested_values,
    prop31_check,
    totality_consequence,
)
from .universe import Universe, format_word, parse_word, sort_words

MAX_LEN_LIMIT = 20
TABLE_LEN_LIMIT = 9
DEFAULT_MAX_LEN = 3


@dataclass
class RunConfig:
    command: str
    selector: Optional[str] = None
    set_path: Optional[str] = None
    max_len: Optional[int] = None
    props: list = field(default_factory=list)
    seed: int = 0
    fmt: str = "text"
    out: Optional[str] = None
    extra: dict = field(default_factory=dict)


# -- spec parsing -----------------------------------------------------------------

_KEYS = {
    "score": ("set", "base"),
    "gapset": ("set", "lengths"),
    "etime": ("set", "base", "upto"),
    "canonical": ("set",),
}


def _keyed_args(name: str, body: str) -> dict:
    """Split ``k=v;k=v``; a segment not starting with a known key continues
    the previous value, so nested specs may contain ``;``."""
    keys = _KEYS[name]
    out: dict = {}
    last = None
    for seg in body.split(";"):
        k, eq, v = seg.partition("=")
        if eq and k in keys and k not in out:
            out[k] = v
            last = k
        elif last is not None:
            out[last] += ";" + seg
        else:
            raise ConfigError(f"{name}: cannot parse argument fragment {seg!r}")
    missing = [k for k in keys if k not in out and not (name == "gapset" and k == "lengths")
               and not (name == "etime" and k == "upto")]
    if missing:
        raise ConfigError(f"{name}: missing argument(s) {', '.join(missing)}")
    return out


def parse_selector_spec(spec: str, max_len: int) -> MultiMap:
    u = Universe(max_len)
    spec = spec.strip()
    builtins: dict[str, Callable[[], MultiMap]] = {
        "maxlex": lambda: maxlex(u),
        "minlex": lambda: minlex(u),
        "prop43": lambda: instances.prop43_function(u),
        "fn4": lambda: instances.footnote4_function(u),
        "fn5": lambda: instances.footnote5_function(u),
    }
    if spec in builtins:
        try:
            return builtins[spec]()
        except SelectorError as e:
            raise ConfigError(f"{spec}: {e}") from None
    name, colon, body = spec.partition(":")
    if not colon:
        raise ConfigError(f"unknown selector {spec!r}")
    try:
        if name == "table":
            if max_len > TABLE_LEN_LIMIT:
                raise ConfigError(f"table selectors need maxlen <= {TABLE_LEN_LIMIT}")
            t = read_table(body)
            if t.universe.max_len != max_len:
                raise ConfigError(f"table {body} has maxlen {t.universe.max_len}, run uses {max_len}")
            return t
        unary = {
            "prime": tr.minmax_commutativize, "dprime": tr.maxvals_commutativize,
            "hat": tr.union_commutativize, "assoc": tr.associativize_total,
            "assocp": tr.associativize_partial, "assocf": tr.associativize_full,
        }
        if name in unary:
            return unary[name](parse_selector_spec(body, max_len))
        if name not in _KEYS:
            raise ConfigError(f"unknown selector constructor {name!r} in {spec!r}")
        args = _keyed_args(name, body)
        B = read_set(args["set"], max_len)
        if name == "canonical":
            return canonical_selector(B)
        if name == "score":
            return tr.score_selector(parse_selector_spec(args["base"], max_len), B)
        if name == "gapset":
            L = tr.GapLengths.parse(args["lengths"]) if "lengths" in args else None
            return tr.gapset_selector(B, L)
        upto = int(args.get("upto", max_len))
        if upto != max_len:
            raise ConfigError(f"etime upto={upto} must equal the run's maxlen {max_len}")
        f, _ = tr.etime_selector(B, parse_selector_spec(args["base"], max_len), upto)
        return f
    except ConfigError:
        raise
    except (SelectorError, OSError, ValueError) as e:
        raise ConfigError(f"{spec}: {e}") from None


# -- output -------------------------------------------------------------------------

class Report:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.ok = True

    def emit(self, line: str):
        self.lines.append(line)

    def prop(self, rep: PropertyReport):
        self.ok &= rep.passed
        self.emit(rep.line() if self.fmt == "lines" else rep.text())

    def fail(self, name: str, err: Exception):
        self.ok = False
        w = getattr(err, "witness", None)
        if self.fmt == "lines":
            s = f"CHECK prop={name} verdict=FAIL"
            if w:
                s += " witness=" + ",".join(format_word(x) for x in w)
            self.emit(s + " error=precondition")
        else:
            self.emit(f"FAIL {name}: {err}")

    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def _universe(cfg: RunConfig) -> Universe:
    n = cfg.max_len
    if n is None and cfg.set_path:
        head = Path(cfg.set_path).read_text().split()
        if len(head) >= 2 and head[0] == "maxlen":
            n = int(head[1])
    n = DEFAULT_MAX_LEN if n is None else n
    if not 0 <= n <= MAX_LEN_LIMIT:
        raise ConfigError(f"maxlen must lie in 0..{MAX_LEN_LIMIT}")
    return Universe(n)


def _target(cfg: RunConfig, u: Universe) -> Optional[TargetSet]:
    return read_set(cfg.set_path, u.max_len) if cfg.set_path else None


def _selector(cfg: RunConfig, u: Universe) -> MultiMap:
    if not cfg.selector:
        raise ConfigError("--selector is required")
    return parse_selector_spec(cfg.selector, u.max_len)


# -- subcommands ------------------------------------------------------------------------

PROPS = ("total", "comm", "single", "assoc", "sassoc", "weak", "length", "selector",
         "prop31", "totality")


def _run_props(f: MultiMap, B: Optional[TargetSet], props, rep: Report, D=None):
    for p in props:
        try:
            if p == "total":
                r = is_total_on(f, D)
            elif p == "comm":
                r = is_commutative_on(f, D)
            elif p == "single":
                r = is_single_valued_on(f, D)
            elif p == "assoc":
                r = is_associative_on(f, D)
            elif p == "sassoc":
                r = is_strongly_associative_on(f, D)
            elif p == "weak":
                r = is_weakly_associative_on(f, D)
            elif p == "length":
                r = is_associative_at_each_length(f)
            elif p == "prop31":
                r = prop31_check(f, D)
            elif p in ("selector", "totality"):
                if B is None:
                    raise ConfigError(f"property {p} needs --set")
                r = is_selector_for(f, B, D) if p == "selector" else totality_consequence(f, B)
            else:
                raise ConfigError(f"unknown property {p!r}; choose from {', '.join(PROPS)}")
        except ConfigError:
            raise
        except SelectorError as e:
            rep.fail(p, e)
            continue
        rep.prop(r)


def cmd_check(cfg: RunConfig, rep: Report):
    u = _universe(cfg)
    f = _selector(cfg, u)
    B = _target(cfg, u)
    props = cfg.props or (["total", "comm", "single", "assoc"] + (["selector"] if B else []))
    _run_props(f, B, props, rep)


def _vertices(cfg: RunConfig, u: Universe, B) -> list[str]:
    if cfg.extra.get("words"):
        return sort_words({parse_word(t) for t in cfg.extra["words"].split(",")})
    if cfg.extra.get("length") is not None:
        return u.exact(cfg.extra["length"])
    if B is not None:
        return B.members()
    return list(u.words)


def cmd_digraph(cfg: RunConfig, rep: Report):
    u = _universe(cfg)
    f = _selector(cfg, u)
    B = _target(cfg, u)
    G = dg.induce(f, _vertices(cfg, u, B))
    if cfg.fmt == "dot":
        rep.emit(dg.to_dot(G).rstrip("\n"))
        return
    flags = dg.classify(G)
    rep.emit("GRAPH vertices=%d edges=%d " % (len(G), int(G.adj.sum()))
             + " ".join(f"{k}={'yes' if v else 'no'}" for k, v in flags.items()))
    rep.prop(dg.is_transitive(G))
    cyc = dg.long_cycle(G)
    rep.emit("CYCLE " + (",".join(format_word(w) for w in cyc) if cyc else "none"))
    for side in ("source", "target"):
        node = dg.extremal_node(G, side)
        rep.emit(f"NODE side={side} word={format_word(node) if node is not None else 'none'}")
    if flags["complete_digraph"]:
        try:
            blocks = dg.condensation(G)
            rep.emit("BLOCKS " + " < ".join(
                "{" + ",".join(format_word(w) for w in sort_words(b)) + "}" for b in blocks))
        except SelectorError as e:
            rep.emit(f"BLOCKS none ({e})")
        rep.prop(dg.verify_equivalences(G, cfg.seed))
    if flags["s_tournament"] and len(G):
        D = dg.dominating_set(G)
        rep.emit(f"DOMINATING size={len(D)} members=" + ",".join(format_word(w) for w in sort_words(D)))


def cmd_transform(cfg: RunConfig, rep: Report):
    u = _universe(cfg)
    f = _selector(cfg, u)
    B = _target(cfg, u)
    props = cfg.props or (["total", "comm", "single", "assoc"] + (["selector"] if B else []))
    _run_props(f, B, props, rep)
    if cfg.extra.get("dump"):
        Path(cfg.extra["dump"]).write_text(dump_table(f))
        rep.emit(f"DUMP path={cfg.extra['dump']} words={u.size}")


def cmd_advice(cfg: RunConfig, rep: Report):
    u = _universe(cfg)
    f = _selector(cfg, u)
    B = _target(cfg, u)
    if B is None:
        raise ConfigError("advice needs --set")
    kind = adv.AdviceKind.parse(cfg.extra.get("kind", "p"))
    upto = cfg.extra.get("upto")
    upto = u.max_len if upto is None else upto
    cap = cfg.extra.get("emit")
    for n in range(upto + 1):
        try:
            pkg = adv.extract(f, B, n, kind)
        except SelectorError as e:
            rep.fail(f"advice_{kind.value}", e)
            return
        words = u.upto(n) if kind is adv.AdviceKind.STRONG else u.exact(n)
        ok = all(adv.decode(pkg, x, f) == (x in B) for x in words) and len(pkg.advice) == n + 1
        rep.ok &= ok
        rep.emit(pkg.line(ok))
        if cap is not None and n <= cap:
            for m in adv.decoder_members(pkg, f):
                rep.emit(f"MEMBER n={n} code={m}")


def cmd_witness(cfg: RunConfig, rep: Report):
    u = _universe(cfg)
    f = _selector(cfg, u)
    B = _target(cfg, u)
    op = cfg.extra.get("op", "score")
    upto = cfg.extra.get("upto")
    upto = u.max_len if upto is None else upto
    try:
        if op == "score":
            for n in range(upto + 1):
                for x in u.exact(n):
                    rep.emit(f"SCORE word={format_word(x)} score={wt.score(f, x)}")
        elif op == "top":
            for n in range(upto + 1):
                a = wt.top_string(f, n, "scan")
                b = wt.top_string(f, n, "prefix_search")
                rep.ok &= a == b
                rep.emit(f"TOP n={n} scan={format_word(a)} prefix={format_word(b)} "
                         f"agree={'PASS' if a == b else 'FAIL'}")
        elif op == "cover":
            if B is None:
                raise ConfigError("cover needs --set")
            mode = cfg.extra.get("mode") or "greedy"
            for n in range(upto + 1):
                if mode == "greedy":
                    c = wt.dominating_cover(f, B, n) if B.at_length(n) else None
                else:
                    c = wt.lexmax_cover(f, n, B)
                rep.emit(c.text() if c else f"COVER n={n} none")
        elif op == "print":
            if B is None:
                raise ConfigError("print needs --set")
            C, q = wt.printable_subset(f, B, upto, cfg.extra.get("mode") or "lexmax")
            ok = all(w in B for w in C)
            rep.ok &= ok
            rep.emit(f"PRINT n={upto} size={len(C)} queries={q} subset={'PASS' if ok else 'FAIL'} "
                     f"words={','.join(format_word(w) for w in sort_words(C))}")
        elif op == "hinted":
            if B is None:
                raise ConfigError("hinted needs --set")
            T = wt.HintSet.parse(cfg.extra.get("hint") or "even")
            C = wt.hinted_subset(f, B, T, upto)
            ok = all(w in B for w in C)
            rep.ok &= ok
            rep.emit(f"HINTED n={upto} hint={T.name} subset={'PASS' if ok else 'FAIL'} "
                     f"words={','.join(format_word(w) for w in sort_words(C))}")
        else:
            raise ConfigError(f"unknown witness op {op!r}")
    except ConfigError:
        raise
    except SelectorError as e:
        rep.fail(f"witness_{op}", e)


def cmd_enumerate(cfg: RunConfig, rep: Report):
    size = cfg.extra.get("size", 3)
    mode = cfg.extra.get("mode") or "multi"
    comm = not cfg.extra.get("noncomm")
    u = Universe(max(0, (size).bit_length() - 1))
    D = list(u.words[:size])
    if len(D) < size:
        raise ConfigError(f"size {size} does not fit")
    total = assoc = agree = cycles_agree = 0
    for f in enumerate_class(D, mode, commutative_only=comm, total_only=True, universe=u):
        total += 1
        a = is_associative_on(f, D).passed
        assoc += a
        if comm:
            G = dg.induce(f, D)
            agree += a == dg.is_transitive(G).passed
            if size == 3:
                cycles_agree += a == dg.cycle_route_associative(G)
    expected = count_class(size, mode, comm, True)
    rep.ok &= total == expected
    rep.emit(f"associative {assoc} / {total}")
    if comm:
        rep.ok &= agree == total
        rep.emit(f"transitive_route agree {agree} / {total}")
        if size == 3:
            rep.ok &= cycles_agree == total
            rep.emit(f"cycle_route agree {cycles_agree} / {total}")


def _letters(words: dict) -> Callable:
    names = {w: k for k, w in words.items()}
    return lambda ws: "{" + ",".join(sorted(names[w] for w in ws)) + "}" if ws else "∅"


def demo_lines() -> list[tuple[str, bool]]:
    """The three counterexample computations, as (line, reproduced) pairs."""
    out = []
    w = instances.PROP43_WORDS
    fp = tr.minmax_commutativize(instances.prop43_function())
    show = _letters(w)
    left, right = nested_values(fp, w["a"], w["c"], w["b"])
    ok = is_associative_on(instances.prop43_function()).passed and left != right
    out.append((f"prop43 f' on (a,c,b): {show(left)} ≠ {show(right)}", ok))
    w = instances.FOOTNOTE4_WORDS
    f4 = instances.footnote4_function()
    fp = tr.minmax_commutativize(f4)
    show = _letters(w)
    left, right = nested_values(fp, w["a"], w["b"], w["c"])
    ok = is_strongly_associative_on(f4, list(w.values())).passed and left != right
    out.append((f"footnote4 f' on (a,b,c): {show(left)} ≠ {show(right)}", ok))
    w = instances.FOOTNOTE5_WORDS
    f5 = instances.footnote5_function()
    fh = tr.union_commutativize(f5)
    show = _letters(w)
    left, right = nested_values(fh, w["a"], w["b"], w["c"])
    ok = is_strongly_associative_on(f5, list(w.values())).passed and left != right
    out.append((f"footnote5 f^ on (a,b,c): {show(left)} ≠ {show(right)}", ok))
    return out


def cmd_demo(cfg: RunConfig, rep: Report):
    for line, ok in demo_lines():
        rep.ok &= ok
        rep.emit(line)


COMMANDS = {
    "check": cmd_check, "digraph": cmd_digraph, "transform": cmd_transform,
    "advice": cmd_advice, "witness": cmd_witness, "enumerate": cmd_enumerate,
    "demo": cmd_demo,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    rep = Report(cfg.fmt)
    try:
        COMMANDS[cfg.command](cfg, rep)
    except (SelectorError, OSError) as e:
        rep.ok = False
        rep.emit(f"ERROR {e}")
        return 2, rep.text()
    return (0 if rep.ok else 1), rep.text()


def build_parser() -> argparse.ArgumentParser:
    def globals_(suppress: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite values given before the subcommand
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--maxlen", type=int, default=d(None))
        g.add_argument("--seed", type=int, default=d(0))
        g.add_argument("--format", choices=("text", "lines", "dot"), default=d("text"))
        g.add_argument("--out", default=d(None))
        return g

    common = globals_(True)
    p = argparse.ArgumentParser(prog="pselect", parents=[globals_(False)],
                                description="Selector-function analysis tool.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("check", "property reports")
    s.add_argument("--selector", required=True)
    s.add_argument("--set")
    s.add_argument("--props", default="")
    s = add("digraph", "induced digraph analyses")
    s.add_argument("--selector", required=True)
    s.add_argument("--set")
    s.add_argument("--words", help="comma-separated vertex words")
    s.add_argument("--length", type=int, help="use all words of this length")
    s = add("transform", "construct, verify and optionally dump")
    s.add_argument("--selector", required=True)
    s.add_argument("--set")
    s.add_argument("--props", default="")
    s.add_argument("--dump")
    s = add("advice", "extract and verify advice words")
    s.add_argument("--selector", required=True)
    s.add_argument("--set", required=True)
    s.add_argument("--upto", type=int)
    s.add_argument("--kind", choices=[k.value for k in adv.AdviceKind], default="p")
    s.add_argument("--emit-decoder-members", type=int, dest="emit", metavar="CAP")
    s = add("witness", "scores, top strings, covers, printable subsets")
    s.add_argument("--selector", required=True)
    s.add_argument("--set")
    s.add_argument("--upto", type=int)
    s.add_argument("--op", choices=("score", "top", "cover", "print", "hinted"), default="score")
    s.add_argument("--hint")
    s.add_argument("--mode", choices=("lexmax", "greedy"))
    s = add("enumerate", "exhaustive class counts")
    s.add_argument("--size", type=int, default=3)
    s.add_argument("--mode", choices=("single", "multi"), default="multi")
    s.add_argument("--noncomm", action="store_true")
    add("demo", "reproduce the counterexample value sets")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    extra = {k: getattr(ns, k) for k in ("words", "length", "dump", "upto", "kind", "emit",
                                         "op", "hint", "mode", "size", "noncomm")
             if hasattr(ns, k)}
    props = [p.strip() for p in getattr(ns, "props", "").split(",") if p.strip()]
    return RunConfig(ns.command, getattr(ns, "selector", None), getattr(ns, "set", None),
                     ns.maxlen, props, ns.seed, ns.format, ns.out, extra)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    code, text = run(cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
