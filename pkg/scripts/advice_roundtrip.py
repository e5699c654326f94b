"""Advice extract-then-decode round-trips on random target sets.

For each sampled B the canonical selector is turned into the derived
selectors, and every applicable advice kind is checked at every length.

    python scripts/advice_roundtrip.py --maxlen 5 --samples 20 --density 0.4
"""
import argparse
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from pselect import advice as adv
from pselect import transforms as tf
from pselect.functions import TargetSet, canonical_selector, materialize
from pselect.universe import Universe

ALL = ("p", "np", "conp", "strong")


@dataclass
class RoundtripConfig:
    maxlen: int = 5
    samples: int = 20
    density: float = 0.4
    seed: int = 0


def selectors(B: TargetSet):
    base = canonical_selector(B)
    yield "score", tf.score_selector(base, B), ("p", "np", "conp")
    yield "etime", tf.etime_selector(B, base)[0], ALL
    yield "assoc", tf.associativize_total(base), ALL
    yield "assocp", tf.associativize_partial(base), ("p", "np", "strong")
    yield "assocf", tf.associativize_full(base), ALL


def run(cfg: RoundtripConfig) -> Counter:
    u = Universe(cfg.maxlen)
    rng = np.random.default_rng(cfg.seed)
    tally = Counter()
    for _ in range(cfg.samples):
        B = TargetSet(u, rng.random(u.size) < cfg.density)
        for name, f, kinds in selectors(B):
            f = materialize(f)
            for kind in kinds:
                ok = adv.verify_roundtrip(f, B, cfg.maxlen, kind).passed
                tally[name, kind, ok] += 1
    return tally


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--maxlen", type=int, default=RoundtripConfig.maxlen)
    p.add_argument("--samples", type=int, default=RoundtripConfig.samples)
    p.add_argument("--density", type=float, default=RoundtripConfig.density)
    p.add_argument("--seed", type=int, default=RoundtripConfig.seed)
    a = p.parse_args(argv)
    cfg = RoundtripConfig(a.maxlen, a.samples, a.density, a.seed)
    t = time.perf_counter()
    tally = run(cfg)
    failures = 0
    for name, kind in sorted({(n, k) for n, k, _ in tally}):
        good, bad = tally[name, kind, True], tally[name, kind, False]
        failures += bad
        print(f"{name:7s} {kind:6s} pass={good} fail={bad}")
    print(f"elapsed {time.perf_counter() - t:.1f}s failures {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
