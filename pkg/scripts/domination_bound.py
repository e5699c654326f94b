"""Greedy dominating sets on random s-tournaments versus floor(log2 n) + 1.

    python scripts/domination_bound.py --max-n 64 --trials 20 --seed 0
"""
import argparse
import math
from dataclasses import dataclass

import numpy as np

from pselect import digraph as dg


@dataclass
class BoundConfig:
    max_n: int = 64
    trials: int = 20
    seed: int = 0


def run(cfg: BoundConfig) -> list[tuple[int, int, int, bool]]:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for n in range(1, cfg.max_n + 1):
        worst, ok = 0, True
        for _ in range(cfg.trials):
            G = dg.random_tournament(n, rng)
            D = dg.dominating_set(G)
            ok &= dg.dominates(G, D)
            worst = max(worst, len(D))
        rows.append((n, worst, math.floor(math.log2(n)) + 1, ok))
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=BoundConfig.max_n)
    p.add_argument("--trials", type=int, default=BoundConfig.trials)
    p.add_argument("--seed", type=int, default=BoundConfig.seed)
    a = p.parse_args(argv)
    rows = run(BoundConfig(a.max_n, a.trials, a.seed))
    print("n worst_size bound dominates")
    for n, worst, bound, ok in rows:
        print(f"{n} {worst} {bound} {'yes' if ok else 'NO'}")
    violations = sum(w > b or not ok for _, w, b, ok in rows)
    print(f"violations {violations}")
    return 1 if violations else 0


if __name__ == "__main__":
    raise SystemExit(main())
