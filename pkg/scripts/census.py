"""Associativity census of small commutative total self-contained functions.

Counts associative functions by the direct triple check, the transitivity
route and the cycle route, and reports disagreements.

    python scripts/census.py --sizes 3 4
"""
import argparse
from dataclasses import dataclass

from pselect import digraph as dg
from pselect.functions import enumerate_class, is_associative_on
from pselect.universe import Universe


@dataclass
class CensusConfig:
    sizes: tuple[int, ...] = (3, 4)
    modes: tuple[str, ...] = ("single", "multi")


def domain(size: int) -> tuple[str, ...]:
    return Universe(max(0, size.bit_length() - 1)).words[:size]


def census(size: int, mode: str) -> dict[str, int]:
    D = domain(size)
    out = {"total": 0, "direct": 0, "transitive": 0, "cycle": 0, "disagree": 0}
    for f in enumerate_class(D, mode):
        G = dg.induce(f, D)
        direct = is_associative_on(f, D).passed
        trans = dg.is_transitive(G).passed
        routes = [direct, trans]
        if size <= 3:
            cyc = dg.cycle_route_associative(G)
            out["cycle"] += cyc
            routes.append(cyc)
        out["total"] += 1
        out["direct"] += direct
        out["transitive"] += trans
        out["disagree"] += len(set(routes)) > 1
    return out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=list(CensusConfig.sizes))
    p.add_argument("--modes", nargs="+", default=list(CensusConfig.modes), choices=["single", "multi"])
    args = p.parse_args(argv)
    cfg = CensusConfig(tuple(args.sizes), tuple(args.modes))
    for size in cfg.sizes:
        for mode in cfg.modes:
            r = census(size, mode)
            cyc = f" cycle={r['cycle']}" if size <= 3 else ""
            print(f"size={size} mode={mode} associative={r['direct']}/{r['total']} "
                  f"transitive={r['transitive']}{cyc} disagreements={r['disagree']}")


if __name__ == "__main__":
    main()
