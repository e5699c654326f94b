"""Function-induced digraphs and the graph characterizations of associativity.

Edge convention: ``(x, y)`` is an edge iff ``y`` is in ``set-f(x, y)``, so
edges point at winners and a source node is a vertex that loses to every
vertex (itself included, via its self-loop).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import InvariantError, PreconditionError
from .functions import MultiMap, PropertyReport
from .universe import Word, format_word, sort_words


@dataclass(frozen=True, eq=False)
class Digraph:
    vertices: tuple[Word, ...]
    adj: np.ndarray

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("duplicate vertices")
        if self.adj.shape != (len(self.vertices),) * 2:
            raise PreconditionError("adjacency shape does not match vertex count")
        self.adj.flags.writeable = False

    @classmethod
    def from_edges(cls, vertices: Sequence[Word], edges: Iterable[tuple[Word, Word]]):
        vertices = tuple(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        adj = np.zeros((len(vertices), len(vertices)), dtype=bool)
        for u, v in edges:
            adj[pos[u], pos[v]] = True
        return cls(vertices, adj)

    def __len__(self):
        return len(self.vertices)

    def has_edge(self, u: Word, v: Word) -> bool:
        return bool(self.adj[self.vertices.index(u), self.vertices.index(v)])

    def edges(self) -> list[tuple[Word, Word]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in np.argwhere(self.adj)]

    def subgraph(self, keep: Sequence[int]) -> "Digraph":
        keep = list(keep)
        return Digraph(tuple(self.vertices[i] for i in keep), self.adj[np.ix_(keep, keep)].copy())

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{format_word(v)}";')
        for u, v in self.edges():
            lines.append(f'  "{format_word(u)}" -> "{format_word(v)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def to_dot(G: Digraph, name: str = "G") -> str:
    return G.to_dot(name)


def induce(f: MultiMap, V: Iterable[Word]) -> Digraph:
    vertices = tuple(sort_words(set(V)))
    codes = f.codes(vertices)
    adj = (codes & 2).astype(bool)
    # on the diagonal a defined value is {x}, which is also the second argument
    np.fill_diagonal(adj, np.diag(codes) > 0)
    return Digraph(vertices, adj)


# -- classification -----------------------------------------------------------

def is_s_tournament(G: Digraph) -> bool:
    A = G.adj
    off = ~np.eye(len(G), dtype=bool)
    return bool(np.all(np.diag(A)) and np.all((A ^ A.T)[off]))


def is_complete_digraph(G: Digraph) -> bool:
    return bool(np.all(G.adj | G.adj.T))


def is_strong_clique(G: Digraph) -> bool:
    return bool(np.all(G.adj))


def classify(G: Digraph) -> dict[str, bool]:
    return {
        "s_tournament": is_s_tournament(G),
        "complete_digraph": is_complete_digraph(G),
        "strong_clique": is_strong_clique(G),
    }


def is_transitive(G: Digraph) -> PropertyReport:
    A = G.adj.astype(np.int32)
    # (a, b), (b, c) in E but (a, c) missing
    two_step = (A @ A) > 0
    bad = two_step & ~G.adj
    if bad.any():
        a, c = np.argwhere(bad)[0]
        b = int(np.flatnonzero(G.adj[a] & G.adj[:, c])[0])
        w = G.vertices
        return PropertyReport("transitive", False, (w[a], w[b], w[c]),
                              detail="(a,b) and (b,c) are edges but (a,c) is not")
    return PropertyReport("transitive", True)


# -- cycles -------------------------------------------------------------------

_SMALL = 64


def _components(G: Digraph) -> np.ndarray:
    if len(G) == 0:
        return np.zeros(0, dtype=int)
    if len(G) <= _SMALL:
        # mutual reachability; avoids csgraph validation overhead on tiny graphs
        R = _closure(G.adj)
        _, labels = np.unique(R & R.T, axis=0, return_inverse=True)
        return labels.ravel()
    _, labels = connected_components(G.adj.astype(np.int8), directed=True, connection="strong")
    return labels


def _shortest_path(A: np.ndarray, s: int, t: int) -> list[int]:
    prev = {s: None}
    frontier = [s]
    while frontier and t not in prev:
        nxt = []
        for u in frontier:
            for v in np.flatnonzero(A[u]):
                v = int(v)
                if v not in prev:
                    prev[v] = u
                    nxt.append(v)
        frontier = nxt
    if t not in prev:
        raise InvariantError("no path inside a strong component")
    path = [t]
    while path[-1] != s:
        path.append(prev[path[-1]])
    return path[::-1]


def long_cycle(G: Digraph) -> Optional[list[Word]]:
    """A closed walk through at least two distinct vertices, or None.

    When some strong component is not a strong clique the walk returned goes
    through a pair with a missing edge, so its vertices do not form a strong
    clique; otherwise a 2-cycle inside a component is returned.
    """
    labels = _components(G)
    A = G.adj
    fallback = None
    for comp in np.unique(labels):
        members = np.flatnonzero(labels == comp)
        if len(members) < 2:
            continue
        sub = A[np.ix_(members, members)]
        missing = np.argwhere(~sub)
        if len(missing):
            i, j = members[missing[0][0]], members[missing[0][1]]
            if i == j:
                # missing self-loop: any other member closes a walk through i
                j = members[members != i][0]
            there = _shortest_path(A, int(i), int(j))
            back = _shortest_path(A, int(j), int(i))
            walk = there + back[1:-1]
            return [G.vertices[k] for k in walk]
        if fallback is None:
            fallback = [G.vertices[members[0]], G.vertices[members[1]]]
    return fallback


def directed_triangles(G: Digraph) -> int:
    """How many of the two cyclic orientations of each 3-vertex subset are
    present, summed over subsets."""
    A = G.adj
    count = 0
    for i, j, k in itertools.combinations(range(len(G)), 3):
        count += bool(A[i, j] and A[j, k] and A[k, i])
        count += bool(A[i, k] and A[k, j] and A[j, i])
    return count


def cycle_route_associative(G: Digraph) -> bool:
    """Associativity predicted from 3-cycles on a 3-vertex induced graph of a
    commutative total function: it fails iff exactly one cyclic orientation
    is present."""
    if len(G) != 3:
        raise PreconditionError("cycle counting applies to three vertices")
    return directed_triangles(G) != 1


# -- extremal nodes and cliques ---------------------------------------------

def extremal_node(G: Digraph, side: str = "source") -> Optional[Word]:
    """Shortlex-least node with an edge to (source) or from (target) every node."""
    if side not in ("source", "target"):
        raise ValueError("side must be source or target")
    full = G.adj.all(axis=1) if side == "source" else G.adj.all(axis=0)
    hits = [G.vertices[i] for i in np.flatnonzero(full)]
    return sort_words(hits)[0] if hits else None


def condensation(G: Digraph) -> list[frozenset[Word]]:
    """Maximal strong cliques of a transitive complete digraph, source block first."""
    if not is_complete_digraph(G):
        A = G.adj
        i, j = np.argwhere(~(A | A.T))[0]
        raise PreconditionError("not a complete digraph",
                                (G.vertices[i], G.vertices[j]))
    rep = is_transitive(G)
    if not rep:
        raise PreconditionError("edge set is not transitive", rep.witness)
    labels = _components(G)
    blocks = [np.flatnonzero(labels == c) for c in np.unique(labels)]
    # a vertex reaches its own block and every later one
    outdeg = G.adj.sum(axis=1)
    blocks.sort(key=lambda b: -int(outdeg[b[0]]))
    for b in blocks:
        if not G.adj[np.ix_(b, b)].all():
            raise InvariantError("strong component is not a strong clique")
    for earlier, later in zip(blocks, blocks[1:]):
        if not G.adj[np.ix_(earlier, later)].all() or G.adj[np.ix_(later, earlier)].any():
            raise InvariantError("blocks are not linearly ordered")
    return [frozenset(G.vertices[i] for i in b) for b in blocks]


def _source_clique_ok(A: np.ndarray, S: np.ndarray) -> bool:
    """Maximal strong clique with every edge leaving it and none entering."""
    rest = ~S
    if not S.any() or not A[np.ix_(S, S)].all():
        return False
    if rest.any():
        if not A[np.ix_(S, rest)].all() or A[np.ix_(rest, S)].any():
            return False
        for v in np.flatnonzero(rest):
            T = S.copy()
            T[v] = True
            if A[np.ix_(T, T)].all():
                return False
    return True


def extremal_clique(G: Digraph, side: str = "source") -> frozenset[Word]:
    blocks = condensation(G)
    block = blocks[0] if side == "source" else blocks[-1]
    S = np.array([v in block for v in G.vertices])
    A = G.adj if side == "source" else G.adj.T
    if not _source_clique_ok(A, S):
        raise InvariantError(f"{side} block fails its defining properties")
    return block


# -- domination ---------------------------------------------------------------

def dominating_set(G: Digraph) -> frozenset[Word]:
    """Greedy dominating set of an s-tournament.

    ``x`` is dominated by ``y`` when ``(x, y)`` is an edge.  The vertex of
    largest in-degree within the remaining vertices dominates at least half
    of them, so at most floor(log2 |V|) + 1 rounds are needed.
    """
    if not is_s_tournament(G):
        raise PreconditionError("dominating_set needs an s-tournament")
    A = G.adj
    remaining = np.arange(len(G))
    chosen = []
    while len(remaining):
        sub = A[np.ix_(remaining, remaining)]
        indeg = sub.sum(axis=0)
        best = np.flatnonzero(indeg == indeg.max())
        # vertices are stored in shortlex order, so the first index is least
        pick = remaining[best[0]]
        chosen.append(pick)
        remaining = remaining[~A[remaining, pick]]
    return frozenset(G.vertices[i] for i in chosen)


def dominates(G: Digraph, D: Iterable[Word]) -> bool:
    cols = [G.vertices.index(d) for d in D]
    if not len(G):
        return True
    return bool(G.adj[:, cols].any(axis=1).all()) if cols else False


# -- equivalence suites --------------------------------------------------------

SUBGRAPH_EXHAUSTIVE_LIMIT = 12
SUBGRAPH_SAMPLES = 1000


def _subsets(n: int, seed: int):
    if n <= SUBGRAPH_EXHAUSTIVE_LIMIT:
        for mask in range(1, 1 << n):
            yield [i for i in range(n) if mask >> i & 1]
        return
    for k in range(n):
        yield list(range(k, n))
    rng = np.random.default_rng(seed)
    for _ in range(SUBGRAPH_SAMPLES):
        pick = np.flatnonzero(rng.random(n) < 0.5)
        if len(pick):
            yield list(pick)


def _closure(A: np.ndarray) -> np.ndarray:
    """Reflexive-transitive reachability."""
    R = A | np.eye(len(A), dtype=bool)
    while True:
        R2 = R | ((R.astype(np.int32) @ R.astype(np.int32)) > 0)
        if np.array_equal(R2, R):
            return R
        R = R2


def _has_source_clique(A: np.ndarray) -> bool:
    R = _closure(A)
    for u in range(len(A)):
        # a source clique containing u contains everything that reaches u
        if _source_clique_ok(A, R[:, u].copy()):
            return True
    return False


def _stmt_cycles_are_cliques(G: Digraph) -> bool:
    labels = _components(G)
    for comp in np.unique(labels):
        members = np.flatnonzero(labels == comp)
        if not G.adj[np.ix_(members, members)].all():
            return False
    return True


def verify_equivalences(G: Digraph, seed: int = 0) -> PropertyReport:
    """Evaluate the four equivalent statements for s-tournaments or for
    complete digraphs and pass iff their verdicts agree."""
    A = G.adj
    if is_s_tournament(G):
        kind = "s_tournament"
        s2 = long_cycle(G) is None
        src = lambda sub: bool(sub.all(axis=1).any())
        tgt = lambda sub: bool(sub.all(axis=0).any())
    elif is_complete_digraph(G):
        kind = "complete_digraph"
        s2 = _stmt_cycles_are_cliques(G)
        src = _has_source_clique
        tgt = lambda sub: _has_source_clique(sub.T)
    else:
        raise PreconditionError("neither an s-tournament nor a complete digraph")
    s1 = is_transitive(G).passed
    s3 = s4 = True
    for keep in _subsets(len(G), seed):
        sub = A[np.ix_(keep, keep)]
        s3 = s3 and src(sub)
        s4 = s4 and tgt(sub)
        if not (s3 or s4):
            break
    verdicts = {"stmt1": s1, "stmt2": s2, "stmt3": s3, "stmt4": s4}
    agree = len(set(verdicts.values())) == 1
    return PropertyReport(f"equivalences_{kind}", agree,
                          detail="statements agree" if agree else "statements disagree",
                          verdicts=verdicts)


# -- graph generators used by tests and experiments ---------------------------

def tournament_from_bits(vertices: Sequence[Word], bits: int) -> Digraph:
    """s-tournament whose i-th pair (in combinations order) points forward iff bit i is set."""
    n = len(vertices)
    A = np.eye(n, dtype=bool)
    for k, (i, j) in enumerate(itertools.combinations(range(n), 2)):
        if bits >> k & 1:
            A[i, j] = True
        else:
            A[j, i] = True
    return Digraph(tuple(vertices), A)


def complete_from_choices(vertices: Sequence[Word], choices: Sequence[int]) -> Digraph:
    """Complete digraph; per pair 0 = forward, 1 = backward, 2 = both."""
    n = len(vertices)
    A = np.eye(n, dtype=bool)
    for (i, j), c in zip(itertools.combinations(range(n), 2), choices):
        if c in (0, 2):
            A[i, j] = True
        if c in (1, 2):
            A[j, i] = True
    return Digraph(tuple(vertices), A)


def random_tournament(n: int, rng: np.random.Generator, vertices=None) -> Digraph:
    vertices = tuple(vertices) if vertices is not None else tuple(
        format(i, f"0{max(1, (n - 1).bit_length())}b") for i in range(n))
    upper = np.triu(rng.random((n, n)) < 0.5, 1)
    A = upper | np.triu(~upper, 1).T | np.eye(n, dtype=bool)
    return Digraph(vertices, A)
