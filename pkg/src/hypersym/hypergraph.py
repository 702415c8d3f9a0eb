"""Uniform hypergraphs and the special constructions used throughout the package.

Vertices are labelled ``1..n``. Edges are stored as sorted tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional


class ParseError(ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Hypergraph:
    n: int
    m: int
    edges: tuple[tuple[int, ...], ...]

    def __init__(self, n: int, m: int, edges: Iterable[Iterable[int]] = ()):
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        if m < 2:
            raise ValueError(f"edge size must be at least 2, got {m}")
        seen = set()
        normalized = []
        for raw in edges:
            edge = tuple(sorted(raw))
            if len(edge) != m or len(set(edge)) != m:
                raise ValueError(f"edge {edge} does not have {m} distinct vertices")
            if edge[0] < 1 or edge[-1] > n:
                raise ValueError(f"edge {edge} has a vertex outside 1..{n}")
            if edge in seen:
                raise ValueError(f"duplicate edge {edge}")
            seen.add(edge)
            normalized.append(edge)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg[1:]

    def __len__(self) -> int:
        return len(self.edges)


def complete_hypergraph(n: int, m: int) -> Hypergraph:
    """All m-subsets of [n], e.g. ``complete_hypergraph(4, 3)`` is K4^(3)."""
    return Hypergraph(n, m, itertools.combinations(range(1, n + 1), m))


def cycle_graph(n: int) -> Hypergraph:
    return Hypergraph(n, 2, [(i, i % n + 1) for i in range(1, n + 1)])


def complete_graph(n: int) -> Hypergraph:
    return complete_hypergraph(n, 2)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def parse_hypergraph(text: str) -> Hypergraph:
    """Parse the ``n m`` header followed by one edge per line; ``#`` comments."""
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            fields = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno) from None
        if header is None:
            if len(fields) != 2:
                raise ParseError("header must be 'n m'", lineno)
            header = fields
            continue
        n, m = header
        if len(fields) != m:
            raise ParseError(f"edge has {len(fields)} vertices, expected {m}", lineno)
        if len(set(fields)) != m:
            raise ParseError("edge repeats a vertex", lineno)
        if min(fields) < 1 or max(fields) > n:
            raise ParseError(f"vertex label outside 1..{n}", lineno)
        edge = tuple(sorted(fields))
        if edge in edges:
            raise ParseError(f"duplicate edge {list(edge)}", lineno)
        edges.append(edge)
    if header is None:
        raise ParseError("empty hypergraph file: missing 'n m' header")
    n, m = header
    try:
        return Hypergraph(n, m, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_hypergraph(g: Hypergraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(" ".join(map(str, e)) for e in g.edges)
    return "\n".join(lines) + "\n"


def load_hypergraph(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


# ---------------------------------------------------------------------------
# structure
# ---------------------------------------------------------------------------

def is_connected(g: Hypergraph) -> bool:
    """True iff every two vertices are joined by a walk (isolated vertices disconnect)."""
    parent = list(range(g.n + 1))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges:
        root = find(e[0])
        for v in e[1:]:
            parent[find(v)] = root
    return len({find(v) for v in g.vertices}) == 1


@dataclass(frozen=True)
class GeneralizedPowerSpec:
    """Blow-up parameters: each base vertex becomes an ``s``-set, each edge gains ``m - t*s`` fillers."""

    base: Hypergraph
    m: int
    s: int

    def __post_init__(self):
        t = self.base.m
        if self.m <= t:
            raise ValueError(f"target edge size m={self.m} must exceed base edge size t={t}")
        if self.s < 1 or t * self.s > self.m:
            raise ValueError(f"need 1 <= s <= m/t, got s={self.s}, m={self.m}, t={t}")


def build_generalized_power(spec: GeneralizedPowerSpec) -> Hypergraph:
    """Construct G^{m,s}.

    Labelling: base vertex ``v`` owns the block ``(v-1)*s+1 .. v*s``; after
    all vertex blocks come the filler blocks of the base edges, in edge order.
    """
    g, m, s = spec.base, spec.m, spec.s
    t = g.m
    filler = m - t * s
    blocks = {v: list(range((v - 1) * s + 1, v * s + 1)) for v in g.vertices}
    next_label = g.n * s + 1
    edges = []
    for e in g.edges:
        verts = [u for v in e for u in blocks[v]]
        verts.extend(range(next_label, next_label + filler))
        next_label += filler
        edges.append(verts)
    return Hypergraph(next_label - 1, m, edges)


def generalized_power(base: Hypergraph, m: int, s: int) -> Hypergraph:
    return build_generalized_power(GeneralizedPowerSpec(base, m, s))


def find_p_hm_bipartition(g: Hypergraph) -> Optional[tuple[frozenset, int]]:
    """Smallest ``p`` (1 <= p <= m-1) admitting V1 with ``|e & V1| == p`` for every edge.

    Among the valid V1 for that ``p`` the lexicographically smallest sorted
    vertex list is returned. Exhaustive with per-edge count propagation;
    intended for n <= 30.
    """
    incident = [[] for _ in range(g.n + 1)]
    for idx, e in enumerate(g.edges):
        for v in e:
            incident[v].append(idx)
    # position of the last vertex of each edge: once passed, the count is final
    for p in range(1, g.m):
        found = _lex_smallest_bipartition(g, p, incident)
        if found is not None:
            return frozenset(found), p
    return None


def _lex_smallest_bipartition(g, p, incident):
    n = g.n
    inside = [0] * len(g.edges)       # vertices of the edge already placed in V1
    undecided = [g.m] * len(g.edges)  # vertices of the edge not yet decided

    def can_close_from(k):
        # exclude every vertex >= k
        return all(inside[i] == p for i in range(len(g.edges)))

    def decide(v, into):
        ok = True
        for i in incident[v]:
            undecided[i] -= 1
            if into:
                inside[i] += 1
            if inside[i] > p or inside[i] + undecided[i] < p:
                ok = False
        return ok

    def undo(v, into):
        for i in incident[v]:
            undecided[i] += 1
            if into:
                inside[i] -= 1

    # Depth-first in list-lex order: the shortest completion of the chosen
    # prefix wins, otherwise the smallest next element.
    def search(k, chosen):
        # choose the next element of V1 among vertices >= k, excluding k..v-1
        if chosen and can_close_from(k):
            return list(chosen)
        excluded = []
        result = None
        for v in range(k, n + 1):
            if decide(v, True):
                chosen.append(v)
                result = search(v + 1, chosen)
                chosen.pop()
            undo(v, True)
            if result is not None:
                break
            # v stays out of V1 from here on
            ok = decide(v, False)
            excluded.append(v)
            if not ok:
                break
        for v in reversed(excluded):
            undo(v, False)
        return result

    return search(1, [])


def contains_simplex(g: Hypergraph) -> bool:
    """True iff some m+1 vertices have all their m-subsets as edges."""
    edges = set(g.edges)
    for sub in itertools.combinations(g.vertices, g.m + 1):
        if all(face in edges for face in itertools.combinations(sub, g.m)):
            return True
    return False
