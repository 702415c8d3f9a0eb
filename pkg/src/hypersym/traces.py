"""Generalized traces Tr_d(A) by the closed-walk formula.

For an order-``m`` dimension-``n`` tensor,

    Tr_d(A) = (m-1)^(n-1) * sum over F in F_d of  b(F)/c(F) * Pi_F(A) * |W(F)|

where ``F`` runs over ``d`` pairs (primary index, ordered tuple of ``m-1``
secondary indices) with nondecreasing primaries, ``D(F)`` is the multigraph
with an arc from each primary to each of its secondaries, ``b`` is the
product of factorials of arc multiplicities, ``c`` the product of factorials
of out-degrees, and ``W(F)`` the closed walks using exactly the arcs of
``D(F)``.

Walk-count convention (fixed by calibration against matrix traces): a closed
walk is a cyclic vertex sequence ``v_0 v_1 ... v_{N-1}`` with ``N = d(m-1)``,
counted once per starting position, with parallel arcs indistinguishable.
This is what the term-by-term expansion of ``Tr(A^N)`` counts.
:func:`walk_count` returns the number of such walks anchored at the smallest
vertex; :func:`closed_walk_count` rescales it by ``N / outdeg(v_0)`` (each
rotation class is hit ``outdeg(v_0)`` times from ``v_0``). With this
convention the formula reproduces ``trace(A^d)`` exactly for every matrix.

Instead of the ordered ``F_d`` the enumeration runs over classes: multisets
of (primary, sorted secondary multiset) items. All members of a class share
``D(F)``; their summed ``Pi_F(A)`` is a multinomial times a product of
per-item sums over the distinct orderings of the secondaries.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

from .lattice import determinant
from .tensor import SparseTensor

DEFAULT_CLASS_CAP = 10_000_000

Arc = tuple[int, int]


class TraceCapExceeded(RuntimeError):
    def __init__(self, d: int, cap: int):
        self.d = d
        self.cap = cap
        super().__init__(f"trace enumeration for d={d} exceeded the class cap {cap}")


# ---------------------------------------------------------------------------
# arc multisets and walk counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcMultiset:
    """Directed arcs with multiplicities, stored as a sorted tuple of ``((u, v), count)``."""

    arcs: tuple[tuple[Arc, int], ...]

    def __init__(self, arcs):
        if isinstance(arcs, (Counter, dict)):
            counts = Counter(arcs)
        else:
            counts = Counter(tuple(a) for a in arcs)
        object.__setattr__(self, "arcs", tuple(sorted((a, k) for a, k in counts.items() if k > 0)))

    @property
    def size(self) -> int:
        return sum(k for _, k in self.arcs)

    def vertices(self) -> list[int]:
        return sorted({v for (a, _) in self.arcs for v in a})

    def out_degrees(self) -> dict[int, int]:
        deg = defaultdict(int)
        for (u, _), k in self.arcs:
            deg[u] += k
        return dict(deg)

    def in_degrees(self) -> dict[int, int]:
        deg = defaultdict(int)
        for (_, v), k in self.arcs:
            deg[v] += k
        return dict(deg)

    def is_balanced(self) -> bool:
        out, inn = self.out_degrees(), self.in_degrees()
        return all(out.get(v, 0) == inn.get(v, 0) for v in self.vertices())

    def is_weakly_connected(self) -> bool:
        verts = self.vertices()
        if not verts:
            return True
        parent = {v: v for v in verts}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for (u, v), _ in self.arcs:
            parent[find(u)] = find(v)
        return len({find(v) for v in verts}) == 1

    def is_eulerian(self) -> bool:
        return bool(self.arcs) and self.is_balanced() and self.is_weakly_connected()

    def canonical(self) -> "ArcMultiset":
        """Relabel vertices to ``0..k-1`` preserving their order (cache key)."""
        relabel = {v: i for i, v in enumerate(self.vertices())}
        return ArcMultiset({(relabel[u], relabel[v]): k for (u, v), k in self.arcs})


def b_of(e: ArcMultiset) -> int:
    """Product of the factorials of the arc multiplicities."""
    return math.prod(math.factorial(k) for _, k in e.arcs)


def c_of(e: ArcMultiset) -> int:
    """Product of the factorials of the out-degrees."""
    return math.prod(math.factorial(k) for k in e.out_degrees().values())


def walk_count(e: ArcMultiset) -> int:
    """Closed walks from the smallest vertex using every arc of ``e`` exactly once.

    Parallel arcs are indistinguishable. Zero unless ``e`` is Eulerian.
    Memoized depth-first enumeration over (current vertex, arcs left).
    """
    if not e.is_eulerian():
        return 0
    arcs = [a for a, _ in e.arcs]
    start = e.vertices()[0]
    by_tail = defaultdict(list)
    for pos, (u, v) in enumerate(arcs):
        by_tail[u].append((pos, v))

    @lru_cache(maxsize=None)
    def count(here, left):
        if not any(left):
            return 1 if here == start else 0
        total = 0
        for pos, nxt in by_tail[here]:
            if left[pos]:
                rest = list(left)
                rest[pos] -= 1
                total += count(nxt, tuple(rest))
        return total

    return count(start, tuple(k for _, k in e.arcs))


def arborescences(e: ArcMultiset, root: int) -> int:
    """Spanning arborescences oriented toward ``root`` (matrix-tree theorem)."""
    verts = [v for v in e.vertices() if v != root]
    pos = {v: i for i, v in enumerate(verts)}
    lap = [[0] * len(verts) for _ in verts]
    for (u, v), k in e.arcs:
        if u == v or u == root:
            continue
        lap[pos[u]][pos[u]] += k
        if v != root:
            lap[pos[u]][pos[v]] -= k
    return determinant(lap)


def closed_walk_count(e: ArcMultiset, method: str = "best") -> int:
    """|W(F)|: closed walks counted once per starting position.

    ``method="best"`` uses the BEST theorem, ``"enumerate"`` rescales
    :func:`walk_count`. Both give the same integer.
    """
    if not e.is_eulerian():
        return 0
    v0 = e.vertices()[0]
    out = e.out_degrees()
    n_arcs = e.size
    if method == "enumerate":
        val = Fraction(n_arcs * walk_count(e), out[v0])
    elif method == "best":
        tree = arborescences(e, v0)
        circuits = tree * math.prod(math.factorial(k - 1) for k in out.values())
        val = Fraction(n_arcs * circuits, b_of(e))
    else:
        raise ValueError(f"unknown walk-count method {method!r}")
    if val.denominator != 1:
        raise AssertionError(f"non-integral walk count {val} for {e}")
    return int(val)


# ---------------------------------------------------------------------------
# class enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Item:
    primary: int
    secondary: tuple[int, ...]     # sorted multiset of m-1 indices
    value: Fraction                # sum of a[primary, alpha] over distinct orderings alpha
    orderings: int                 # number of distinct orderings of ``secondary``


@dataclass(frozen=True)
class FClass:
    """A multiset of items standing for every ordered element of F_d it collapses."""

    items: tuple[tuple[Item, int], ...]
    representatives: int           # ordered elements of F_d in the class
    weight: Fraction               # sum of Pi_F(A) over those elements

    @property
    def d(self) -> int:
        return sum(k for _, k in self.items)

    def arcs(self) -> ArcMultiset:
        cached = self.__dict__.get("_arcs")
        if cached is not None:
            return cached
        counts = Counter()
        for item, k in self.items:
            for v in item.secondary:
                counts[(item.primary, v)] += k
        arcs = ArcMultiset(counts)
        object.__setattr__(self, "_arcs", arcs)
        return arcs


def collapse_entries(a: SparseTensor) -> list[Item]:
    """Group entries by (primary, sorted secondaries), summing their values."""
    sums = defaultdict(Fraction)
    for idx, val in a.entries.items():
        if not isinstance(val, Fraction):
            raise TypeError("trace computation needs exact rational entries")
        sums[(idx[0], tuple(sorted(idx[1:])))] += val
    items = []
    for (i, beta), val in sorted(sums.items()):
        if val == 0:
            continue
        orderings = math.factorial(len(beta)) // math.prod(
            math.factorial(k) for k in Counter(beta).values())
        items.append(Item(i, beta, val, orderings))
    return items


def _contribution(item: Item, n: int, m: int) -> list[int]:
    c = [0] * (n + 1)
    for v in item.secondary:
        c[v] += 1
    c[item.primary] -= m - 1
    return c


def enumerate_f_classes(a: SparseTensor, d: int, cap: int = DEFAULT_CLASS_CAP,
                        items: Optional[list[Item]] = None) -> Iterator[FClass]:
    """Yield every class of F_d whose digraph is balanced and weakly connected.

    Balance (in-degree = out-degree at every vertex) implies that every index
    occurs a multiple of ``m`` times. It is enforced during the search with
    interval bounds on what the remaining items can still contribute.
    """
    if d < 1:
        raise ValueError("d must be positive")
    n, m = a.n, a.m
    if items is None:
        items = collapse_entries(a)
    if not items:
        return
    contrib = [_contribution(it, n, m) for it in items]
    nitems = len(items)
    verts = range(1, n + 1)
    # suffix bounds on a single item's contribution per vertex
    lo = [[0] * (n + 1) for _ in range(nitems + 1)]
    hi = [[0] * (n + 1) for _ in range(nitems + 1)]
    for p in range(nitems - 1, -1, -1):
        for v in verts:
            cv = contrib[p][v]
            if p == nitems - 1:
                lo[p][v] = hi[p][v] = cv
            else:
                lo[p][v] = min(cv, lo[p + 1][v])
                hi[p][v] = max(cv, hi[p + 1][v])
    bal = [0] * (n + 1)
    chosen = [0] * nitems
    generated = 0

    def feasible(p, r):
        if r == 0:
            return not any(bal)
        if p == nitems:
            return False
        for b, l, h in zip(bal, lo[p], hi[p]):
            if -b < r * l or -b > r * h:
                return False
        return True

    touched = [[v for v in verts if c[v]] for c in contrib]

    def search():
        # iterative depth-first walk over counts, k = 0 first at every item
        nonlocal generated
        rem = [0] * (nitems + 1)
        rem[0] = d
        p, fresh = 0, True
        while p >= 0:
            r = rem[p]
            if fresh:
                k, fresh = 0, False
            else:
                k = chosen[p] + 1
                cv = contrib[p]
                if k > r:
                    for v in touched[p]:
                        bal[v] -= chosen[p] * cv[v]
                    chosen[p] = 0
                    p -= 1
                    continue
                chosen[p] = k
                for v in touched[p]:
                    bal[v] += cv[v]
            if feasible(p + 1, r - k):
                if r == k:
                    generated += 1
                    if generated > cap:
                        raise TraceCapExceeded(d, cap)
                    yield list(chosen)
                else:
                    p += 1
                    rem[p] = r - k
                    fresh = True

    if not feasible(0, d):
        return
    integral = all(it.value.denominator == 1 for it in items)
    for counts in search():
        picked = tuple((items[p], k) for p, k in enumerate(counts) if k)
        if not _items_connected(picked):
            continue
        arcs = Counter()
        for item, k in picked:
            for v in item.secondary:
                arcs[(item.primary, v)] += k
        cls = _make_class(picked, integral)
        object.__setattr__(cls, "_arcs", ArcMultiset(arcs))
        yield cls


def _items_connected(picked) -> bool:
    parent: dict[int, int] = {}

    def find(v):
        parent.setdefault(v, v)
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for item, _ in picked:
        root = find(item.primary)
        for v in item.secondary:
            other = find(v)
            if other != root:
                parent[other] = root
    return len({find(v) for v in parent}) == 1


def _make_class(picked: tuple[tuple[Item, int], ...], integral: bool = False) -> FClass:
    per_primary = defaultdict(list)
    for item, k in picked:
        per_primary[item.primary].append(k)
    multinom = 1
    for ks in per_primary.values():
        multinom *= math.factorial(sum(ks)) // math.prod(math.factorial(k) for k in ks)
    reps = multinom * math.prod(item.orderings ** k for item, k in picked)
    if integral:
        weight = Fraction(multinom * math.prod(item.value.numerator ** k for item, k in picked))
    else:
        weight = multinom * math.prod((item.value ** k for item, k in picked), start=Fraction(1))
    return FClass(picked, reps, weight)


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------

# canonical multiset -> factor, shared by every cache of the same method; the
# values are pure functions of the key, so sharing across tensors is safe
_SHARED: dict[str, dict[ArcMultiset, Fraction]] = {"best": {}, "enumerate": {}}
_SHARED_LIMIT = 500_000


class WalkCache:
    """Walk-count factor ``b(F)/c(F) * |W(F)|`` keyed by canonical arc multiset."""

    def __init__(self, method: str = "best"):
        if method not in _SHARED:
            raise ValueError(f"unknown walk-count method {method!r}")
        self.method = method
        self._store = _SHARED[method]
        if len(self._store) > _SHARED_LIMIT:
            self._store.clear()
        self._raw: dict[ArcMultiset, Fraction] = {}   # skips relabelling on repeat hits

    def factor(self, e: ArcMultiset) -> Fraction:
        val = self._raw.get(e)
        if val is not None:
            return val
        key = e.canonical()
        val = self._store.get(key)
        if val is None:
            val = Fraction(b_of(key) * closed_walk_count(key, self.method), c_of(key))
            self._store.setdefault(key, val)
        self._raw[e] = val
        return val

    def __len__(self):
        return len(self._raw)


def generalized_trace(a: SparseTensor, d: int, cap: int = DEFAULT_CLASS_CAP,
                      walks: str = "best", cache: Optional[WalkCache] = None,
                      items: Optional[list[Item]] = None) -> Fraction:
    """Exact Tr_d(A)."""
    if cache is None:
        cache = WalkCache(walks)
    total = Fraction(0)
    for cls in enumerate_f_classes(a, d, cap=cap, items=items):
        total += cls.weight * cache.factor(cls.arcs())
    return (a.m - 1) ** (a.n - 1) * total


@dataclass
class TraceTable:
    """Tr_d(A) for d = 1..d_max; ``values[d]`` is ``None`` where ``complete[d]`` is False."""

    values: dict[int, Optional[Fraction]]
    d_max: int
    complete: dict[int, bool] = field(default_factory=dict)
    m: int = 0
    n: int = 0

    def __getitem__(self, d: int) -> Fraction:
        val = self.values.get(d)
        if val is None:
            raise KeyError(f"Tr_{d} not available (depth {self.depth})")
        return val

    @property
    def depth(self) -> int:
        """Largest k such that Tr_1..Tr_k are all known."""
        k = 0
        while self.values.get(k + 1) is not None:
            k += 1
        return k

    @property
    def is_complete(self) -> bool:
        return self.depth >= self.d_max

    def as_list(self) -> list[Fraction]:
        return [self.values[d] for d in range(1, self.depth + 1)]

    def to_records(self) -> list[dict]:
        return [{"d": d, "num": v.numerator, "den": v.denominator}
                for d, v in sorted(self.values.items()) if v is not None]


def trace_table(a: SparseTensor, d_max: int, cap: int = DEFAULT_CLASS_CAP, walks: str = "best",
                partial: bool = False) -> TraceTable:
    """Tr_1..Tr_{d_max} with a shared walk-count cache.

    With ``partial=True`` a cap overrun marks that ``d`` (and every larger one)
    incomplete instead of raising.
    """
    cache = WalkCache(walks)
    items = collapse_entries(a)
    values: dict[int, Optional[Fraction]] = {}
    complete = {}
    for d in range(1, d_max + 1):
        try:
            values[d] = generalized_trace(a, d, cap=cap, cache=cache, items=items)
            complete[d] = True
        except TraceCapExceeded:
            if not partial:
                raise
            for rest in range(d, d_max + 1):
                values[rest] = None
                complete[rest] = False
            break
    return TraceTable(values, d_max, complete, a.m, a.n)


def matrix_trace_oracle(a: SparseTensor, d: int) -> Fraction:
    """trace(A^d) for an order-2 tensor, by exact matrix powers."""
    if a.m != 2:
        raise ValueError("matrix trace oracle needs an order-2 tensor")
    n = a.n
    mat = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in a.entries.items():
        mat[i - 1][j - 1] = v
    power = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(d):
        power = [[sum(power[i][k] * mat[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return sum(power[i][i] for i in range(n))


def brute_force_trace(a: SparseTensor, d: int, walks: str = "enumerate") -> Fraction:
    """Literal sum over ordered F_d (nondecreasing primaries, ordered secondary tuples).

    Exponential; only for cross-checking the class enumeration at tiny sizes.
    """
    by_primary = defaultdict(list)
    for idx, val in a.entries.items():
        by_primary[idx[0]].append((idx[1:], val))
    primaries = sorted(by_primary)
    total = Fraction(0)

    def rec(pos, min_primary, arcs, prod):
        nonlocal total
        if pos == d:
            e = ArcMultiset(arcs)
            total += Fraction(b_of(e), c_of(e)) * prod * closed_walk_count(e, walks)
            return
        for i in primaries:
            if i < min_primary:
                continue
            for alpha, val in by_primary[i]:
                arcs.update((i, v) for v in alpha)
                rec(pos + 1, i, arcs, prod * val)
                arcs.subtract((i, v) for v in alpha)

    rec(0, 1, Counter(), Fraction(1))
    return (a.m - 1) ** (a.n - 1) * total


__all__ = [
    "ArcMultiset", "FClass", "Item", "TraceCapExceeded", "TraceTable", "WalkCache",
    "arborescences", "b_of", "brute_force_trace", "c_of", "closed_walk_count",
    "collapse_entries", "enumerate_f_classes", "generalized_trace", "matrix_trace_oracle",
    "trace_table", "walk_count",
]

