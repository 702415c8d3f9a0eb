"""Small hypergraph corpora shared by the tests."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from hypersym.hypergraph import Hypergraph, is_connected

SHIFT6_ENTRIES = [(1, 2, 3), (2, 3, 4), (3, 4, 5), (4, 5, 6), (5, 6, 1), (6, 1, 2)]
TIGHT6_EDGES = [(1, 2, 3), (2, 3, 4), (3, 4, 5), (4, 5, 6), (1, 5, 6), (1, 2, 6)]
TIGHT6_NON_EDGES = [(1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 4, 5), (1, 4, 6), (2, 3, 5),
                  (2, 4, 5), (2, 5, 6), (1, 3, 6), (2, 3, 6), (3, 4, 6), (3, 5, 6)]


def canonical_edges(n: int, edges) -> tuple:
    """Lexicographically least relabelled edge list over all vertex permutations."""
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        relabelled = tuple(sorted(tuple(sorted(perm[v - 1] for v in e)) for e in edges))
        if best is None or relabelled < best:
            best = relabelled
    return best


@lru_cache(maxsize=None)
def connected_uniform_corpus(m: int = 3, n_max: int = 5) -> tuple[Hypergraph, ...]:
    """Every connected m-uniform hypergraph on m..n_max vertices, one per isomorphism class."""
    out = []
    for n in range(m, n_max + 1):
        triples = list(itertools.combinations(range(1, n + 1), m))
        seen = set()
        for mask in range(1, 1 << len(triples)):
            edges = [t for k, t in enumerate(triples) if mask >> k & 1]
            g = Hypergraph(n, m, edges)
            if not is_connected(g):
                continue
            key = canonical_edges(n, edges)
            if key in seen:
                continue
            seen.add(key)
            out.append(Hypergraph(n, m, key))
    return tuple(out)


def zero_one_matrix_classes(n: int) -> np.ndarray:
    """One 0/1 n x n matrix per class under simultaneous row/column permutation and transposition.

    Both operations leave trace(A^d) unchanged, so checking one member per class
    covers every 0/1 matrix.
    """
    mats = np.array(list(itertools.product((0, 1), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    weights = 1 << np.arange(n * n, dtype=np.int64)
    codes = []
    for variant in (mats, mats.transpose(0, 2, 1)):
        for perm in itertools.permutations(range(n)):
            p = np.array(perm)
            codes.append((variant[:, p][:, :, p].reshape(len(mats), -1) * weights).sum(1))
    keys = np.min(np.stack(codes), axis=0)
    _, first = np.unique(keys, return_index=True)
    return mats[np.sort(first)]
