"""Spectral symmetry verdicts, modular colorings, odd transversals and chromatic bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .group import GroupError, enumerate_group, exact_cyclic_index, order_p_element, prime_factors, prime_part
from .hypergraph import Hypergraph, find_p_hm_bipartition, is_connected
from .lattice import solve_congruence
from .tensor import SparseTensor, adjacency_tensor
from .traces import DEFAULT_CLASS_CAP, TraceCapExceeded, WalkCache, collapse_entries, generalized_trace

NOT_SYMMETRIC = "certified-not-symmetric"
CONSISTENT = "consistent-to-depth"
SYMMETRIC = "certified-symmetric"


# ---------------------------------------------------------------------------
# trace-based verdicts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetryVerdict:
    ell: int
    status: str
    depth: int                       # traces Tr_1..Tr_depth were inspected
    witness: Optional[int] = None    # d with ell not dividing d and Tr_d != 0
    certificate: object = None

    def __post_init__(self):
        if self.status == NOT_SYMMETRIC and (self.witness is None or self.witness % self.ell == 0):
            raise ValueError("a negative verdict needs a witness d with ell not dividing d")


def _traces(a: SparseTensor, d_max: int, cap: int):
    """Yield (d, Tr_d) until ``d_max`` or the first cap overrun."""
    cache = WalkCache()
    items = collapse_entries(a)
    for d in range(1, d_max + 1):
        try:
            yield d, generalized_trace(a, d, cap=cap, cache=cache, items=items)
        except TraceCapExceeded:
            return


def is_ell_symmetric_traces(a: SparseTensor, ell: int, d_max: int, cap: int = DEFAULT_CLASS_CAP,
                            certify: bool = False) -> SymmetryVerdict:
    """Three-valued spectral ell-symmetry verdict from Tr_1..Tr_{d_max}.

    A nonzero Tr_d with ``ell`` not dividing ``d`` refutes symmetry. Otherwise
    the answer is only consistent up to the depth reached; with ``certify``
    an (m, ell)-coloring is tried as a positive certificate.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    depth = 0
    for d, tr in _traces(a, d_max, cap):
        depth = d
        if tr != 0 and d % ell:
            return SymmetryVerdict(ell, NOT_SYMMETRIC, depth, witness=d)
    if certify and a.m % ell == 0:
        cert = coloring_exists(a, a.m, a.m // ell)
        if cert is not None:
            return SymmetryVerdict(ell, SYMMETRIC, depth, certificate=cert)
    return SymmetryVerdict(ell, CONSISTENT, depth)


@dataclass(frozen=True)
class CyclicWindow:
    """gcd of the degrees d <= depth with Tr_d != 0; the true index divides it when positive."""

    c_hat: int
    depth: int
    d_max: int
    nonzero: tuple[int, ...]
    label: str = "upper-multiple"

    @property
    def complete(self) -> bool:
        return self.depth >= self.d_max


def cyclic_index_window(a: SparseTensor, d_max: int, cap: int = DEFAULT_CLASS_CAP) -> CyclicWindow:
    if d_max < 1:
        raise ValueError("d_max must be positive")
    nonzero = []
    depth = 0
    for d, tr in _traces(a, d_max, cap):
        depth = d
        if tr != 0:
            nonzero.append(d)
    return CyclicWindow(math.gcd(*nonzero) if nonzero else 0, depth, d_max, tuple(nonzero))


# ---------------------------------------------------------------------------
# modular colorings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ColoringCertificate:
    sigma: int
    phi: tuple[int, ...]     # phi[i-1] in 1..sigma; sigma stands for residue 0
    target: int

    def color_classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.phi, start=1):
            out.setdefault(c, []).append(v)
        return out


def _pattern_rows(a: SparseTensor) -> list[list[int]]:
    rows = set()
    for idx in a.entries:
        row = [0] * a.n
        for v in idx:
            row[v - 1] += 1
        rows.add(tuple(row))
    return [list(r) for r in sorted(rows)]


def _solve_prefix(rows, fixed, sigma, target, n):
    k = len(fixed)
    rhs = [(target - sum(r[i] * fixed[i] for i in range(k))) % sigma for r in rows]
    if k == n:
        return fixed if all(v == 0 for v in rhs) else None
    rest = solve_congruence([r[k:] for r in rows], rhs, sigma)
    return None if rest is None else fixed + rest


def coloring_exists(a: SparseTensor, sigma: int, target: int, normalize: bool = False
                    ) -> Optional[ColoringCertificate]:
    """Labels phi with sum of phi over every nonzero entry's indices == target (mod sigma).

    Returns the lexicographically smallest label vector (labels 1..sigma).
    ``normalize`` first pins ``phi(1) = sigma`` whenever that stays solvable.
    """
    if sigma < 1:
        raise ValueError("sigma must be positive")
    rows = _pattern_rows(a)
    target %= sigma
    if _solve_prefix(rows, [], sigma, target, a.n) is None:
        return None
    # residues in label order 1, 2, ..., sigma-1, then 0 (shown as sigma)
    order = list(range(1, sigma)) + [0]
    fixed: list[int] = []
    if normalize and _solve_prefix(rows, [0], sigma, target, a.n) is not None:
        fixed = [0]
    while len(fixed) < a.n:
        for r in order:
            if _solve_prefix(rows, fixed + [r], sigma, target, a.n) is not None:
                fixed.append(r)
                break
        else:
            raise AssertionError("solvable system lost solvability while fixing labels")
    cert = ColoringCertificate(sigma, tuple(v if v else sigma for v in fixed), target)
    if not verify_coloring(a, cert):
        raise AssertionError("coloring certificate fails its own check")
    return cert


def verify_coloring(a: SparseTensor, cert: ColoringCertificate) -> bool:
    if len(cert.phi) != a.n:
        return False
    return all(sum(cert.phi[v - 1] for v in idx) % cert.sigma == cert.target % cert.sigma
               for idx in a.entries)


def _divisors(k: int) -> list[int]:
    return [d for d in range(1, k + 1) if k % d == 0]


def cyclic_index_hypergraph(g: Hypergraph) -> int:
    """Largest ell dividing m such that G has an (m, ell)-coloring."""
    if not is_connected(g):
        raise ValueError("cyclic index is defined here for connected hypergraphs only")
    a = adjacency_tensor(g)
    for ell in sorted(_divisors(g.m), reverse=True):
        if coloring_exists(a, g.m, g.m // ell) is not None:
            return ell
    raise AssertionError("ell = 1 always admits the constant coloring")


@dataclass(frozen=True)
class OddTransversalResult:
    X: Optional[frozenset]

    @property
    def exists(self) -> bool:
        return self.X is not None


def odd_transversal(a: SparseTensor) -> OddTransversalResult:
    """X meeting every nonzero entry's index tuple an odd number of times (with multiplicity)."""
    cert = coloring_exists(a, 2, 1)
    if cert is None:
        return OddTransversalResult(None)
    X = frozenset(v for v, c in enumerate(cert.phi, start=1) if c == 1)
    if not verify_odd_transversal(a, X):
        raise AssertionError("odd transversal fails its parity check")
    return OddTransversalResult(X)


def verify_odd_transversal(a: SparseTensor, X) -> bool:
    return all(sum(1 for v in idx if v in X) % 2 == 1 for idx in a.entries)


# ---------------------------------------------------------------------------
# chromatic bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChromaticBound:
    bound: int
    coloring: tuple[int, ...]        # color of vertex i at position i-1
    r: int
    c: int
    candidates: dict                 # p -> r_[p] * p, plus "m" -> m
    source: str                      # "group-element" or "coloring"

    @property
    def colors_used(self) -> int:
        return len(set(self.coloring))


def is_proper(g: Hypergraph, coloring) -> bool:
    """Every edge sees at least two colors."""
    return all(len({coloring[v - 1] for v in e}) >= 2 for e in g.edges)


def chromatic_upper_bound(g: Hypergraph) -> ChromaticBound:
    """min({r_[p] p : p prime, p | c} and m) with a proper coloring using at most that many colors."""
    if not is_connected(g):
        raise ValueError("chromatic bound needs a connected hypergraph")
    a = adjacency_tensor(g)
    report = enumerate_group(a, cap=0, verify=False)
    r, c = report.s, report.c
    if c < 2:
        raise GroupError("cyclic index is 1; the chromatic bound does not apply")
    candidates: dict = {p: prime_part(r, p) * p for p in prime_factors(c)}
    candidates["m"] = g.m
    best_p = min((p for p in candidates if p != "m"), key=lambda p: candidates[p])
    if candidates[best_p] < g.m:
        elem = order_p_element(a, best_p)
        coloring = tuple(elem.diagonal.labels())
        bound, source = candidates[best_p], "group-element"
    else:
        cert = coloring_exists(a, g.m, g.m // c)
        coloring = cert.phi
        bound, source = g.m, "coloring"
    if not is_proper(g, coloring):
        raise AssertionError("chromatic certificate is not a proper coloring")
    if len(set(coloring)) > bound:
        raise AssertionError("chromatic certificate uses more colors than the bound")
    return ChromaticBound(bound, coloring, r, c, candidates, source)


def p_hm_symmetry_check(g: Hypergraph) -> bool:
    """For a p-hm bipartite G: does m / gcd(p, m) divide the cyclic index?"""
    found = find_p_hm_bipartition(g)
    if found is None:
        raise ValueError("hypergraph has no p-hm bipartition")
    _, p = found
    return cyclic_index_hypergraph(g) % (g.m // math.gcd(p, g.m)) == 0


__all__ = [
    "CONSISTENT", "ChromaticBound", "ColoringCertificate", "CyclicWindow", "NOT_SYMMETRIC",
    "OddTransversalResult", "SYMMETRIC", "SymmetryVerdict", "chromatic_upper_bound", "coloring_exists",
    "cyclic_index_hypergraph", "cyclic_index_window", "exact_cyclic_index", "is_ell_symmetric_traces",
    "is_proper", "odd_transversal", "p_hm_symmetry_check", "verify_coloring", "verify_odd_transversal",
]

