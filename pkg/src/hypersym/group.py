"""The group of normalized unimodular diagonal symmetries of a tensor.

A diagonal ``D = diag(exp(2*pi*i*theta))`` with ``theta_1 = 0`` satisfies
``A = exp(-2*pi*i*t) D^{-(m-1)} A D`` exactly when, for every nonzero entry
``a[i1, ..., im]``,

    -(m-1)*theta[i1] + theta[i2] + ... + theta[im] == t  (mod 1).

Everything below is exact integer lattice work on that system. With the
Smith form ``U M' V = S`` of the matrix ``M'`` (column 1 dropped since
``theta_1`` is pinned), the substitution ``phi = V^{-1} theta`` decouples the
system into ``s_k * phi_k == t * (U 1)_k``. The homogeneous solutions form
``Z_{s_1} + ... + Z_{s_r}`` (finite iff ``M'`` has full column rank), and a
phase ``t = 1/k`` is attainable iff ``k`` divides every ``(U 1)_k`` on the
zero rows of ``S``. The largest such ``k`` is the cyclic index: a
nonnegative weakly irreducible tensor with ``c`` eigenvalues on its spectral
circle admits a diagonal for the rotation by ``2*pi/c``, and diagonal
similarity preserves the spectrum, so no larger rotation can be realised.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .hypergraph import Hypergraph
from .lattice import SNFResult, matvec, smith_normal_form
from .tensor import SparseTensor, UnimodularDiagonal, diagonal_similarity, is_weakly_irreducible

INFINITE = math.inf
DEFAULT_GROUP_CAP = 100_000


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class ConstraintSystem:
    """One deduplicated row per nonzero entry pattern; ``theta_1`` pinned to 0."""

    m: int
    n: int
    matrix: tuple[tuple[int, ...], ...]

    @property
    def reduced(self) -> list[list[int]]:
        """The matrix without the pinned first column."""
        return [list(row[1:]) for row in self.matrix]

    def residual(self, angles, t=0) -> list[Fraction]:
        return [(sum(c * a for c, a in zip(row, angles)) - t) % 1 for row in self.matrix]

    def is_satisfied(self, angles, t=0) -> bool:
        return all(r == 0 for r in self.residual(angles, t))


def constraint_row(idx: tuple[int, ...], n: int) -> tuple[int, ...]:
    row = [0] * n
    row[idx[0] - 1] -= len(idx) - 1
    for j in idx[1:]:
        row[j - 1] += 1
    return tuple(row)


def build_constraint_system(a: SparseTensor) -> ConstraintSystem:
    ok, _ = is_weakly_irreducible(a)
    if not ok:
        warnings.warn("tensor is weakly reducible; the symmetry group may be infinite", stacklevel=2)
    rows = sorted({constraint_row(idx, a.n) for idx in a.entries})
    return ConstraintSystem(a.m, a.n, tuple(rows))


@dataclass(frozen=True)
class HomogeneousSolution:
    order: float | int          # INFINITE when the solution group is not finite
    generators: tuple[UnimodularDiagonal, ...]
    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    @property
    def finite(self) -> bool:
        return self.free_rank == 0


def _angles_from_column(snf: SNFResult, k: int, denom: int, n: int) -> UnimodularDiagonal:
    col = [snf.V[r][k] for r in range(snf.cols)]
    return UnimodularDiagonal([0] + [Fraction(v, denom) for v in col[: n - 1]])


def solve_homogeneous(cs: ConstraintSystem) -> HomogeneousSolution:
    """Solutions of ``M theta == 0 (mod 1)`` with ``theta_1 = 0``."""
    if cs.n == 1:
        return HomogeneousSolution(1, (), ())
    if not cs.matrix:
        return HomogeneousSolution(INFINITE, (), (), free_rank=cs.n - 1)
    snf = smith_normal_form(cs.reduced)
    free = (cs.n - 1) - snf.rank
    if free:
        return HomogeneousSolution(INFINITE, (), snf.invariant_factors, free_rank=free)
    gens = tuple(_angles_from_column(snf, k, s, cs.n) for k, s in enumerate(snf.diag) if s > 1)
    return HomogeneousSolution(math.prod(snf.diag), gens, snf.invariant_factors)


def attainable_phase_modulus(cs: ConstraintSystem) -> int:
    """The ``g`` such that phase ``t`` is attainable iff ``g * t`` is an integer.

    Returns 0 when every phase is attainable (a continuous rotation symmetry).
    """
    if not cs.matrix:
        return 0
    if cs.n == 1:
        return 1  # every row is zero, so only integer phases survive
    snf = smith_normal_form(cs.reduced)
    w = matvec(snf.U, [1] * len(cs.matrix))
    return math.gcd(*w[snf.rank:]) if len(w) > snf.rank else 0


def solve_phase(cs: ConstraintSystem, t) -> Optional[UnimodularDiagonal]:
    """One diagonal realising phase ``t``, or ``None`` when the system is unsolvable."""
    t = Fraction(t)
    if cs.n == 1:
        return UnimodularDiagonal([0]) if cs.is_satisfied([0], t) else None
    snf = smith_normal_form(cs.reduced)
    w = matvec(snf.U, [1] * len(cs.matrix))
    phi = [Fraction(0)] * snf.cols
    for k, wk in enumerate(w):
        s = snf.diag[k] if k < len(snf.diag) else 0
        if s == 0:
            if (t * wk) % 1:
                return None
        else:
            phi[k] = t * wk / s
    theta = [sum(snf.V[r][k] * phi[k] for k in range(snf.cols)) for r in range(snf.cols)]
    d = UnimodularDiagonal([0] + theta)
    assert cs.is_satisfied(d.angles, t)
    return d


def exact_cyclic_index(a: SparseTensor) -> int:
    """c(A) for a nonnegative weakly irreducible tensor, by exact lattice arithmetic."""
    if not a.is_nonnegative():
        raise GroupError("exact cyclic index requires a nonnegative tensor")
    ok, comps = is_weakly_irreducible(a)
    if not ok:
        raise GroupError(f"tensor is weakly reducible ({len(comps)} strong components)")
    cs = build_constraint_system(a)
    if not solve_homogeneous(cs).finite:
        raise GroupError("homogeneous solution group is infinite; cyclic index undefined here")
    g = attainable_phase_modulus(cs)
    if g == 0:
        raise GroupError("every rotation is attainable; tensor has no spectral circle structure")
    return g


# ---------------------------------------------------------------------------
# the full group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    diagonal: UnimodularDiagonal
    coset: int                  # j with D in D^(j)

    @property
    def order(self) -> int:
        return self.diagonal.order()


@dataclass
class GroupReport:
    s: int                                    # |D^(0)|
    c: int                                    # cyclic index
    total_order: int                          # |D| = s * c
    invariant_factors_D0: tuple[int, ...]
    invariant_factors_D: tuple[int, ...]
    generators_D0: tuple[UnimodularDiagonal, ...]
    generators_D: tuple[GroupElement, ...]
    coset_reps: tuple[UnimodularDiagonal, ...] = ()
    elements: Optional[tuple[GroupElement, ...]] = None
    complete: bool = True

    def coset(self, j: int) -> list[GroupElement]:
        if self.elements is None:
            raise GroupError("elements were not enumerated (cap exceeded)")
        return [e for e in self.elements if e.coset == j]


class _GroupLattice:
    """Smith coordinates of the augmented system ``[M' | -1] (theta', t) == 0``."""

    def __init__(self, a: SparseTensor):
        self.a = a
        self.cs = build_constraint_system(a)
        n = a.n
        aug = [row[1:] + (-1,) for row in self.cs.matrix]
        self.snf = smith_normal_form(aug)
        if self.snf.rank < n:
            raise GroupError("the symmetry group is infinite for this tensor")
        self.diag = self.snf.diag
        homog = solve_homogeneous(self.cs)
        self.s = homog.order
        self.homog = homog
        self.c = math.prod(self.diag) // self.s

    def element(self, coords) -> GroupElement:
        n = self.a.n
        vec = [sum(self.snf.V[r][k] * Fraction(coords[k], self.diag[k]) for k in range(n))
               for r in range(n)]
        theta = [Fraction(0)] + [v % 1 for v in vec[: n - 1]]
        t = vec[n - 1] % 1
        j = t * self.c
        assert j.denominator == 1
        return GroupElement(UnimodularDiagonal(theta), int(j))

    def elements(self, killed_by: Optional[int] = None):
        """All elements, or only those of order dividing ``killed_by``."""
        ranges = []
        for s in self.diag:
            if killed_by is None:
                ranges.append(range(0, s))
            else:
                step = s // math.gcd(s, killed_by)
                ranges.append(range(0, s, step))
        for coords in itertools.product(*ranges):
            yield self.element(coords)


def _check_group_input(a: SparseTensor):
    if not a.is_nonnegative():
        raise GroupError("symmetry group computations require a nonnegative tensor")
    ok, comps = is_weakly_irreducible(a)
    if not ok:
        raise GroupError(f"tensor is weakly reducible ({len(comps)} strong components)")


def verify_element(a: SparseTensor, elem: GroupElement, c: int) -> bool:
    return diagonal_similarity(a, elem.diagonal, Fraction(elem.coset, c)) == a


def enumerate_group(a: SparseTensor, cap: int = DEFAULT_GROUP_CAP, verify: bool = True) -> GroupReport:
    """Solve for D and D^(0); list every element when ``s * c <= cap``."""
    _check_group_input(a)
    lat = _GroupLattice(a)
    gens_d = tuple(lat.element([int(i == k) for i in range(len(lat.diag))])
                   for k, s in enumerate(lat.diag) if s > 1)
    report = GroupReport(
        s=lat.s, c=lat.c, total_order=lat.s * lat.c,
        invariant_factors_D0=lat.homog.invariant_factors,
        invariant_factors_D=lat.snf.invariant_factors,
        generators_D0=lat.homog.generators,
        generators_D=gens_d,
    )
    if report.total_order > cap:
        report.complete = False
        return report
    elems = sorted(lat.elements(), key=lambda e: (e.coset, e.diagonal.angles))
    if verify:
        for e in elems:
            if not verify_element(a, e, lat.c):
                raise AssertionError(f"group element {e} fails diagonal-similarity check")
    report.elements = tuple(elems)
    reps = {}
    for e in elems:
        reps.setdefault(e.coset, e.diagonal)
    report.coset_reps = tuple(reps[j] for j in range(lat.c))
    return report


def prime_part(r: int, p: int) -> int:
    """Largest power of ``p`` dividing ``r`` (1 when ``p`` does not divide ``r``)."""
    out = 1
    while r % p == 0:
        r //= p
        out *= p
    return out


def prime_factors(k: int) -> list[int]:
    out = []
    p = 2
    while p * p <= k:
        if k % p == 0:
            out.append(p)
            while k % p == 0:
                k //= p
        p += 1
    if k > 1:
        out.append(k)
    return out


def order_p_element(a: SparseTensor, p: int) -> GroupElement:
    """An element outside D^(0) whose order divides ``r_[p] * p``.

    Smallest order first, then smallest coset, then lexicographic angles.
    """
    _check_group_input(a)
    lat = _GroupLattice(a)
    if lat.c % p or p not in prime_factors(p):
        raise GroupError(f"{p} is not a prime dividing the cyclic index {lat.c}")
    bound = prime_part(lat.s, p) * p
    candidates = [e for e in lat.elements(killed_by=bound) if e.coset != 0]
    if not candidates:
        raise AssertionError("no element outside D^(0) of the guaranteed order")
    best = min(candidates, key=lambda e: (e.order, e.coset, e.diagonal.angles))
    if not verify_element(a, best, lat.c):
        raise AssertionError("order-p element fails diagonal-similarity check")
    return best


# ---------------------------------------------------------------------------
# structural partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructurePartition:
    parts: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]     # label l_i of each part, l_1 = sigma
    sigma: int
    j: int
    ell: int

    def label_of(self) -> dict[int, int]:
        return {v: lab for part, lab in zip(self.parts, self.labels) for v in part}

    def part_of(self) -> dict[int, int]:
        return {v: k for k, part in enumerate(self.parts) for v in part}


def _congruence_holds(sp: StructurePartition, labels, m: int, symmetric: bool) -> bool:
    lhs = Fraction(sp.j, sp.ell)
    if not symmetric:
        lhs += Fraction(m * labels[0], sp.sigma)
    return (lhs - Fraction(sum(labels), sp.sigma)) % 1 == 0


def structure_partition(a: SparseTensor, d: UnimodularDiagonal, j: int,
                        ell: Optional[int] = None) -> StructurePartition:
    """Group indices by equal angle of ``d``; label each part by ``sigma * angle``.

    The partition is re-verified against every nonzero entry.
    """
    if d.is_identity():
        raise GroupError("structure partition needs a non-identity diagonal")
    if ell is None:
        ell = exact_cyclic_index(a)
    sigma = d.order()
    labels = d.labels(sigma)
    parts: dict[int, list[int]] = {}
    for v, lab in enumerate(labels, start=1):
        parts.setdefault(lab, []).append(v)
    keys = list(parts)
    sp = StructurePartition(tuple(tuple(parts[k]) for k in keys), tuple(keys), sigma, j, ell)
    label = sp.label_of()
    for idx in a.entries:
        if not _congruence_holds(sp, [label[i] for i in idx], a.m, symmetric=False):
            raise GroupError(f"entry {idx} violates the partition congruence; is d in D^({j})?")
    return sp


@dataclass
class ForbiddenPatternReport:
    patterns: list[tuple[int, ...]]          # part indices (0-based) per tensor position
    non_edges: Optional[list[tuple[int, ...]]] = None
    symmetric: bool = False


def forbidden_pattern_report(a: SparseTensor, sp: StructurePartition, symmetric: Optional[bool] = None,
                             hypergraph: Optional[Hypergraph] = None) -> ForbiddenPatternReport:
    """Block patterns whose congruence fails, each checked to carry a zero subtensor.

    In the symmetric case the labels of all positions enter on an equal
    footing; otherwise the primary position carries the extra ``m * l`` term.
    """
    if symmetric is None:
        symmetric = a.is_symmetric()
    if symmetric and any((a.m * lab) % sp.sigma for lab in sp.labels):
        raise GroupError("symmetric congruence needs sigma | m * l_i for every label")
    part = sp.part_of()
    occupied = {tuple(part[i] for i in idx) for idx in a.entries}
    patterns = []
    for pat in itertools.product(range(len(sp.parts)), repeat=a.m):
        if _congruence_holds(sp, [sp.labels[k] for k in pat], a.m, symmetric):
            continue
        if pat in occupied:
            raise AssertionError(f"block pattern {pat} should vanish but the tensor has entries there")
        patterns.append(pat)
    report = ForbiddenPatternReport(patterns, symmetric=symmetric)
    if hypergraph is not None:
        forbidden = {tuple(sorted(p)) for p in patterns}
        report.non_edges = [e for e in itertools.combinations(range(1, hypergraph.n + 1), hypergraph.m)
                            if tuple(sorted(part[v] for v in e)) in forbidden]
        edges = set(hypergraph.edges)
        clash = [e for e in report.non_edges if e in edges]
        if clash:
            raise AssertionError(f"forbidden sets {clash} are edges")
    return report
