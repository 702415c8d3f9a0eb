"""Sparse tensors with exact entries, eigen-equation primitives and structural predicates."""

from __future__ import annotations

import cmath
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .hypergraph import Hypergraph, ParseError

DEFAULT_ENTRY_CAP = 5_000_000


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def reduce_angle(angle) -> Fraction:
    return Fraction(angle) % 1


@dataclass(frozen=True)
class Phasor:
    """The exact value ``magnitude * exp(2*pi*i*angle)`` with rational magnitude and angle.

    Use :func:`phasor` to build one; it collapses real values back to ``Fraction``.
    """

    magnitude: Fraction
    angle: Fraction

    def __complex__(self):
        return complex(float(self.magnitude) * cmath.exp(2j * math.pi * float(self.angle)))

    def __mul__(self, other):
        if isinstance(other, Phasor):
            return phasor(self.magnitude * other.magnitude, self.angle + other.angle)
        if isinstance(other, (int, Fraction)):
            return phasor(self.magnitude * other, self.angle)
        return complex(self) * other

    __rmul__ = __mul__

    def __abs__(self):
        return self.magnitude

    def __repr__(self):
        return f"Phasor({self.magnitude}, {self.angle})"


def phasor(magnitude, angle):
    """Exact cyclotomic value; returns a ``Fraction`` when the value is real."""
    magnitude = Fraction(magnitude)
    angle = reduce_angle(angle)
    if magnitude < 0:
        magnitude, angle = -magnitude, reduce_angle(angle + Fraction(1, 2))
    if magnitude == 0 or angle == 0:
        return magnitude
    if angle == Fraction(1, 2):
        return -magnitude
    return Phasor(magnitude, angle)


def _to_phasor(value):
    if isinstance(value, Phasor):
        return value
    value = as_fraction(value)
    if value >= 0:
        return Phasor(value, Fraction(0))
    return Phasor(-value, Fraction(1, 2))


class SparseTensor:
    """Order-``m`` dimension-``n`` tensor stored as ``{(i1, ..., im): value}``.

    Indices are 1-based. Zero values are dropped. Values are exact
    (``Fraction`` or :class:`Phasor`) unless the caller supplies floats.
    """

    __slots__ = ("m", "n", "entries", "_hash")

    def __init__(self, m: int, n: int, entries: Mapping[tuple, object] = (),
                 symmetric: bool = False, entry_cap: int = DEFAULT_ENTRY_CAP):
        if m < 2:
            raise ValueError(f"order must be at least 2, got {m}")
        if n < 1:
            raise ValueError(f"dimension must be positive, got {n}")
        items = entries.items() if isinstance(entries, Mapping) else entries
        store = {}
        for idx, val in items:
            idx = tuple(int(i) for i in idx)
            if len(idx) != m:
                raise ValueError(f"index {idx} has length {len(idx)}, expected {m}")
            if min(idx) < 1 or max(idx) > n:
                raise ValueError(f"index {idx} out of range 1..{n}")
            if isinstance(val, int):
                val = Fraction(val)
            if val == 0:
                continue
            store[idx] = val
        if len(store) > entry_cap:
            raise ValueError(f"{len(store)} entries exceed the entry cap {entry_cap}")
        self.m = m
        self.n = n
        self.entries = store
        self._hash = None
        if symmetric and not self.is_symmetric():
            raise ValueError("tensor flagged symmetric but entries are not permutation invariant")

    def __eq__(self, other):
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return self.m == other.m and self.n == other.n and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, self.n, frozenset(self.entries.items())))
        return self._hash

    def __repr__(self):
        return f"SparseTensor(m={self.m}, n={self.n}, nnz={len(self.entries)})"

    def __getitem__(self, idx):
        return self.entries.get(tuple(idx), Fraction(0))

    def __len__(self):
        return len(self.entries)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_symmetric(self) -> bool:
        for idx, val in self.entries.items():
            for perm in set(itertools.permutations(idx)):
                if self.entries.get(perm, 0) != val:
                    return False
        return True

    def is_exact(self) -> bool:
        return all(isinstance(v, (Fraction, Phasor)) for v in self.entries.values())

    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.entries.values())

    def is_nonnegative(self) -> bool:
        return all(isinstance(v, Fraction) and v > 0 for v in self.entries.values())

    def has_zero_diagonal(self) -> bool:
        return not any(len(set(idx)) == 1 for idx in self.entries)

    def patterns(self) -> list[tuple[int, ...]]:
        """Index tuples of the nonzero entries, sorted."""
        return sorted(self.entries)

    def __add__(self, other):
        self._check_shape(other)
        out = dict(self.entries)
        for idx, val in other.entries.items():
            out[idx] = out.get(idx, 0) + val
        return SparseTensor(self.m, self.n, out)

    def __neg__(self):
        return SparseTensor(self.m, self.n, {i: -v for i, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def _check_shape(self, other):
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("tensor shapes differ")


def zero_tensor(m: int, n: int) -> SparseTensor:
    return SparseTensor(m, n, {})


def matrix_tensor(rows: Sequence[Sequence]) -> SparseTensor:
    """Wrap a square matrix as an order-2 tensor."""
    n = len(rows)
    return SparseTensor(2, n, {(i + 1, j + 1): as_fraction(v)
                               for i, row in enumerate(rows) for j, v in enumerate(row) if v})


# ---------------------------------------------------------------------------
# hypergraph tensors
# ---------------------------------------------------------------------------

def adjacency_tensor(g: Hypergraph) -> SparseTensor:
    """Value ``1/(m-1)!`` on every permutation of every edge."""
    val = Fraction(1, math.factorial(g.m - 1))
    entries = {}
    for e in g.edges:
        for perm in itertools.permutations(e):
            entries[perm] = val
    return SparseTensor(g.m, g.n, entries)


def degree_tensor(g: Hypergraph) -> SparseTensor:
    return SparseTensor(g.m, g.n, {(v,) * g.m: Fraction(d) for v, d in zip(g.vertices, g.degrees())})


def laplacian_tensor(g: Hypergraph) -> SparseTensor:
    return degree_tensor(g) - adjacency_tensor(g)


def signless_laplacian_tensor(g: Hypergraph) -> SparseTensor:
    return degree_tensor(g) + adjacency_tensor(g)


# ---------------------------------------------------------------------------
# eigen-equation primitives
# ---------------------------------------------------------------------------

def _check_len(a: SparseTensor, x):
    if len(x) != a.n:
        raise ValueError(f"vector has length {len(x)}, tensor dimension is {a.n}")


def _scalar(value):
    return complex(value) if isinstance(value, Phasor) else value


def apply(a: SparseTensor, x: Sequence) -> list:
    """``A x^{m-1}``: component ``i`` sums ``a[i,i2..im] * x[i2] ... x[im]``.

    Plain Python arithmetic, so rational inputs give exact results.
    """
    _check_len(a, x)
    out = [0] * a.n
    for idx, val in a.entries.items():
        term = _scalar(val)
        for j in idx[1:]:
            term = term * x[j - 1]
        out[idx[0] - 1] = out[idx[0] - 1] + term
    return out


class CompiledTensor:
    """Float/complex view of a tensor for fast repeated products with numpy."""

    def __init__(self, a: SparseTensor):
        self.m, self.n = a.m, a.n
        if a.entries:
            idx = np.array(list(a.entries), dtype=np.int64) - 1
            vals = [complex(v) if isinstance(v, Phasor) else v for v in a.entries.values()]
            self.rows = idx[:, 0]
            self.cols = idx[:, 1:]
            self.values = np.array([complex(v) if isinstance(v, complex) else float(v) for v in vals])
        else:
            self.rows = np.zeros(0, dtype=np.int64)
            self.cols = np.zeros((0, a.m - 1), dtype=np.int64)
            self.values = np.zeros(0)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        dtype = np.result_type(x.dtype, self.values.dtype)
        out = np.zeros(self.n, dtype=dtype)
        if len(self.values):
            terms = self.values * np.prod(x[self.cols], axis=1)
            np.add.at(out, self.rows, terms)
        return out


def entrywise_power(x: Sequence, k: int) -> list:
    """``x^{[k]}``, the componentwise k-th power."""
    return [v ** k for v in x]


# ---------------------------------------------------------------------------
# structural predicates
# ---------------------------------------------------------------------------

def associated_digraph(a: SparseTensor) -> dict[int, set[int]]:
    """Arcs ``i -> j`` whenever some nonzero ``a[i, ...]`` has ``j`` among its trailing indices."""
    succ = {i: set() for i in range(1, a.n + 1)}
    for idx in a.entries:
        succ[idx[0]].update(idx[1:])
    return succ


def strongly_connected_components(succ: Mapping[int, Iterable[int]]) -> list[list[int]]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in sorted(succ):
        if root in index:
            continue
        work = [(root, iter(sorted(succ[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(succ[w]))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def is_weakly_irreducible(a: SparseTensor) -> tuple[bool, list[list[int]]]:
    comps = strongly_connected_components(associated_digraph(a))
    return len(comps) == 1, comps


IRREDUCIBLE_MAX_N = 20


def is_irreducible(a: SparseTensor) -> bool:
    """Exhaustive check over nonempty proper index subsets ``I``.

    ``A`` is reducible when some ``I`` has ``a[i1, ...] == 0`` for all
    ``i1`` in ``I`` and all trailing indices outside ``I``.
    """
    if a.n > IRREDUCIBLE_MAX_N:
        raise ValueError(f"exhaustive irreducibility check limited to n <= {IRREDUCIBLE_MAX_N}")
    if a.n < 2:
        raise ValueError("irreducibility needs n >= 2")
    # for each primary i, bitmasks of trailing-index sets of its nonzero entries
    by_primary = defaultdict(set)
    for idx in a.entries:
        mask = 0
        for j in idx[1:]:
            mask |= 1 << (j - 1)
        by_primary[idx[0]].add(mask)
    full = (1 << a.n) - 1
    for subset in range(1, full):
        blocked = True
        for i, trail_masks in by_primary.items():
            if not subset >> (i - 1) & 1:
                continue
            if any(tm & subset == 0 for tm in trail_masks):
                blocked = False
                break
        if blocked:
            return False
    return True


# ---------------------------------------------------------------------------
# diagonal similarity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnimodularDiagonal:
    """``diag(exp(2*pi*i*angle_1), ..., exp(2*pi*i*angle_n))`` with ``angle_1 == 0``."""

    angles: tuple[Fraction, ...]

    def __init__(self, angles: Iterable, normalized: bool = True):
        angles = tuple(reduce_angle(a) for a in angles)
        if normalized and angles and angles[0] != 0:
            raise ValueError("first angle must be 0 (d_11 = 1)")
        object.__setattr__(self, "angles", angles)

    @classmethod
    def identity(cls, n: int) -> "UnimodularDiagonal":
        return cls([0] * n)

    @property
    def n(self) -> int:
        return len(self.angles)

    def order(self) -> int:
        return math.lcm(*(a.denominator for a in self.angles)) if self.angles else 1

    def is_identity(self) -> bool:
        return all(a == 0 for a in self.angles)

    def __mul__(self, other: "UnimodularDiagonal") -> "UnimodularDiagonal":
        return UnimodularDiagonal([a + b for a, b in zip(self.angles, other.angles)])

    def __pow__(self, k: int) -> "UnimodularDiagonal":
        return UnimodularDiagonal([a * k for a in self.angles])

    def inverse(self) -> "UnimodularDiagonal":
        return UnimodularDiagonal([-a for a in self.angles])

    def values(self) -> list[complex]:
        return [cmath.exp(2j * math.pi * float(a)) for a in self.angles]

    def labels(self, sigma: Optional[int] = None) -> list[int]:
        """Integer labels ``sigma * angle`` in ``1..sigma`` (angle 0 maps to ``sigma``)."""
        sigma = sigma or self.order()
        out = []
        for a in self.angles:
            lab = a * sigma
            if lab.denominator != 1:
                raise ValueError(f"angle {a} is not a multiple of 1/{sigma}")
            out.append(int(lab) % sigma or sigma)
        return out

    @classmethod
    def from_vector(cls, x: Sequence[complex], denominator_limit: int = 10_000) -> "UnimodularDiagonal":
        """Phase angles of a nonzero-entry vector, normalized so the first is 0."""
        base = cmath.phase(complex(x[0]))
        angles = []
        for v in x:
            ang = (cmath.phase(complex(v)) - base) / (2 * math.pi)
            angles.append(Fraction(ang).limit_denominator(denominator_limit))
        return cls(angles)


def diagonal_similarity(a: SparseTensor, d: UnimodularDiagonal, phase=0) -> SparseTensor:
    """``exp(-2*pi*i*phase) * D^{-(m-1)} A D`` computed entrywise.

    Entry ``(i1, ..., im)`` is multiplied by the unit with angle
    ``-phase - (m-1)*angle[i1] + angle[i2] + ... + angle[im]``. Exact when the
    entries are exact; float/complex entries stay floating point.
    """
    if d.n != a.n:
        raise ValueError(f"diagonal has size {d.n}, tensor dimension is {a.n}")
    phase = Fraction(phase)
    th = d.angles
    out = {}
    for idx, val in a.entries.items():
        ang = -phase - (a.m - 1) * th[idx[0] - 1] + sum(th[j - 1] for j in idx[1:])
        if isinstance(val, (Fraction, Phasor)):
            p = _to_phasor(val)
            out[idx] = phasor(p.magnitude, p.angle + ang)
        else:
            out[idx] = val * cmath.exp(2j * math.pi * float(ang))
    return SparseTensor(a.m, a.n, out)


def subtensor(a: SparseTensor, *index_sets: Iterable[int]) -> SparseTensor:
    """Restriction of the entries to ``S1 x ... x Sm`` (indices keep their labels)."""
    if len(index_sets) != a.m:
        raise ValueError(f"need {a.m} index sets, got {len(index_sets)}")
    sets = [set(s) for s in index_sets]
    return SparseTensor(a.m, a.n, {idx: v for idx, v in a.entries.items()
                                   if all(i in s for i, s in zip(idx, sets))})


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def parse_tensor(text: str) -> SparseTensor:
    """``m n`` header, then ``i1 ... im  p/q`` per line; ``#`` comments."""
    header = None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            try:
                header = tuple(int(f) for f in fields)
            except ValueError:
                raise ParseError(f"expected integers, got {line!r}", lineno) from None
            if len(header) != 2 or header[0] < 2 or header[1] < 1:
                raise ParseError("header must be 'm n' with m >= 2, n >= 1", lineno)
            continue
        m, n = header
        if len(fields) != m + 1:
            raise ParseError(f"expected {m} indices and a value", lineno)
        try:
            idx = tuple(int(f) for f in fields[:m])
            val = Fraction(fields[m])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad entry {line!r}", lineno) from None
        if min(idx) < 1 or max(idx) > n:
            raise ParseError(f"index outside 1..{n}", lineno)
        if idx in entries:
            raise ParseError(f"duplicate entry {idx}", lineno)
        entries[idx] = val
    if header is None:
        raise ParseError("empty tensor file: missing 'm n' header")
    return SparseTensor(header[0], header[1], entries)


def format_tensor(a: SparseTensor) -> str:
    if not a.is_rational():
        raise ValueError("only rational tensors can be written in the text format")
    lines = [f"{a.m} {a.n}"]
    for idx in a.patterns():
        lines.append(" ".join(map(str, idx)) + f"  {a.entries[idx]}")
    return "\n".join(lines) + "\n"


def load_tensor(path) -> SparseTensor:
    with open(path, encoding="utf-8") as fh:
        return parse_tensor(fh.read())
