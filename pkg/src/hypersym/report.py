"""JSON encoding of analysis results and re-verification of embedded certificates."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Optional

from .group import GroupElement, GroupReport, StructurePartition, verify_element
from .hypergraph import Hypergraph
from .spectral import verify_eigenpair
from .symmetry import ColoringCertificate, is_proper, verify_coloring, verify_odd_transversal
from .tensor import SparseTensor, UnimodularDiagonal


def rational(q) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def from_rational(obj) -> Fraction:
    return Fraction(obj["num"], obj["den"])


def cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def angles(d: UnimodularDiagonal) -> list[dict]:
    return [rational(a) for a in d.angles]


def diagonal_from(obj) -> UnimodularDiagonal:
    return UnimodularDiagonal([from_rational(a) for a in obj])


def encode_element(e: GroupElement) -> dict:
    return {"angles": angles(e.diagonal), "coset": e.coset, "order": e.order}


def encode_coloring(cert: Optional[ColoringCertificate]) -> Optional[dict]:
    if cert is None:
        return None
    return {"sigma": cert.sigma, "target": cert.target, "phi": list(cert.phi)}


def encode_group(rep: GroupReport) -> dict:
    out = {
        "s": rep.s,
        "c": rep.c,
        "order": rep.total_order,
        "invariant_factors_D0": list(rep.invariant_factors_D0),
        "invariant_factors_D": list(rep.invariant_factors_D),
        "generators_D0": [angles(g) for g in rep.generators_D0],
        "generators_D": [encode_element(g) for g in rep.generators_D],
        "complete": rep.complete,
    }
    if rep.complete:
        out["coset_reps"] = [angles(d) for d in rep.coset_reps]
        out["elements"] = [encode_element(e) for e in rep.elements]
    return out


def encode_partition(sp: StructurePartition) -> dict:
    return {"parts": [list(p) for p in sp.parts], "labels": list(sp.labels),
            "sigma": sp.sigma, "j": sp.j, "ell": sp.ell}


# ---------------------------------------------------------------------------
# round-trip verification
# ---------------------------------------------------------------------------

class CertificateError(AssertionError):
    pass


def _check(ok: bool, what: str, failures: list):
    if not ok:
        failures.append(what)


def verify_report(report: dict, a: SparseTensor, g: Optional[Hypergraph] = None,
                  radius_tol: float = 1e-8) -> list[str]:
    """Re-check every certificate in a decoded report; returns the failures (empty when sound)."""
    failures: list[str] = []
    res = report.get("results", {})

    for key, cert in (res.get("colorings") or {}).items():
        if cert is None:
            continue
        cc = ColoringCertificate(cert["sigma"], tuple(cert["phi"]), cert["target"])
        _check(verify_coloring(a, cc), f"coloring {key}", failures)

    cert = res.get("coloring") or (res.get("symmetry") or {}).get("coloring")
    if cert:
        cc = ColoringCertificate(cert["sigma"], tuple(cert["phi"]), cert["target"])
        _check(verify_coloring(a, cc), "coloring", failures)

    odd = res.get("odd_transversal")
    if odd and odd.get("X") is not None:
        _check(verify_odd_transversal(a, set(odd["X"])), "odd transversal", failures)

    radius = res.get("radius")
    if radius and "rho" in radius:
        r = verify_eigenpair(a, radius["rho"], radius["x"])
        _check(r <= radius_tol * max(1.0, radius["rho"]), f"eigenpair residual {r:.3g}", failures)

    grp = res.get("group")
    if grp and "c" in grp:
        c = grp["c"]
        elems = list(grp.get("elements", [])) + list(grp.get("generators_D", []))
        for e in elems:
            ge = GroupElement(diagonal_from(e["angles"]), e["coset"])
            _check(verify_element(a, ge, c), f"group element {e}", failures)
        for gen in grp.get("generators_D0", []):
            _check(verify_element(a, GroupElement(diagonal_from(gen), 0), c), "D0 generator", failures)

    for sp in res.get("partitions", []) or []:
        part = StructurePartition(tuple(tuple(p) for p in sp["parts"]), tuple(sp["labels"]),
                                  sp["sigma"], sp["j"], sp["ell"])
        label = part.label_of()
        m = a.m
        for idx in a.entries:
            lhs = Fraction(part.j, part.ell) + Fraction(m * label[idx[0]], part.sigma)
            _check((lhs - Fraction(sum(label[i] for i in idx), part.sigma)) % 1 == 0,
                   f"partition congruence at {idx}", failures)
        if g is not None and sp.get("non_edges") is not None:
            edges = set(g.edges)
            _check(not any(tuple(e) in edges for e in sp["non_edges"]), "non-edge list", failures)

    chrom = res.get("chromatic")
    if chrom and g is not None and "coloring" in chrom:
        col = chrom["coloring"]
        _check(is_proper(g, col) and len(set(col)) <= chrom["bound"], "chromatic certificate", failures)

    return failures


def to_jsonable(obj: Any) -> Any:
    """Fallback conversion for values that slipped through without an encoder."""
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, complex):
        return cplx(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot encode {type(obj).__name__}")
