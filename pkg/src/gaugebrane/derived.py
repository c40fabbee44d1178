"""Ext groups between brane complexes, computed two ways.

``ext_dim`` is exact: hypercohomology of the sheaf Hom complex.  ``naive_hom``
takes cohomology of global sections of the same Hom complex, which is what
one gets by treating each Hom(O(a), O(b)) as its space of global sections; it
agrees with Ext only when the higher cohomology of the Hom line bundles does
not interfere.  ``gauge_hom_audit`` puts both next to each other for
Hom(G, Omega^1 G).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .cech import CohomologyReport, TotalComplex, bott_dim, hypercohomology
from .complexes import BraneComplex, hom_complex, omega_replacement
from .linalg import Matrix, rank
from .poly import monomial_basis

__all__ = [
    "ExtReport",
    "ext_dim",
    "ext_dims",
    "gauge_hom_audit",
    "global_sections_dims",
    "hom_derived",
    "naive_hom",
]


def _check_pair(a: BraneComplex, b: BraneComplex) -> None:
    if a.n != b.n:
        raise ValueError(f"complexes live on P^{a.n} and P^{b.n}")


def ext_dims(a: BraneComplex, b: BraneComplex, M: Optional[int] = None) -> Dict[int, int]:
    """All nonzero-range dimensions of Ext^i(a, b)."""
    _check_pair(a, b)
    return dict(hypercohomology(hom_complex(a, b), M).dims)


def ext_dim(a: BraneComplex, b: BraneComplex, i: int, M: Optional[int] = None) -> int:
    return ext_dims(a, b, M).get(i, 0)


def hom_derived(a: BraneComplex, b: BraneComplex) -> Tuple[int, Tuple[Tuple, ...]]:
    """dim Hom_{D^b}(a, b) together with representative degree-0 cocycles."""
    _check_pair(a, b)
    rep = hypercohomology(hom_complex(a, b), representatives=True)
    return rep[0], rep.representatives.get(0, ())


def _sections_differential(c: BraneComplex, t: int) -> Matrix:
    src = [(i, mono) for i, k in enumerate(c.term(t)) for mono in monomial_basis(c.n, k)]
    tgt = [(i, mono) for i, k in enumerate(c.term(t + 1)) for mono in monomial_basis(c.n, k)]
    index = {lab: r for r, lab in enumerate(tgt)}
    data: Dict[int, Dict[int, object]] = {}
    d = c.diffs.get(t)
    if d is not None:
        for col, (i, mono) in enumerate(src):
            for i2, row in enumerate(d):
                for a, coef in row[i].terms.items():
                    r = index[(i2, tuple(x + y for x, y in zip(mono, a)))]
                    data.setdefault(r, {})
                    data[r][col] = data[r].get(col, 0) + coef
    return Matrix(len(tgt), len(src), data)


def global_sections_dims(c: BraneComplex) -> Dict[int, int]:
    """Cohomology of the complex of global sections Gamma(P^n, c^t)."""
    dims = {t: sum(len(monomial_basis(c.n, k)) for k in term) for t, term in c.terms.items()}
    ranks = {t: rank(_sections_differential(c, t)) for t in c.terms}
    return {t: dims[t] - ranks[t] - ranks.get(t - 1, 0) for t in c.terms}


def naive_hom(a: BraneComplex, b: BraneComplex, i: int) -> int:
    """H^i of global sections of the Hom complex (no injective resolution)."""
    _check_pair(a, b)
    return global_sections_dims(hom_complex(a, b)).get(i, 0)


@dataclass(frozen=True)
class ExtReport:
    source: str
    target: str
    ext: Mapping[int, int]
    naive_hom0: int
    twist_contributions: Tuple[Tuple[int, int], ...] = ()
    notes: Tuple[str, ...] = ()

    @property
    def hom0(self) -> int:
        return self.ext.get(0, 0)

    @property
    def discrepancy(self) -> bool:
        return self.naive_hom0 != self.hom0

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "ext": {str(k): v for k, v in sorted(self.ext.items())},
            "hom_derived": self.hom0,
            "naive_hom0": self.naive_hom0,
            "discrepancy": self.discrepancy,
            "h0_omega1_by_twist_difference": [
                {"difference": d, "h0": h} for d, h in self.twist_contributions],
            "notes": list(self.notes),
        }


def gauge_hom_audit(g: BraneComplex, label: str = "G",
                    total: Optional[TotalComplex] = None) -> ExtReport:
    """Measure Hom_{D^b}(G, Omega^1 G), Ext^1 of the same pair, and the naive count.

    ``twist_contributions`` lists h^0(Omega^1(d)) for each twist difference
    ``d`` occurring between two summands of one term; these are the groups a
    termwise argument would have to see vanish.
    """
    omega = omega_replacement(g, 1)
    hc = hom_complex(g, omega)
    if total is None:
        total = TotalComplex(hc)
    dims = total.cohomology_dims()
    ext = {i: dims.get(i, 0) for i in (0, 1)}
    diffs = sorted({kj - ki for term in g.terms.values() for ki in term for kj in term})
    contributions = tuple((d, bott_dim(g.n, 1, d, 0)) for d in diffs)
    notes = []
    if any(h for _, h in contributions):
        notes.append("some H^0(Omega^1(d)) with d >= 2 is nonzero")
    naive = global_sections_dims(hc).get(0, 0)
    return ExtReport(source=label, target=f"Omega1({label})", ext=ext, naive_hom0=naive,
                     twist_contributions=contributions, notes=tuple(notes))
