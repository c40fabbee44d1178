"""Atiyah obstruction and holomorphic gauge fields on complexes of line-bundle sums.

On the chart U_l the summand O(k) is trivialised by the frame x_l^k, and the
frame derivative ``nabla_l(s) = x_l^k d(s / x_l^k)`` is a local connection.
The obstruction to gluing these into one connection compatible with the
differential is the total 1-cocycle

    alpha_{l l'} = nabla_l - nabla_{l'}          (Cech degree 1, Hom degree 0)
    beta_l       = nabla_l d - (1 (x) d) nabla_l  (Cech degree 0, Hom degree 1)

in the Cech-Hom total complex of Hom(G, Omega^1 G).  For O(k) this gives
``alpha = k (dlog x_{l'} - dlog x_l)``; for an entry h of degree e it gives
``beta_l = x_l^e d(h / x_l^e)``.  A gauge field exists iff the cocycle is a
total coboundary; a primitive A_l turns ``nabla_l + A_l`` into the field.

Omega^1(d) sections are tuples (f_0..f_n) of degree d-1 Laurent polynomials
with sum x_m f_m = 0 (the form sum f_m dx_m).  Inside the engine, Omega^1 G is
replaced by its Euler resolution, and these tuples sit in its Koszul degree 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .cech import TotalComplex
from .complexes import BraneComplex, hom_complex, hom_layout, omega_layout, omega_replacement, validate
from .derived import ExtReport, gauge_hom_audit
from .linalg import Matrix, solve_affine
from .poly import LaurentPoly, LaurentTerm

OmegaSection = Tuple[LaurentPoly, ...]
OmegaMatrix = Tuple[Tuple[OmegaSection, ...], ...]

__all__ = [
    "AtiyahCocycle",
    "CocycleError",
    "GaugeDecision",
    "GaugeProblem",
    "GaugeWitness",
    "Classification",
    "atiyah_cocycle",
    "canonical_gauge_field",
    "classify_brane",
    "first_chern",
    "gauge_exists",
]


class CocycleError(ArithmeticError):
    """The Atiyah cochain failed the total cocycle condition (a sign bug, never data)."""


# ---------------------------------------------------------------------------
# Omega^1-valued arithmetic in the Euler representation


def _zero_section(nvars: int) -> OmegaSection:
    z = LaurentPoly(nvars)
    return (z,) * nvars


def _is_zero_section(f: OmegaSection) -> bool:
    return all(x.is_zero() for x in f)


def _add(f: OmegaSection, g: OmegaSection) -> OmegaSection:
    return tuple(a + b for a, b in zip(f, g))


def _neg(f: OmegaSection) -> OmegaSection:
    return tuple(-a for a in f)


def _scale(h: LaurentPoly, f: OmegaSection) -> OmegaSection:
    return tuple(h * a for a in f)


def euler_contraction(f: OmegaSection) -> LaurentPoly:
    """sum_m x_m f_m; zero exactly when f is a 1-form."""
    nv = len(f)
    acc = LaurentPoly(nv)
    for m, fm in enumerate(f):
        if not fm.is_zero():
            mono = [0] * nv
            mono[m] = 1
            acc = acc + LaurentPoly(nv, {tuple(mono): 1}) * fm
    return acc


def dlog(nvars: int, l: int) -> OmegaSection:
    """dx_l / x_l as an Euler tuple of degree -1 entries (not itself basic)."""
    out = [LaurentPoly(nvars)] * nvars
    mono = [0] * nvars
    mono[l] = -1
    out[l] = LaurentPoly(nvars, {tuple(mono): 1})
    return tuple(out)


def frame_derivative(h: LaurentPoly, l: int) -> OmegaSection:
    """x_l^e d(h / x_l^e) for h homogeneous of degree e: the 1-form dh - e h dx_l / x_l."""
    nv = h.nvars
    if h.is_zero():
        return _zero_section(nv)
    e = h.degree
    parts = [h.derivative(m) for m in range(nv)]
    if e:
        mono = [0] * nv
        mono[l] = -1
        parts[l] = parts[l] - LaurentPoly(nv, {tuple(mono): e}) * h
    return tuple(parts)


def _mat_mul_poly_omega(d, w, nvars: int) -> OmegaMatrix:
    """(polynomial matrix) x (Omega-valued matrix)."""
    inner = len(w)
    cols = len(w[0]) if w else 0
    out = []
    for row in d:
        new = []
        for c in range(cols):
            acc = _zero_section(nvars)
            for k in range(inner):
                if not row[k].is_zero() and not _is_zero_section(w[k][c]):
                    acc = _add(acc, _scale(row[k], w[k][c]))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def _mat_mul_omega_poly(w, d, nvars: int) -> OmegaMatrix:
    """(Omega-valued matrix) x (polynomial matrix)."""
    inner = len(d)
    cols = len(d[0]) if d else 0
    out = []
    for row in w:
        new = []
        for c in range(cols):
            acc = _zero_section(nvars)
            for k in range(inner):
                if not d[k][c].is_zero() and not _is_zero_section(row[k]):
                    acc = _add(acc, _scale(d[k][c], row[k]))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def _mat_combine(mats: Sequence[Tuple[int, OmegaMatrix]], rows: int, cols: int, nvars: int) -> OmegaMatrix:
    out = [[_zero_section(nvars) for _ in range(cols)] for _ in range(rows)]
    for sign, m in mats:
        for r in range(rows):
            for c in range(cols):
                f = m[r][c]
                if not _is_zero_section(f):
                    out[r][c] = _add(out[r][c], f if sign > 0 else _neg(f))
    return tuple(tuple(r) for r in out)


def _is_zero_matrix(m: OmegaMatrix) -> bool:
    return all(_is_zero_section(f) for row in m for f in row)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtiyahCocycle:
    """Cech representative of the Atiyah class of a brane complex."""

    brane: BraneComplex
    alpha: Mapping[Tuple[int, int], Mapping[int, OmegaMatrix]]
    beta: Mapping[int, Mapping[int, OmegaMatrix]]

    def is_zero(self) -> bool:
        return all(_is_zero_matrix(m) for per in self.alpha.values() for m in per.values()) and \
            all(_is_zero_matrix(m) for per in self.beta.values() for m in per.values())

    def euler_violations(self) -> List[str]:
        bad = []
        for key, per in list(self.alpha.items()) + list(self.beta.items()):
            for p, m in per.items():
                for row in m:
                    for f in row:
                        if not euler_contraction(f).is_zero():
                            bad.append(f"{key} at position {p}")
        return bad

    def closure_defects(self) -> List[str]:
        """Components of delta_total(alpha, beta); empty when the cocycle closes."""
        g = self.brane
        nv = g.nvars
        charts = range(g.n + 1)
        defects = []
        # Cech degree 2, Hom degree 0
        for l0 in charts:
            for l1 in charts:
                for l2 in charts:
                    if not l0 < l1 < l2:
                        continue
                    for p, term in g.terms.items():
                        size = len(term)
                        m = _mat_combine([(1, self.alpha[(l1, l2)][p]), (-1, self.alpha[(l0, l2)][p]),
                                          (1, self.alpha[(l0, l1)][p])], size, size, nv)
                        if not _is_zero_matrix(m):
                            defects.append(f"cech(alpha) on {(l0, l1, l2)} at {p}")
        # Cech degree 1, Hom degree 1: beta_{l'} - beta_l - d alpha + alpha d
        for (l0, l1), per in self.alpha.items():
            for p in g.diffs:
                rows, cols = len(g.term(p + 1)), len(g.term(p))
                d = g.diffs[p]
                m = _mat_combine([
                    (1, self.beta[l1][p]), (-1, self.beta[l0][p]),
                    (-1, _mat_mul_poly_omega(d, per[p], nv)),
                    (1, _mat_mul_omega_poly(per[p + 1], d, nv)),
                ], rows, cols, nv)
                if not _is_zero_matrix(m):
                    defects.append(f"mixed component on {(l0, l1)} at {p}")
        # Cech degree 0, Hom degree 2: d beta + beta d
        for l, per in self.beta.items():
            for p in g.diffs:
                if p + 1 not in g.diffs:
                    continue
                rows, cols = len(g.term(p + 2)), len(g.term(p))
                m = _mat_combine([
                    (1, _mat_mul_poly_omega(g.diffs[p + 1], per[p], nv)),
                    (1, _mat_mul_omega_poly(per[p + 1], g.diffs[p], nv)),
                ], rows, cols, nv)
                if not _is_zero_matrix(m):
                    defects.append(f"hom(beta) on chart {l} at {p}")
        return defects


def atiyah_cocycle(g: BraneComplex) -> AtiyahCocycle:
    """Chart-frame Atiyah cocycle of ``g``; raises CocycleError if it fails to close."""
    rep = validate(g)
    if not rep.valid:
        raise ValueError(rep.summary())
    nv = g.nvars
    charts = range(g.n + 1)
    alpha: Dict[Tuple[int, int], Dict[int, OmegaMatrix]] = {}
    for l0 in charts:
        for l1 in charts:
            if l0 >= l1:
                continue
            form = _add(dlog(nv, l1), _neg(dlog(nv, l0)))
            per = {}
            for p, term in g.terms.items():
                rows = []
                for i, k in enumerate(term):
                    row = [_zero_section(nv)] * len(term)
                    if k:
                        row[i] = _scale(LaurentPoly.constant(nv, k), form)
                    rows.append(tuple(row))
                per[p] = tuple(rows)
            alpha[(l0, l1)] = per
    beta: Dict[int, Dict[int, OmegaMatrix]] = {}
    for l in charts:
        beta[l] = {p: tuple(tuple(frame_derivative(h, l) for h in row) for row in d)
                   for p, d in g.diffs.items()}
    # positions with no stored differential get explicit zero blocks so lookups are total
    for per in beta.values():
        for p in g.terms:
            if p not in per and g.term(p + 1):
                per[p] = tuple(tuple(_zero_section(nv) for _ in g.term(p)) for _ in g.term(p + 1))
    for per in alpha.values():
        for p in list(g.terms) + [p + 1 for p in g.terms]:
            per.setdefault(p, tuple(tuple(_zero_section(nv) for _ in g.term(p)) for _ in g.term(p)))
    cocycle = AtiyahCocycle(g, alpha, beta)
    defects = cocycle.closure_defects()
    if defects:
        raise CocycleError("Atiyah cochain is not closed: " + "; ".join(defects[:5]))
    if cocycle.euler_violations():
        raise CocycleError("Atiyah cochain has non-basic entries")
    return cocycle


# ---------------------------------------------------------------------------
# the Cech-Hom model for Hom(G, Omega^1 G)


class GaugeProblem:
    """Total complex of Hom(G, Omega^1 G) with the Atiyah cocycle placed in degree 1."""

    def __init__(self, g: BraneComplex, M: Optional[int] = None):
        self.brane = g
        self.cocycle = atiyah_cocycle(g)
        self.omega = omega_replacement(g, 1)
        self.hom = hom_complex(g, self.omega)
        self.model = TotalComplex(self.hom, M)
        self._hom_layout = hom_layout(g, self.omega)
        self._omega_layout = omega_layout(g, 1)
        self._summand_index = {
            m: {lab: s for s, lab in enumerate(labels)} for m, labels in self._hom_layout.items()}
        self._omega_index = {
            s: {lab: r for r, lab in enumerate(labels)} for s, labels in self._omega_layout.items()}
        self.cocycle_vector = self._embed()

    def _hom_summand(self, m: int, p: int, i: int, t: int, i_t: int, var: int) -> int:
        r = self._omega_index[p + m][(t, 0, i_t, (var,))]
        return self._summand_index[m][(p, i, r)]

    def _place(self, vec: List[Fraction], m: int, summand: int, chart: Tuple[int, ...], f: LaurentPoly) -> None:
        for mono, coef in f.terms.items():
            idx = self.model.index_of(m, summand, LaurentTerm(chart, mono))
            if idx is None:
                raise CocycleError(f"cocycle monomial {mono} on {chart} lies outside the finite model")
            vec[idx] += coef

    def _embed(self) -> List[Fraction]:
        g = self.brane
        vec = [Fraction(0)] * self.model.dim(1)
        for (l0, l1), per in self.cocycle.alpha.items():
            for p, mat in per.items():
                for i, row in enumerate(mat):
                    for i2, f in enumerate(row):
                        if _is_zero_section(f):
                            continue
                        for var, fm in enumerate(f):
                            if not fm.is_zero():
                                s = self._hom_summand(0, p, i2, p, i, var)
                                self._place(vec, 0, s, (l0, l1), fm)
        for l, per in self.cocycle.beta.items():
            for p, mat in per.items():
                for i_t, row in enumerate(mat):
                    for i, f in enumerate(row):
                        if _is_zero_section(f):
                            continue
                        for var, fm in enumerate(f):
                            if not fm.is_zero():
                                s = self._hom_summand(1, p, i, p + 1, i_t, var)
                                self._place(vec, 1, s, (l,), fm)
        if any(self.model.differential(1).apply(vec)):
            raise CocycleError("embedded Atiyah cocycle is not closed in the total complex")
        return vec

    def solve(self, column_order: Optional[Sequence[int]] = None) -> Optional[List[Fraction]]:
        d0 = self.model.differential(0)
        if column_order is None:
            return solve_affine(d0, self.cocycle_vector)
        order = list(column_order)
        if sorted(order) != list(range(d0.cols)):
            raise ValueError("column_order must be a permutation of the degree-0 basis")
        where = {old: new for new, old in enumerate(order)}
        perm = Matrix(d0.rows, d0.cols, {
            r: {where[c]: v for c, v in d0.row(r).items()} for r in range(d0.rows) if d0.row(r)})
        y = solve_affine(perm, self.cocycle_vector)
        if y is None:
            return None
        x = [Fraction(0)] * d0.cols
        for new, old in enumerate(order):
            x[old] = y[new]
        return x

    def residual(self, x: Sequence[Fraction]) -> List[Fraction]:
        dx = self.model.differential(0).apply(list(x))
        return [a - b for a, b in zip(dx, self.cocycle_vector)]

    def connection_forms(self, x: Sequence[Fraction]) -> Dict[Tuple[int, int], OmegaMatrix]:
        """Chart-local correction A_l at each position p, read off the primitive."""
        g = self.brane
        nv = g.nvars
        out = {}
        for l in range(g.n + 1):
            for p, term in g.terms.items():
                rows = []
                for i_t in range(len(term)):
                    row = []
                    for i in range(len(term)):
                        parts = []
                        for var in range(nv):
                            s = self._hom_summand(0, p, i, p, i_t, var)
                            twist = self.hom.terms[0][s]
                            poly = {}
                            for mono in (lt.monomial for lt in self.model.chart_basis(twist, 0) if lt.chart == (l,)):
                                idx = self.model.index_of(0, s, LaurentTerm((l,), mono))
                                if x[idx]:
                                    poly[mono] = x[idx]
                            parts.append(LaurentPoly(nv, poly))
                        row.append(tuple(parts))
                    rows.append(tuple(row))
                out[(l, p)] = tuple(rows)
        return out


@dataclass
class GaugeWitness:
    """Cochain-level gauge field psi = (nabla, id): frame derivatives plus a primitive."""

    problem: GaugeProblem
    primitive: Tuple[Fraction, ...]

    @property
    def projection(self) -> Dict[int, Matrix]:
        """pi o psi on every term; the identity by construction."""
        return {p: Matrix.identity(len(t)) for p, t in self.problem.brane.terms.items()}

    def residual(self) -> List[Fraction]:
        return self.problem.residual(self.primitive)

    def verifies(self) -> bool:
        ok_proj = all(m == Matrix.identity(m.rows) for m in self.projection.values())
        return ok_proj and not any(self.residual())

    def connection_forms(self):
        return self.problem.connection_forms(self.primitive)

    def as_dict(self) -> dict:
        model = self.problem.model
        comps = []
        for idx, v in enumerate(self.primitive):
            if v:
                pos, summand, lt = model.label(0, idx)
                comps.append({"hom_position": pos, "summand": summand, "chart": list(lt.chart),
                              "monomial": list(lt.monomial), "value": str(v)})
        return {"primitive": comps, "projection": "identity", "residual_zero": not any(self.residual())}


@dataclass
class GaugeDecision:
    exists: bool
    space_dim: int
    witness: Optional[GaugeWitness]
    audit: ExtReport
    cocycle_zero: bool

    @property
    def count(self) -> Optional[int]:
        """Number of gauge fields when finite: 0, 1, or None for a positive-dimensional affine space."""
        if not self.exists:
            return 0
        return 1 if self.space_dim == 0 else None

    def as_dict(self) -> dict:
        return {
            "exists": self.exists,
            "space_dim": self.space_dim,
            "count": self.count,
            "cocycle_zero": self.cocycle_zero,
            "witness_verified": None if self.witness is None else self.witness.verifies(),
        }


def gauge_exists(g: BraneComplex, M: Optional[int] = None) -> GaugeDecision:
    """Decide whether the Atiyah class of g vanishes, i.e. whether a gauge field exists."""
    prob = GaugeProblem(g, M)
    x = prob.solve()
    witness = None
    if x is not None:
        witness = GaugeWitness(prob, tuple(x))
        if not witness.verifies():
            raise CocycleError("solver returned a primitive that does not verify")
    audit = gauge_hom_audit(g, total=prob.model)
    return GaugeDecision(exists=x is not None, space_dim=audit.hom0, witness=witness, audit=audit,
                         cocycle_zero=prob.cocycle.is_zero())


def canonical_gauge_field(g: BraneComplex) -> GaugeWitness:
    """The componentwise-d gauge field on a complex of copies of O with constant differentials."""
    if any(k != 0 for k in g.twists()):
        raise ValueError("canonical gauge field needs every twist to be 0")
    if any(not e.is_constant() for m in g.diffs.values() for row in m for e in row):
        raise ValueError("canonical gauge field needs constant differentials")
    prob = GaugeProblem(g)
    return GaugeWitness(prob, tuple(Fraction(0) for _ in range(prob.model.dim(0))))


def first_chern(term: Sequence[int]) -> int:
    """c_1 of a sum of O(k_i), as an integer."""
    return sum(term)


@dataclass(frozen=True)
class Classification:
    predicted: Optional[bool]
    engine: bool
    reason: str

    @property
    def agree(self) -> Optional[bool]:
        return None if self.predicted is None else self.predicted == self.engine

    def as_dict(self) -> dict:
        return {"predicted": self.predicted, "engine": self.engine, "agree": self.agree, "reason": self.reason}


def classify_brane(g: BraneComplex, decision: Optional[GaugeDecision] = None) -> Classification:
    """Compare the shape-based prediction (all twists 0 iff a field exists) with the engine."""
    rep = validate(g)
    if decision is None:
        decision = gauge_exists(g)
    if not rep.in_range:
        return Classification(None, decision.exists, "not covered: twists outside [-n, 0]")
    if rep.all_twists_zero:
        return Classification(True, decision.exists, "every term is a sum of copies of O")
    chern = {p: first_chern(t) for p, t in g.terms.items() if first_chern(t)}
    reason = "negative twist present; nonzero c1 at positions " + ", ".join(map(str, chern)) if chern else \
        "negative twist present"
    return Classification(False, decision.exists, reason)
