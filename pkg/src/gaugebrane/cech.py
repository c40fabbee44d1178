"""Finite Cech model for hypercohomology of complexes of line-bundle sums on P^n.

Cover: U_l = {x_l != 0}, l = 0..n.  A Cech q-cochain of O(m) on a chart set
I (|I| = q + 1) is a Laurent polynomial of total degree m whose exponents may
be negative only at positions in I.

Finite model.  Fix a lower bound ``M`` and an upper cap ``B``.

* ``{all exponents >= -M}`` is a subcomplex (Cech maps keep the monomial,
  polynomial maps only raise exponents).  For a single multidegree ``e`` the
  Cech complex runs over the chart sets containing ``N(e) = {i : e_i < 0}``;
  it is acyclic unless ``N(e)`` is empty (global sections) or everything
  (top cohomology, where every exponent is >= m + n).  The complement of the
  truncation only has multidegrees of the acyclic kind once
  ``M >= n + max|m|``, so the truncation is a quasi-isomorphism.
* Inside it, ``{some exponent > B}`` is again a subcomplex, and for
  ``B >= max(0, max m)`` each of its multidegrees has mixed signs, so it is
  acyclic too.  The engine works with the quotient, i.e. with exponents in
  ``[-M, B]``; products landing above ``B`` are zero there.

Total complex: position ``k = t + q`` for complex position ``t`` and Cech
degree ``q``; differential = Cech differential + (-1)^q * internal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .complexes import BraneComplex
from .linalg import Matrix, _Echelon, _q, _to_fraction, kernel_basis, rank
from .poly import LaurentPoly, LaurentTerm, TruncationError, chart_sets

__all__ = [
    "CohomologyReport",
    "TotalComplex",
    "bott_dim",
    "exponent_cap",
    "hypercohomology",
    "line_bundle_cohomology",
    "truncation_bound",
]


def truncation_bound(c: BraneComplex) -> int:
    """M = n + 2 + max |twist|."""
    tw = c.twists()
    return c.n + 2 + (max(abs(k) for k in tw) if tw else 0)


def exponent_cap(c: BraneComplex) -> int:
    tw = c.twists()
    return max([0] + tw)


def line_bundle_cohomology(n: int, m: int, q: int) -> int:
    """dim H^q(P^n, O(m))."""
    if not 0 <= q <= n:
        raise ValueError("need 0 <= q <= n")
    if q == 0 and m >= 0:
        return comb(m + n, n)
    if q == n and m <= -n - 1:
        return comb(-m - 1, n)
    return 0


def bott_dim(n: int, p: int, k: int, q: int) -> int:
    """dim H^q(P^n, Omega^p(k)) by Bott's formula."""
    if not (0 <= p <= n and 0 <= q <= n):
        raise ValueError("need 0 <= p, q <= n")
    total = 0
    if q == 0 and k > p:
        total += comb(k + n - p, k) * comb(k - 1, p)
    if q == p and k == 0:
        total += 1
    if q == n and k < p - n:
        total += comb(-k + p, -k) * comb(-k - 1, n - p)
    return total


# ---------------------------------------------------------------------------
# per-summand Cech data (cached; depends only on n, m, M, B)


def _bounded_compositions(total: int, lows: Sequence[int], high: int) -> Iterator[Tuple[int, ...]]:
    """Tuples e with lows[i] <= e_i <= high and sum(e) = total, in lex order."""
    nv = len(lows)
    suffix_low = [0] * (nv + 1)
    for i in range(nv - 1, -1, -1):
        suffix_low[i] = suffix_low[i + 1] + lows[i]

    def rec(i: int, left: int, prefix: Tuple[int, ...]):
        if i == nv - 1:
            if lows[i] <= left <= high:
                yield prefix + (left,)
            return
        rest_low = suffix_low[i + 1]
        rest_high = high * (nv - 1 - i)
        lo = max(lows[i], left - rest_high)
        hi = min(high, left - rest_low)
        for e in range(lo, hi + 1):
            yield from rec(i + 1, left - e, prefix + (e,))

    yield from rec(0, total, ())


@dataclass(frozen=True)
class _ChartBasis:
    """Cech cochain basis of one O(m), split by Cech degree."""

    by_degree: Tuple[Tuple[LaurentTerm, ...], ...]
    index: Tuple[Dict[LaurentTerm, int], ...]
    cech: Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...]  # q -> src -> ((tgt, sign), ...)


@lru_cache(maxsize=None)
def _chart_basis(n: int, m: int, M: int, cap: int) -> _ChartBasis:
    by_q: List[List[LaurentTerm]] = [[] for _ in range(n + 1)]
    for chart in chart_sets(n):
        lows = [-M if i in chart else 0 for i in range(n + 1)]
        for e in _bounded_compositions(m, lows, cap):
            by_q[len(chart) - 1].append(LaurentTerm(chart, e))
    index = tuple({t: j for j, t in enumerate(terms)} for terms in by_q)
    cech = []
    for q in range(n + 1):
        maps = []
        for chart, e in by_q[q]:
            outs = []
            if q < n:
                for extra in range(n + 1):
                    if extra in chart:
                        continue
                    bigger = tuple(sorted(chart + (extra,)))
                    pos = bigger.index(extra)
                    outs.append((index[q + 1][LaurentTerm(bigger, e)], -1 if pos % 2 else 1))
            maps.append(tuple(outs))
        cech.append(tuple(maps))
    return _ChartBasis(tuple(tuple(t) for t in by_q), index, tuple(cech))


@lru_cache(maxsize=None)
def _multiplication(n: int, M: int, cap: int, m_src: int, m_tgt: int, q: int,
                    poly: LaurentPoly) -> Tuple[Tuple[Tuple[int, object], ...], ...]:
    src = _chart_basis(n, m_src, M, cap)
    tgt = _chart_basis(n, m_tgt, M, cap)
    tindex = tgt.index[q]
    out = []
    for chart, e in src.by_degree[q]:
        row = []
        for a, c in poly.terms.items():
            prod = tuple(x + y for x, y in zip(e, a))
            j = tindex.get(LaurentTerm(chart, prod))
            if j is None:
                if max(prod) > cap:
                    continue
                raise TruncationError(f"product {prod} on chart {chart} left the truncated basis")
            row.append((j, c))
        out.append(tuple(row))
    return tuple(out)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Block:
    t: int
    summand: int
    q: int
    twist: int
    offset: int
    size: int


class TotalComplex:
    """Truncated Cech total complex of a brane complex."""

    def __init__(self, c: BraneComplex, M: Optional[int] = None, cap: Optional[int] = None):
        bound = truncation_bound(c)
        if M is None:
            M = bound
        elif M < bound:
            raise ValueError(f"truncation {M} is below the required bound {bound}")
        if cap is None:
            cap = exponent_cap(c)
        elif cap < exponent_cap(c):
            raise ValueError(f"exponent cap {cap} is below max(0, max twist) = {exponent_cap(c)}")
        self.complex = c
        self.n = c.n
        self.M = M
        self.cap = cap
        self.blocks: Dict[int, List[_Block]] = {}
        self._block_at: Dict[Tuple[int, int, int], _Block] = {}
        self.dims: Dict[int, int] = {}
        for t, term in c.terms.items():
            for q in range(c.n + 1):
                k = t + q
                for i, m in enumerate(term):
                    size = len(_chart_basis(c.n, m, M, cap).by_degree[q])
                    blk = _Block(t, i, q, m, self.dims.get(k, 0), size)
                    self.blocks.setdefault(k, []).append(blk)
                    self._block_at[(t, i, q)] = blk
                    self.dims[k] = self.dims.get(k, 0) + size
        self.blocks = dict(sorted(self.blocks.items()))
        self.dims = dict(sorted(self.dims.items()))
        self._diff_cache: Dict[int, Matrix] = {}

    @property
    def degrees(self) -> List[int]:
        return list(self.dims)

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def chart_basis(self, twist: int, q: int) -> Tuple[LaurentTerm, ...]:
        return _chart_basis(self.n, twist, self.M, self.cap).by_degree[q]

    def index_of(self, t: int, summand: int, term: LaurentTerm) -> Optional[int]:
        """Global index of a basis element in its total degree, or None if outside the window."""
        q = len(term.chart) - 1
        blk = self._block_at.get((t, summand, q))
        if blk is None:
            return None
        local = _chart_basis(self.n, blk.twist, self.M, self.cap).index[q].get(term)
        return None if local is None else blk.offset + local

    def label(self, k: int, idx: int) -> Tuple[int, int, LaurentTerm]:
        for blk in self.blocks.get(k, ()):
            if blk.offset <= idx < blk.offset + blk.size:
                return blk.t, blk.summand, self.chart_basis(blk.twist, blk.q)[idx - blk.offset]
        raise IndexError(idx)

    def differential(self, k: int) -> Matrix:
        """D_k : C^k -> C^{k+1}."""
        if k in self._diff_cache:
            return self._diff_cache[k]
        c = self.complex
        data: Dict[int, Dict[int, object]] = {}
        for blk in self.blocks.get(k, ()):
            cb = _chart_basis(self.n, blk.twist, self.M, self.cap)
            if blk.q < self.n:
                tgt_blk = self._block_at[(blk.t, blk.summand, blk.q + 1)]
                for j, outs in enumerate(cb.cech[blk.q]):
                    col = blk.offset + j
                    for tj, sign in outs:
                        data.setdefault(tgt_blk.offset + tj, {})[col] = sign
            d = c.diffs.get(blk.t)
            if d is None:
                continue
            qsign = -1 if blk.q % 2 else 1
            for i2, row in enumerate(d):
                e = row[blk.summand]
                if e.is_zero():
                    continue
                tgt_blk = self._block_at[(blk.t + 1, i2, blk.q)]
                mult = _multiplication(self.n, self.M, self.cap, blk.twist, tgt_blk.twist, blk.q, e)
                for j, outs in enumerate(mult):
                    col = blk.offset + j
                    for tj, coef in outs:
                        r = data.setdefault(tgt_blk.offset + tj, {})
                        r[col] = r.get(col, 0) + qsign * coef
        m = Matrix(self.dim(k + 1), self.dim(k), data)
        self._diff_cache[k] = m
        return m

    def cohomology_dims(self) -> Dict[int, int]:
        ranks = {k: rank(self.differential(k)) for k in self.dims}
        out = {}
        for k, d in self.dims.items():
            h = d - ranks[k] - ranks.get(k - 1, 0)
            out[k] = h
        return out

    def representatives(self, k: int) -> List[List]:
        """Cocycles in degree k spanning the cohomology, reduced against coboundaries."""
        dk = self.differential(k)
        ech = _Echelon()
        if k - 1 in self.dims:
            image = self.differential(k - 1).transpose()
            for r in range(image.rows):
                row = image.row(r)
                if row:
                    ech.insert({c: _q(v.numerator, v.denominator) if hasattr(v, "denominator") else _q(v)
                                for c, v in row.items()})
        reps = []
        for vec in kernel_basis(dk):
            row = {c: _q(v.numerator, v.denominator) for c, v in enumerate(vec) if v}
            if ech.insert(row) is not None:
                out = [0] * len(vec)
                for c, v in row.items():
                    out[c] = _to_fraction(v)
                reps.append(out)
        return reps


@dataclass(frozen=True)
class CohomologyReport:
    dims: Mapping[int, int]
    truncation: int
    cap: int
    representatives: Mapping[int, Tuple[Tuple, ...]] = field(default_factory=dict)

    def __getitem__(self, i: int) -> int:
        return self.dims.get(i, 0)

    def nonzero(self) -> Dict[int, int]:
        return {k: v for k, v in self.dims.items() if v}

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * v for k, v in self.dims.items())


def hypercohomology(c: BraneComplex, M: Optional[int] = None, representatives: bool = False) -> CohomologyReport:
    """Dimensions of H^i(P^n, c) from the truncated Cech total complex."""
    tc = TotalComplex(c, M)
    dims = tc.cohomology_dims()
    reps = {}
    if representatives:
        for k, h in dims.items():
            if h:
                found = tc.representatives(k)
                if len(found) != h:
                    raise ArithmeticError(f"found {len(found)} representatives for H^{k} of dimension {h}")
                for v in found:
                    if any(tc.differential(k).apply(v)):
                        raise ArithmeticError("representative is not a cocycle")
                reps[k] = tuple(tuple(v) for v in found)
    return CohomologyReport(dims=dims, truncation=tc.M, cap=tc.cap, representatives=reps)


def euler_characteristic_closed_form(c: BraneComplex):
    """sum_{p,j} (-1)^p binom(k_pj + n, n), the binomial taken as a polynomial in k."""
    from .poly import binom_poly

    return sum((-1) ** (p % 2) * binom_poly(k, c.n) for p, t in c.terms.items() for k in t)
