"""Homogeneous and Laurent polynomials in x0..xn with the Z^{n+1} multigrading.

A multi-index is a plain tuple of ints.  Monomial order is lexicographic on
exponent tuples; chart sets are sorted tuples ordered by (size, lex).
"""
from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .linalg import Matrix

MultiIndex = Tuple[int, ...]

__all__ = [
    "HomogeneousPoly",
    "LaurentPoly",
    "LaurentTerm",
    "MultiIndex",
    "PolySyntaxError",
    "TruncationError",
    "chart_sets",
    "monomial_basis",
    "multiply_matrix",
    "parse_poly",
    "partial_derivative",
]


class PolySyntaxError(ValueError):
    pass


class TruncationError(ValueError):
    """A product left the truncated basis without being provably zero there."""


class LaurentPoly:
    """Laurent polynomial, homogeneous of a fixed total degree.

    ``degree`` is ``None`` only for the zero polynomial, which then fits any
    slot.  Instances are immutable and hashable.
    """

    __slots__ = ("nvars", "degree", "terms", "_hash")

    def __init__(self, nvars: int, terms: Optional[Mapping[MultiIndex, object]] = None,
                 degree: Optional[int] = None):
        clean: Dict[MultiIndex, Fraction] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} has wrong length for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        degs = {sum(m) for m in clean}
        if len(degs) > 1:
            raise ValueError(f"mixed total degrees {sorted(degs)}")
        if degs:
            d = degs.pop()
            if degree is not None and degree != d:
                raise ValueError(f"declared degree {degree} but terms have degree {d}")
            degree = d
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- construction helpers ------------------------------------------
    @classmethod
    def zero(cls, nvars: int, degree: Optional[int] = None):
        return cls(nvars, {}, degree)

    @classmethod
    def monomial(cls, mono: Sequence[int], coeff: object = 1):
        return cls(len(mono), {tuple(mono): coeff})

    @classmethod
    def constant(cls, nvars: int, c: object):
        return cls(nvars, {(0,) * nvars: c}, 0)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or self.degree == 0

    def fits_degree(self, d: int) -> bool:
        return self.is_zero() or self.degree == d

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return type(self).constant(self.nvars, other)

    def _result_type(self, other):
        if isinstance(self, HomogeneousPoly) and isinstance(other, HomogeneousPoly):
            return HomogeneousPoly
        return LaurentPoly

    def __add__(self, other):
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError(f"cannot add degrees {self.degree} and {other.degree}")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return self._result_type(other)(self.nvars, terms, self.degree)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.nvars, {m: -c for m, c in self.terms.items()}, self.degree)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        cls = self._result_type(other)
        if self.is_zero() or other.is_zero():
            deg = None if self.degree is None or other.degree is None else self.degree + other.degree
            return cls(self.nvars, {}, deg)
        terms: Dict[MultiIndex, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return cls(self.nvars, terms, self.degree + other.degree)

    __rmul__ = __mul__

    def derivative(self, l: int):
        """Partial derivative in x_l (exponent rule, valid for negative exponents too)."""
        if not 0 <= l < self.nvars:
            raise IndexError(f"variable index {l} out of range")
        terms = {}
        for m, c in self.terms.items():
            if m[l] == 0:
                continue
            nm = m[:l] + (m[l] - 1,) + m[l + 1:]
            terms[nm] = c * m[l]
        deg = None if self.degree is None else self.degree - 1
        return type(self)(self.nvars, terms, deg)

    # -- protocol -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.nvars == other.nvars and self.terms == other.terms and (
                self.is_zero() or self.degree == other.degree)
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(self.nvars, other) if other else self.is_zero()
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nvars, frozenset(self.terms.items()))))
        return self._hash

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({format_poly(self)!r}, n={self.nvars - 1})"


class HomogeneousPoly(LaurentPoly):
    """Homogeneous polynomial: every exponent is non-negative."""

    __slots__ = ()

    def __init__(self, nvars: int, terms: Optional[Mapping[MultiIndex, object]] = None,
                 degree: Optional[int] = None):
        super().__init__(nvars, terms, degree)
        for m in self.terms:
            if min(m) < 0:
                raise ValueError(f"negative exponent in homogeneous polynomial: {m}")

    @classmethod
    def variable(cls, nvars: int, l: int) -> "HomogeneousPoly":
        mono = [0] * nvars
        mono[l] = 1
        return cls(nvars, {tuple(mono): 1})


def partial_derivative(p: HomogeneousPoly, l: int) -> HomogeneousPoly:
    return p.derivative(l)


def format_poly(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for mono in sorted(p.terms, reverse=True):
        c = p.terms[mono]
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(f"x{i}")
            elif e:
                factors.append(f"x{i}^{e}")
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not factors:
            body = str(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = f"{a}*" + "*".join(factors)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?$")
_COEFF = re.compile(r"\d+(?:/\d+)?$")


def parse_poly(text: str, n: int) -> HomogeneousPoly:
    """Parse the polynomial text grammar into a homogeneous polynomial in x0..xn."""
    s = "".join(text.split())
    if not s:
        raise PolySyntaxError("empty polynomial")
    nvars = n + 1
    # split at +/- that are not leading
    chunks: List[Tuple[int, str]] = []
    sign, start = 1, 0
    if s[0] in "+-":
        sign, start = (-1 if s[0] == "-" else 1), 1
    buf = ""
    for ch in s[start:]:
        if ch in "+-":
            if not buf:
                raise PolySyntaxError(f"dangling operator in {text!r}")
            chunks.append((sign, buf))
            sign, buf = (-1 if ch == "-" else 1), ""
        else:
            buf += ch
    if not buf:
        raise PolySyntaxError(f"dangling operator in {text!r}")
    chunks.append((sign, buf))

    terms: Dict[MultiIndex, Fraction] = {}
    degrees = set()
    for sign, chunk in chunks:
        parts = chunk.split("*")
        coeff = Fraction(sign)
        exps = [0] * nvars
        for k, part in enumerate(parts):
            if not part:
                raise PolySyntaxError(f"empty factor in {chunk!r}")
            if k == 0 and _COEFF.match(part):
                num = Fraction(part)
                coeff *= num
                continue
            m = _FACTOR.match(part)
            if not m:
                raise PolySyntaxError(f"cannot read factor {part!r}")
            idx = int(m.group(1))
            e = int(m.group(2)) if m.group(2) else 1
            if idx > n:
                raise PolySyntaxError(f"variable x{idx} out of range for n={n}")
            if e < 1:
                raise PolySyntaxError(f"exponent must be >= 1 in {part!r}")
            exps[idx] += e
        if coeff == 0:
            continue
        mono = tuple(exps)
        degrees.add(sum(mono))
        terms[mono] = terms.get(mono, 0) + coeff
    if len(degrees) > 1:
        raise PolySyntaxError(f"mixed-degree polynomial {text!r}: degrees {sorted(degrees)}")
    return HomogeneousPoly(nvars, terms)


def monomial_basis(n: int, d: int) -> List[MultiIndex]:
    """All exponent vectors of length n+1, non-negative, summing to d, in lex order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 0:
        return []
    out: List[MultiIndex] = []

    def rec(prefix: List[int], left: int, slots: int):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e, slots - 1)

    rec([], d, n + 1)
    return out


def chart_sets(n: int) -> List[Tuple[int, ...]]:
    """Nonempty subsets of {0..n}, ordered by size then lexicographically."""
    return [c for k in range(1, n + 2) for c in combinations(range(n + 1), k)]


class LaurentTerm(NamedTuple):
    chart: Tuple[int, ...]
    monomial: MultiIndex

    def validate(self) -> "LaurentTerm":
        for i, e in enumerate(self.monomial):
            if e < 0 and i not in self.chart:
                raise ValueError(f"negative exponent at x{i} outside chart {self.chart}")
        return self


def multiply_matrix(p: LaurentPoly, src_basis: Sequence[LaurentTerm], tgt_basis: Sequence[LaurentTerm],
                    cap: Optional[int] = None) -> Matrix:
    """Matrix of multiplication by ``p`` from span(src_basis) to span(tgt_basis).

    A product outside ``tgt_basis`` is dropped only when some exponent
    exceeds ``cap`` (that part of the truncated model is an acyclic
    subcomplex and is quotiented out); otherwise :class:`TruncationError`.
    """
    index = {t: i for i, t in enumerate(tgt_basis)}
    data: Dict[int, Dict[int, Fraction]] = {}
    for j, (chart, mono) in enumerate(src_basis):
        for a, c in p.terms.items():
            m = tuple(x + y for x, y in zip(mono, a))
            i = index.get(LaurentTerm(chart, m))
            if i is None:
                if cap is not None and max(m) > cap:
                    continue
                raise TruncationError(f"product {m} on chart {chart} is outside the target basis")
            row = data.setdefault(i, {})
            row[j] = row.get(j, 0) + c
    return Matrix(len(tgt_basis), len(src_basis), data)


def binom_poly(k: int, n: int) -> Fraction:
    """binom(k + n, n) extended as a polynomial in k (Euler characteristic of O(k))."""
    num = Fraction(1)
    for j in range(1, n + 1):
        num *= Fraction(k + j, j)
    return num


def count_monomials(n: int, d: int) -> int:
    return comb(n + d, n) if d >= 0 else 0
