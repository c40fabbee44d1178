"""Exact sparse linear algebra over the rationals.

Matrices are stored row-major as ``{row: {col: value}}`` with values that are
Python ints or :class:`fractions.Fraction` (never floats).  Elimination runs
on ``gmpy2.mpq`` when it is importable and on ``Fraction`` otherwise; results
handed back to callers are always ``Fraction``.

Pivoting is fixed: columns are eliminated left to right, and the row that
first reaches an unclaimed leading column owns it.  The set of pivot columns
is therefore the lexicographically first independent column set, which makes
``solve_affine`` and ``kernel_basis`` deterministic.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _q

    def _to_fraction(v) -> Fraction:
        return Fraction(int(v.numerator), int(v.denominator))

except ImportError:  # pragma: no cover
    _q = Fraction

    def _to_fraction(v) -> Fraction:
        return v


Rational = Fraction
Vector = List[Fraction]

__all__ = [
    "CompositionError",
    "Matrix",
    "Rational",
    "cohomology_dim",
    "kernel_basis",
    "rank",
    "solve_affine",
]


class CompositionError(ValueError):
    """Raised when two maps meant to form a complex do not compose to zero."""


def _check_exact(v):
    if isinstance(v, bool) or not isinstance(v, _RationalABC):
        raise TypeError(f"matrix entries must be exact rationals, got {type(v).__name__}")
    return v


class Matrix:
    """Immutable sparse matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Optional[Mapping[int, Mapping[int, object]]] = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be non-negative")
        clean: Dict[int, Dict[int, object]] = {}
        for r, row in (data or {}).items():
            if not 0 <= r < rows:
                raise IndexError(f"row {r} out of range for {rows} rows")
            kept = {}
            for c, v in row.items():
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} out of range for {cols} columns")
                if _check_exact(v) != 0:
                    kept[c] = v
            if kept:
                clean[r] = kept
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_data", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, size: int) -> "Matrix":
        return cls(size, size, {i: {i: 1} for i in range(size)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]], cols: Optional[int] = None) -> "Matrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else (cols or 0)
        data = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            data[r] = {c: _check_exact(v) for c, v in enumerate(row) if v != 0}
        return cls(nrows, ncols, data)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Mapping[Tuple[int, int], object]) -> "Matrix":
        data: Dict[int, Dict[int, object]] = {}
        for (r, c), v in entries.items():
            data.setdefault(r, {})[c] = v
        return cls(rows, cols, data)

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, rc: Tuple[int, int]) -> Fraction:
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(rc)
        return Fraction(self._data.get(r, {}).get(c, 0))

    def row(self, r: int) -> Dict[int, object]:
        return dict(self._data.get(r, {}))

    def items(self) -> Iterator[Tuple[Tuple[int, int], Fraction]]:
        for r in sorted(self._data):
            row = self._data[r]
            for c in sorted(row):
                yield (r, c), Fraction(row[c])

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._data.values())

    def is_zero(self) -> bool:
        return not self._data

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.items():
            out[r][c] = v
        return out

    def transpose(self) -> "Matrix":
        data: Dict[int, Dict[int, object]] = {}
        for r, row in self._data.items():
            for c, v in row.items():
                data.setdefault(c, {})[r] = v
        return Matrix(self.cols, self.rows, data)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        data: Dict[int, Dict[int, object]] = {}
        for r, row in self._data.items():
            acc: Dict[int, object] = {}
            for k, v in row.items():
                orow = other._data.get(k)
                if not orow:
                    continue
                for c, w in orow.items():
                    acc[c] = acc.get(c, 0) + v * w
            acc = {c: v for c, v in acc.items() if v != 0}
            if acc:
                data[r] = acc
        return Matrix(self.rows, other.cols, data)

    def apply(self, vector: Sequence[object]) -> Vector:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [Fraction(0)] * self.rows
        for r, row in self._data.items():
            s = Fraction(0)
            for c, v in row.items():
                x = vector[c]
                if x:
                    s += v * x
            out[r] = s
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.items())))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# elimination kernel


def _components(m: Matrix) -> List[Tuple[List[int], List[int]]]:
    """Connected components of the row/column incidence graph.

    Returns ``(rows, cols)`` pairs; columns touched by no row are omitted.
    """
    parent = list(range(m.cols))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row in m._data.values():
        it = iter(row)
        first = find(next(it))
        for c in it:
            rc = find(c)
            if rc != first:
                parent[rc] = first
    row_groups: Dict[int, List[int]] = {}
    for r in sorted(m._data):
        row_groups.setdefault(find(next(iter(m._data[r]))), []).append(r)
    col_groups: Dict[int, List[int]] = {}
    for r_root in row_groups:
        col_groups[r_root] = []
    for c in range(m.cols):
        root = find(c)
        if root in col_groups:
            col_groups[root].append(c)
    return [(row_groups[k], col_groups[k]) for k in sorted(row_groups, key=lambda k: row_groups[k][0])]


class _Echelon:
    """Incremental row echelon form with leading entries normalised to 1."""

    def __init__(self):
        self.pivots: Dict[int, Dict[int, object]] = {}

    def insert(self, row: Dict[int, object]) -> Optional[int]:
        """Reduce ``row`` in place; store it and return its leading column, or None if it vanished."""
        heap = list(row)
        heapq.heapify(heap)
        pivots = self.pivots
        while heap:
            c = heapq.heappop(heap)
            v = row.get(c)
            if v is None:
                continue
            prow = pivots.get(c)
            if prow is None:
                inv = 1 / v
                for k in row:
                    row[k] = row[k] * inv
                pivots[c] = row
                return c
            for cc, pv in prow.items():
                nv = row.get(cc, 0) - v * pv
                if nv:
                    if cc not in row:
                        heapq.heappush(heap, cc)
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        return None


def _rows_as_q(m: Matrix, rows: Iterable[int]) -> List[Dict[int, object]]:
    out = []
    for r in rows:
        out.append({c: _q(v.numerator, v.denominator) if isinstance(v, Fraction) else _q(v)
                    for c, v in m._data[r].items()})
    return out


def rank(m: Matrix) -> int:
    """Row rank of ``m`` over the rationals."""
    total = 0
    for rows, _cols in _components(m):
        ech = _Echelon()
        # sparser rows first keeps fill-in down; the rank does not depend on order
        for row in sorted(_rows_as_q(m, rows), key=len):
            if ech.insert(row) is not None:
                total += 1
    return total


def _back_substitute(pivots: Mapping[int, Mapping[int, object]], x: Dict[int, object], rhs_col: Optional[int]) -> None:
    for c in sorted(pivots, reverse=True):
        prow = pivots[c]
        s = prow.get(rhs_col, 0) if rhs_col is not None else 0
        for cc, pv in prow.items():
            if cc == c or cc == rhs_col:
                continue
            xv = x.get(cc)
            if xv:
                s -= pv * xv
        if s:
            x[c] = s


def kernel_basis(m: Matrix) -> List[Vector]:
    """Basis of the right kernel, one vector per free column in increasing order."""
    free_vectors: Dict[int, Vector] = {}
    touched = set()
    for rows, cols in _components(m):
        touched.update(cols)
        ech = _Echelon()
        for row in _rows_as_q(m, rows):
            ech.insert(row)
        for f in cols:
            if f in ech.pivots:
                continue
            x: Dict[int, object] = {f: _q(1)}
            for c in sorted(ech.pivots, reverse=True):
                prow = ech.pivots[c]
                s = _q(0)
                for cc, pv in prow.items():
                    if cc != c:
                        xv = x.get(cc)
                        if xv:
                            s -= pv * xv
                if s:
                    x[c] = s
            vec = [Fraction(0)] * m.cols
            for c, v in x.items():
                vec[c] = _to_fraction(v)
            free_vectors[f] = vec
    for c in range(m.cols):
        if c not in touched:
            vec = [Fraction(0)] * m.cols
            vec[c] = Fraction(1)
            free_vectors[c] = vec
    return [free_vectors[c] for c in sorted(free_vectors)]


def solve_affine(m: Matrix, b: Sequence[object]) -> Optional[Vector]:
    """Solve ``m x = b`` exactly.

    Returns the solution whose free variables (non-pivot columns) are zero,
    or ``None`` when the system is inconsistent.
    """
    if len(b) != m.rows:
        raise ValueError("right-hand side length must equal the row count")
    for r in range(m.rows):
        if b[r] and r not in m._data:
            return None
    x: Dict[int, object] = {}
    rhs = m.cols
    for rows, _cols in _components(m):
        ech = _Echelon()
        for r, row in zip(rows, _rows_as_q(m, rows)):
            v = b[r]
            if v:
                v = Fraction(v)
                row[rhs] = _q(v.numerator, v.denominator)
            if ech.insert(row) == rhs:
                return None
        _back_substitute(ech.pivots, x, rhs)
    out = [Fraction(0)] * m.cols
    for c, v in x.items():
        out[c] = _to_fraction(v)
    return out


def cohomology_dim(d_out: Matrix, d_in: Matrix) -> int:
    """Dimension of ``ker(d_out) / im(d_in)`` at the middle space of ``d_in`` then ``d_out``."""
    if d_out.cols != d_in.rows:
        raise ValueError(f"middle dimensions differ: {d_out.cols} vs {d_in.rows}")
    if not (d_out @ d_in).is_zero():
        raise CompositionError("d_out . d_in is not zero")
    return d_out.cols - rank(d_out) - rank(d_in)
