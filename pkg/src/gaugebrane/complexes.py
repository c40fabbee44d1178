"""Bounded complexes of sums of line bundles O(k) on P^n and their functorial algebra.

A :class:`BraneComplex` stores, for each position ``p``, the twists of the
summands of the term at ``p`` and the differential ``p -> p+1`` as a matrix of
homogeneous polynomials with shape ``len(terms[p+1]) x len(terms[p])``.

Sign conventions: ``C[1]`` has differential ``-d``; the cone of ``h: A -> B``
has ``Cone^p = A^{p+1} + B^p`` with differential ``[[-d_A, 0], [h, d_B]]``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .poly import HomogeneousPoly, monomial_basis

PolyMatrix = Tuple[Tuple[HomogeneousPoly, ...], ...]
Term = Tuple[int, ...]

__all__ = [
    "BraneComplex",
    "ChainMap",
    "ValidationReport",
    "cone",
    "direct_sum",
    "exceptional_generators",
    "hom_complex",
    "hom_layout",
    "line_bundle",
    "omega_layout",
    "omega_replacement",
    "random_brane",
    "random_trivial_brane",
    "shift",
    "twist",
    "validate",
]


def _zero(nvars: int) -> HomogeneousPoly:
    return HomogeneousPoly(nvars)


def _as_poly(nvars: int, v) -> HomogeneousPoly:
    if isinstance(v, HomogeneousPoly):
        if v.nvars != nvars:
            raise ValueError("polynomial ring does not match the complex")
        return v
    if v == 0:
        return _zero(nvars)
    return HomogeneousPoly.constant(nvars, v)


def pm_mul(a: Sequence[Sequence[HomogeneousPoly]], b: Sequence[Sequence[HomogeneousPoly]],
           nvars: int) -> PolyMatrix:
    """Product of polynomial matrices (rows of ``a`` against columns of ``b``)."""
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        if len(row) != inner:
            raise ValueError("polynomial matrix shapes do not compose")
        new_row = []
        for c in range(ncols):
            acc = _zero(nvars)
            for k in range(inner):
                x, y = row[k], b[k][c]
                if x.is_zero() or y.is_zero():
                    continue
                acc = acc + x * y
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def _is_zero_matrix(m: Sequence[Sequence[HomogeneousPoly]]) -> bool:
    return all(e.is_zero() for row in m for e in row)


@dataclass(frozen=True)
class BraneComplex:
    """Bounded complex of direct sums of O(k) on P^n."""

    n: int
    terms: Mapping[int, Term] = field(default_factory=dict)
    diffs: Mapping[int, PolyMatrix] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("projective dimension must be >= 1")
        nvars = self.n + 1
        terms = {int(p): tuple(int(k) for k in t) for p, t in self.terms.items() if len(t)}
        diffs: Dict[int, PolyMatrix] = {}
        for p, m in self.diffs.items():
            p = int(p)
            src, tgt = terms.get(p, ()), terms.get(p + 1, ())
            rows = [tuple(_as_poly(nvars, e) for e in row) for row in m]
            if not src or not tgt:
                if not _is_zero_matrix(rows):
                    raise ValueError(f"nonzero differential at {p} touches a zero term")
                continue
            if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
                raise ValueError(
                    f"differential at {p} must be {len(tgt)}x{len(src)}, got "
                    f"{len(rows)}x{len(rows[0]) if rows else 0}")
            if not _is_zero_matrix(rows):
                diffs[p] = tuple(rows)
        object.__setattr__(self, "terms", dict(sorted(terms.items())))
        object.__setattr__(self, "diffs", dict(sorted(diffs.items())))

    @property
    def nvars(self) -> int:
        return self.n + 1

    def term(self, p: int) -> Term:
        return self.terms.get(p, ())

    def diff(self, p: int) -> PolyMatrix:
        """Differential p -> p+1, zero-filled when not stored."""
        m = self.diffs.get(p)
        if m is not None:
            return m
        z = _zero(self.nvars)
        return tuple(tuple(z for _ in self.term(p)) for _ in self.term(p + 1))

    @property
    def positions(self) -> List[int]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def twists(self) -> List[int]:
        return [k for t in self.terms.values() for k in t]

    def rank(self) -> int:
        return sum(len(t) for t in self.terms.values())

    def __repr__(self) -> str:
        body = ", ".join(f"{p}: {list(t)}" for p, t in self.terms.items())
        return f"BraneComplex(n={self.n}, {{{body}}})"


def line_bundle(n: int, k: int, position: int = 0) -> BraneComplex:
    return BraneComplex(n, {position: (k,)})


def zero_complex(n: int) -> BraneComplex:
    return BraneComplex(n)


@dataclass(frozen=True)
class ValidationReport:
    homogeneity_violations: Tuple[Tuple[int, int, int, int, Optional[int]], ...]
    nonzero_squares: Tuple[int, ...]
    in_range: bool
    all_twists_zero: bool

    @property
    def valid(self) -> bool:
        return not self.homogeneity_violations and not self.nonzero_squares

    def summary(self) -> str:
        if not self.valid:
            bits = []
            for p, j, i, want, got in self.homogeneity_violations:
                bits.append(f"position {p} entry ({j},{i}): needs degree {want}, has {got}")
            for p in self.nonzero_squares:
                bits.append(f"d^{p + 1} d^{p} != 0")
            return "invalid: " + "; ".join(bits)
        words = ["valid", "in-range" if self.in_range else "out-of-range"]
        if self.all_twists_zero:
            words.append("all twists 0")
        return ", ".join(words)


def validate(c: BraneComplex) -> ValidationReport:
    """Check homogeneity of differentials, d^2 = 0, and whether twists lie in [-n, 0]."""
    hom = []
    for p, m in c.diffs.items():
        src, tgt = c.term(p), c.term(p + 1)
        for j, row in enumerate(m):
            for i, e in enumerate(row):
                if not e.fits_degree(tgt[j] - src[i]):
                    hom.append((p, j, i, tgt[j] - src[i], e.degree))
    squares = []
    if not hom:
        for p in c.diffs:
            if p + 1 in c.diffs and not _is_zero_matrix(pm_mul(c.diffs[p + 1], c.diffs[p], c.nvars)):
                squares.append(p)
    tw = c.twists()
    return ValidationReport(
        homogeneity_violations=tuple(hom),
        nonzero_squares=tuple(squares),
        in_range=all(-c.n <= k <= 0 for k in tw),
        all_twists_zero=all(k == 0 for k in tw),
    )


def _require_valid(c: BraneComplex) -> None:
    rep = validate(c)
    if not rep.valid:
        raise ValueError(rep.summary())


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True)
class ChainMap:
    source: BraneComplex
    target: BraneComplex
    components: Mapping[int, PolyMatrix] = field(default_factory=dict)

    def __post_init__(self):
        if self.source.n != self.target.n:
            raise ValueError("chain map between different projective spaces")
        nvars = self.source.nvars
        comps = {}
        for p, m in self.components.items():
            src, tgt = self.source.term(p), self.target.term(p)
            rows = [tuple(_as_poly(nvars, e) for e in row) for row in m]
            if not src or not tgt:
                if not _is_zero_matrix(rows):
                    raise ValueError(f"nonzero component at {p} touches a zero term")
                continue
            if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
                raise ValueError(f"component at {p} has the wrong shape")
            if not _is_zero_matrix(rows):
                comps[int(p)] = tuple(rows)
        object.__setattr__(self, "components", dict(sorted(comps.items())))

    def component(self, p: int) -> PolyMatrix:
        m = self.components.get(p)
        if m is not None:
            return m
        z = _zero(self.source.nvars)
        return tuple(tuple(z for _ in self.source.term(p)) for _ in self.target.term(p))

    def degree_violations(self) -> List[Tuple[int, int, int]]:
        bad = []
        for p, m in self.components.items():
            src, tgt = self.source.term(p), self.target.term(p)
            for j, row in enumerate(m):
                for i, e in enumerate(row):
                    if not e.fits_degree(tgt[j] - src[i]):
                        bad.append((p, j, i))
        return bad

    def is_chain_map(self) -> bool:
        if self.degree_violations():
            return False
        nv = self.source.nvars
        ps = set(self.source.positions) | {p + 1 for p in self.source.positions}
        for p in sorted(ps):
            if not self.source.term(p) or not self.target.term(p + 1):
                continue
            left = pm_mul(self.target.diff(p), self.component(p), nv) if self.target.term(p) else None
            right = pm_mul(self.component(p + 1), self.source.diff(p), nv) if self.source.term(p + 1) else None
            if left is None and right is None:
                continue
            if left is None:
                if not _is_zero_matrix(right):
                    return False
            elif right is None:
                if not _is_zero_matrix(left):
                    return False
            elif left != right:
                diff = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(left, right)]
                if not _is_zero_matrix(diff):
                    return False
        return True


# ---------------------------------------------------------------------------
# constructors


def shift(c: BraneComplex, l: int) -> BraneComplex:
    """c[l]: the term at p moves to p - l and the differential picks up (-1)^l."""
    sign = -1 if l % 2 else 1
    terms = {p - l: t for p, t in c.terms.items()}
    diffs = {p - l: tuple(tuple(e * sign if sign < 0 else e for e in row) for row in m)
             for p, m in c.diffs.items()}
    return BraneComplex(c.n, terms, diffs)


def twist(c: BraneComplex, k: int) -> BraneComplex:
    return BraneComplex(c.n, {p: tuple(x + k for x in t) for p, t in c.terms.items()}, c.diffs)


def _block(blocks: Sequence[Sequence[PolyMatrix]], row_sizes: Sequence[int], col_sizes: Sequence[int],
           nvars: int) -> PolyMatrix:
    z = _zero(nvars)
    out = []
    for bi, rs in enumerate(row_sizes):
        for r in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                blk = blocks[bi][bj]
                if blk is None:
                    row.extend([z] * cs)
                else:
                    row.extend(blk[r])
            out.append(tuple(row))
    return tuple(out)


def direct_sum(a: BraneComplex, b: BraneComplex) -> BraneComplex:
    if a.n != b.n:
        raise ValueError("direct sum of complexes on different projective spaces")
    positions = sorted(set(a.terms) | set(b.terms))
    terms = {p: a.term(p) + b.term(p) for p in positions}
    diffs = {}
    for p in positions:
        if not terms.get(p + 1):
            continue
        diffs[p] = _block([[a.diff(p), None], [None, b.diff(p)]],
                          [len(a.term(p + 1)), len(b.term(p + 1))],
                          [len(a.term(p)), len(b.term(p))], a.nvars)
    return BraneComplex(a.n, terms, diffs)


def cone(h: ChainMap) -> BraneComplex:
    """Mapping cone A[1] + B of h: A -> B."""
    a, b = h.source, h.target
    positions = sorted({p - 1 for p in a.terms} | set(b.terms))
    terms = {p: a.term(p + 1) + b.term(p) for p in positions}
    diffs = {}
    for p in positions:
        if not terms.get(p + 1):
            continue
        neg_da = tuple(tuple(-e for e in row) for row in a.diff(p + 1))
        diffs[p] = _block([[neg_da, None], [h.component(p + 1), b.diff(p)]],
                          [len(a.term(p + 2)), len(b.term(p + 1))],
                          [len(a.term(p + 1)), len(b.term(p))], a.nvars)
    return BraneComplex(a.n, terms, diffs)


def hom_layout(a: BraneComplex, b: BraneComplex) -> Dict[int, List[Tuple[int, int, int]]]:
    """Summand labels of the Hom complex: position m -> [(p, i, j)] for A^p_i -> B^{p+m}_j."""
    layout: Dict[int, List[Tuple[int, int, int]]] = {}
    for m in sorted({q - p for p in a.terms for q in b.terms}):
        labels = [(p, i, j) for p in a.terms for i in range(len(a.terms[p]))
                  for j in range(len(b.term(p + m)))]
        if labels:
            layout[m] = labels
    return layout


def hom_complex(a: BraneComplex, b: BraneComplex) -> BraneComplex:
    """Sheaf Hom complex Hom^m = sum_p Hom(A^p, B^{p+m}).

    Differential: (dg)^p = d_B g^p + (-1)^{m+1} g^{p+1} d_A^p.
    """
    if a.n != b.n:
        raise ValueError("Hom between complexes on different projective spaces")
    layout = hom_layout(a, b)
    terms = {m: tuple(b.terms[p + m][j] - a.terms[p][i] for p, i, j in labels)
             for m, labels in layout.items()}
    z = _zero(a.nvars)
    diffs = {}
    for m, labels in layout.items():
        tgt_labels = layout.get(m + 1)
        if not tgt_labels:
            continue
        index = {lab: r for r, lab in enumerate(tgt_labels)}
        rows = [[z] * len(labels) for _ in tgt_labels]
        sign = 1 if (m + 1) % 2 == 0 else -1
        for col, (p, i, j) in enumerate(labels):
            # post-composition with d_B: (p, i, j) -> (p, i, j')
            db = b.diff(p + m)
            for jj in range(len(b.term(p + m + 1))):
                e = db[jj][j]
                if not e.is_zero():
                    r = index[(p, i, jj)]
                    rows[r][col] = rows[r][col] + e
            # pre-composition with d_A^{p-1}: (p, i, j) -> (p-1, i', j)
            da = a.diff(p - 1)
            for ii in range(len(a.term(p - 1))):
                e = da[i][ii]
                if not e.is_zero():
                    r = index[(p - 1, ii, j)]
                    rows[r][col] = rows[r][col] + (e if sign > 0 else -e)
        diffs[m] = tuple(tuple(r) for r in rows)
    return BraneComplex(a.n, terms, diffs)


def wedge_basis(n: int, j: int) -> List[Tuple[int, ...]]:
    """Basis e_J of the j-th exterior power of the (n+1)-dim space, lexicographic."""
    return list(combinations(range(n + 1), j))


def omega_layout(c: BraneComplex, p: int) -> Dict[int, List[Tuple[int, int, int, Tuple[int, ...]]]]:
    """Summand labels of the Omega^p replacement: position s -> [(t, j, i, J)].

    ``t`` is the position in ``c``, ``j`` the Koszul degree (0..p), ``i`` the
    summand of ``c^t`` and ``J`` the wedge index of size p - j.
    """
    layout: Dict[int, List[Tuple[int, int, int, Tuple[int, ...]]]] = {}
    for s in sorted({t + j for t in c.terms for j in range(p + 1)}):
        labels = []
        for t in c.terms:
            j = s - t
            if 0 <= j <= p:
                for i in range(len(c.terms[t])):
                    for J in wedge_basis(c.n, p - j):
                        labels.append((t, j, i, J))
        if labels:
            layout[s] = labels
    return layout


def omega_replacement(c: BraneComplex, p: int) -> BraneComplex:
    """Complex of line-bundle sums quasi-isomorphic to Omega^p tensor c.

    Each O(k) becomes [O(k-p)^{C(n+1,p)} -> ... -> O(k-1)^{n+1} -> O(k)] in
    degrees 0..p with Euler-contraction maps; the differential of ``c``
    enters with sign (-1)^j on Koszul degree j.
    """
    if not 1 <= p <= c.n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={c.n}")
    nv = c.nvars
    layout = omega_layout(c, p)
    terms = {s: tuple(c.terms[t][i] - p + j for t, j, i, J in labels) for s, labels in layout.items()}
    z = _zero(nv)
    xs = [HomogeneousPoly.variable(nv, l) for l in range(nv)]
    diffs = {}
    for s, labels in layout.items():
        tgt = layout.get(s + 1)
        if not tgt:
            continue
        index = {lab: r for r, lab in enumerate(tgt)}
        rows = [[z] * len(labels) for _ in tgt]
        for col, (t, j, i, J) in enumerate(labels):
            if j < p:
                for r_pos, var in enumerate(J):
                    e = xs[var] if r_pos % 2 == 0 else -xs[var]
                    rest = J[:r_pos] + J[r_pos + 1:]
                    rows[index[(t, j + 1, i, rest)]][col] = e
            d = c.diff(t)
            for ii in range(len(c.term(t + 1))):
                e = d[ii][i]
                if not e.is_zero():
                    rows[index[(t + 1, j, ii, J)]][col] = e if j % 2 == 0 else -e
        diffs[s] = tuple(tuple(r) for r in rows)
    return BraneComplex(c.n, terms, diffs)


def exceptional_generators(n: int) -> List[BraneComplex]:
    """O(-n), ..., O(-1), O as single-term complexes at position 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [line_bundle(n, k) for k in range(-n, 1)]


# ---------------------------------------------------------------------------
# random constructions


def _random_poly(rng: random.Random, nvars: int, degree: int, max_terms: int = 3) -> HomogeneousPoly:
    if degree < 0:
        return _zero(nvars)
    monos = monomial_basis(nvars - 1, degree)
    picks = rng.sample(monos, min(len(monos), rng.randint(1, max_terms)))
    terms = {}
    for m in picks:
        c = rng.choice((-2, -1, 1, 2))
        terms[m] = c
    return HomogeneousPoly(nvars, terms)


def _random_map(rng: random.Random, a: BraneComplex, b: BraneComplex, radical: bool,
                density: float) -> ChainMap:
    comps = {}
    for p in a.terms:
        if p not in b.terms:
            continue
        rows = []
        for kb in b.terms[p]:
            row = []
            for ka in a.terms[p]:
                deg = kb - ka
                if deg < 0 or (radical and deg == 0) or rng.random() > density:
                    row.append(_zero(a.nvars))
                else:
                    row.append(_random_poly(rng, a.nvars, deg))
            rows.append(tuple(row))
        comps[p] = tuple(rows)
    return ChainMap(a, b, comps)


def random_brane(n: int, depth: int, seed: int, radical: bool = True, retries: int = 20) -> BraneComplex:
    """Deterministic pseudo-random element of the depth-th cone closure of the generators.

    With ``radical=True`` cone maps never carry nonzero constants between
    equal twists, so the result is a minimal complex.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    rng = random.Random(f"brane:{n}:{depth}:{seed}")
    gens = exceptional_generators(n)
    pool = [shift(g, rng.randint(-1, 1)) for g in gens]
    if depth == 0:
        return rng.choice(pool)
    built = None
    for _ in range(depth):
        a = rng.choice(pool)
        b = rng.choice(pool)
        # align a random term of a with a random term of b so a nonzero map is possible
        pa = rng.choice(a.positions)
        pb = rng.choice(b.positions)
        a = shift(a, pa - pb)
        h = None
        for _attempt in range(retries):
            cand = _random_map(rng, a, b, radical, density=0.7)
            if cand.is_chain_map():
                h = cand
                break
        if h is None:
            h = ChainMap(a, b)
        built = cone(h)
        pool.append(built)
    return built


def _unimodular(rng: random.Random, size: int) -> Tuple[List[List[int]], List[List[int]]]:
    """Random integer matrix with integer inverse, returned with its inverse."""
    g = [[int(i == j) for j in range(size)] for i in range(size)]
    ginv = [row[:] for row in g]
    for _ in range(2 * size):
        if size < 2:
            break
        i, j = rng.sample(range(size), 2)
        c = rng.choice((-1, 1))
        # g <- E g with E = I + c e_ij; ginv <- ginv E^{-1}
        for k in range(size):
            g[i][k] += c * g[j][k]
        for k in range(size):
            ginv[k][j] -= c * ginv[k][i]
    return g, ginv


def random_trivial_brane(n: int, seed: int, max_len: int = 3, max_rank: int = 3) -> BraneComplex:
    """Random complex of copies of O with constant differentials and d^2 = 0.

    Built as a sum of elementary pieces (O alone, or O --1--> O) conjugated by
    random unimodular base changes at every position.
    """
    rng = random.Random(f"trivial:{n}:{seed}")
    length = rng.randint(1, max_len)
    start = rng.randint(-1, 0)
    nv = n + 1
    # sizes[p] counts: isolated copies, sources of identity pieces, targets of identity pieces
    pieces: Dict[int, List[str]] = {p: [] for p in range(start, start + length)}
    for p in range(start, start + length):
        for _ in range(rng.randint(0 if length > 1 else 1, max_rank)):
            if p + 1 < start + length and rng.random() < 0.5:
                pieces[p].append(f"src{p}:{len(pieces[p])}")
                pieces[p + 1].append(f"tgt{p}:{len(pieces[p]) - 1}")
            else:
                pieces[p].append("iso")
    terms = {p: (0,) * len(v) for p, v in pieces.items() if v}
    base: Dict[int, List[List[int]]] = {}
    for p in range(start, start + length - 1):
        src, tgt = pieces[p], pieces[p + 1]
        m = [[0] * len(src) for _ in tgt]
        for i, lab in enumerate(src):
            if lab.startswith("src"):
                m[tgt.index("tgt" + lab[3:])][i] = 1
        base[p] = m
    change = {p: _unimodular(rng, len(v)) for p, v in pieces.items()}
    diffs = {}
    for p, m in base.items():
        if not m or not m[0]:
            continue
        g_next = change[p + 1][0]
        g_inv = change[p][1]
        prod = [[sum(g_next[r][k] * m[k][c] for k in range(len(m))) for c in range(len(m[0]))]
                for r in range(len(g_next))]
        prod = [[sum(prod[r][k] * g_inv[k][c] for k in range(len(g_inv))) for c in range(len(g_inv[0]))]
                for r in range(len(prod))]
        diffs[p] = tuple(tuple(_as_poly(nv, v) for v in row) for row in prod)
    return BraneComplex(n, terms, diffs)
