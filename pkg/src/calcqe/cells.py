"""Implicit cells and the projection that generalizes them to lower levels.

An implicit cell ``(P, s, I)`` stands for the maximal region around the
sample ``s`` on which the polynomials ``P`` keep their signs; ``I`` is the
interval of the last coordinate over ``s[:-1]``.  Characterizing a cell (or
a covering of a whole cylinder) computes McCallum-style projection factors
and the interval they induce one level down.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import Formula, Relation, RootAtom, conj
from .implicants import decide_and_explain, literal_polys
from .poly import Polynomial, discriminant, refine_basis, resultant
from .ralg import (
    NEG_INF,
    NULLIFIED,
    POS_INF,
    Interval,
    RealAlgebraicNumber,
    compare,
    compare_bounds,
    isolate_roots_at,
    sign_at,
    union_covers_line,
)
from .stats import Stats

__all__ = [
    "ImplicitCell",
    "Nullified",
    "compute_cell",
    "get_enclosing_cell",
    "enclosing_cell",
    "characterize_cell",
    "compute_cover",
    "characterize_covering",
    "indexed_root_formula",
    "root_bounds",
]


@dataclass(frozen=True)
class Nullified:
    """A polynomial vanished identically over the sample prefix."""

    poly: Polynomial
    sample: tuple


@dataclass(eq=False)
class ImplicitCell:
    polys: frozenset
    sample: tuple
    interval: Interval | None
    cover: tuple = field(default=())

    @property
    def level(self) -> int:
        return len(self.sample)

    @property
    def is_placeholder(self) -> bool:
        return self.interval is None

    def __str__(self) -> str:
        ps = ", ".join(sorted(str(p) for p in self.polys))
        return f"Cell({{{ps}}}, ({', '.join(map(str, self.sample))}), {self.interval})"


def _sorted_polys(polys: Iterable[Polynomial]) -> list[Polynomial]:
    return sorted(polys, key=lambda p: (p.level, str(p)))


def compute_cell(sample: Sequence[RealAlgebraicNumber], polys: Iterable[Polynomial]):
    """Maximal interval around the last coordinate on which ``polys`` are sign-invariant.

    Returns an :class:`Interval` or :class:`Nullified`.
    """
    i = len(sample)
    if i == 0:
        return None
    v = sample[-1]
    prefix = tuple(sample[:-1])
    top = [p for p in _sorted_polys(polys) if p.level == i]
    all_roots = []
    for p in top:
        rs = isolate_roots_at(p, sample)
        if rs is NULLIFIED:
            return Nullified(p, prefix)
        all_roots.append(rs)
    lo, hi = NEG_INF, POS_INF
    for rs in all_roots:
        # roots are sorted: bisect for the neighbours of v
        a, b = 0, len(rs)
        while a < b:
            m = (a + b) // 2
            if compare(rs[m], v) < 0:
                a = m + 1
            else:
                b = m
        if a < len(rs) and compare(rs[a], v) == 0:
            return Interval.point(v)
        if a > 0 and (lo is NEG_INF or compare(rs[a - 1], lo) > 0):
            lo = rs[a - 1]
        if a < len(rs) and (hi is POS_INF or compare(rs[a], hi) < 0):
            hi = rs[a]
    return Interval.sector(lo, hi)


def enclosing_cell(sample: Sequence[RealAlgebraicNumber], implicant: Iterable[Formula]):
    """Implicit cell around ``sample`` built from the polynomials of an implicant."""
    polys = refine_basis(literal_polys(implicant))
    iv = compute_cell(sample, polys)
    if isinstance(iv, Nullified):
        return iv
    return ImplicitCell(polys, tuple(sample), iv)


def get_enclosing_cell(matrix: Formula, sample: Sequence[RealAlgebraicNumber], mode: str = "propagate",
                       metric: str = "sotd", budget: int | None = None, stats: Stats | None = None):
    """Truth-invariant cell of ``matrix`` around a sample at which it is decided."""
    e = decide_and_explain(matrix, sample, mode, metric, budget)
    if e.implicant is None:
        raise ValueError("the matrix is not decided at this sample")
    if stats is not None:
        stats.implicants_generated += e.candidates
        stats.implicants_used += 1
    return enclosing_cell(sample, e.implicant)


# ---------------------------------------------------------------------------
# projection


@functools.lru_cache(maxsize=100000)
def _resultant_factors(p: Polynomial, q: Polynomial, k: int) -> frozenset:
    return refine_basis([resultant(p, q, k)])


@functools.lru_cache(maxsize=100000)
def _disc_factors(p: Polynomial, k: int) -> frozenset:
    if p.degree(k) < 2:
        return frozenset()
    return refine_basis([discriminant(p, k)])


def _own_factors(p: Polynomial, k: int, sample: Sequence) -> frozenset:
    # coefficients from the top down to the first one that cannot vanish in the cell
    parts = []
    for c in p.coefficients(k):
        if c.is_zero():
            continue
        if c.is_constant():
            break
        parts.append(c)
        if sign_at(c, sample) != 0:
            break
    return refine_basis(parts) | _disc_factors(p, k)


def _res(p: Polynomial, q: Polynomial, k: int, stats: Stats | None) -> frozenset:
    if p == q:
        return frozenset()
    if stats is not None:
        stats.resultants_computed += 1
    a, b = sorted((p, q), key=str)
    return _resultant_factors(a, b, k)


def _roots_over(p: Polynomial, sample: Sequence) -> list:
    rs = isolate_roots_at(p, sample)
    if rs is NULLIFIED:
        raise _NullifiedSignal(p, tuple(sample[: p.level - 1]))
    return rs


class _NullifiedSignal(Exception):
    def __init__(self, p, s):
        self.result = Nullified(p, s)


def _vanishing_at(polys: Sequence[Polynomial], bound, sample: Sequence) -> list[Polynomial]:
    if not isinstance(bound, RealAlgebraicNumber):
        return []
    return [p for p in polys if any(compare(r, bound) == 0 for r in _roots_over(p, sample))]


def _projection(sample: Sequence, cell: ImplicitCell, stats: Stats | None) -> set:
    k = len(sample) + 1
    top = [p for p in _sorted_polys(cell.polys) if p.level == k]
    out = {p for p in cell.polys if p.level < k}
    for p in top:
        out |= _own_factors(p, k, sample)
    iv = cell.interval
    low = _vanishing_at(top, iv.lower, sample)
    up = _vanishing_at(top, iv.upper, sample)
    for p in low:
        for q in top:
            if q != p and any(compare(r, iv.lower) <= 0 for r in _roots_over(q, sample)):
                out |= _res(p, q, k, stats)
    for p in up:
        for q in top:
            if q != p and any(compare(r, iv.upper) >= 0 for r in _roots_over(q, sample)):
                out |= _res(p, q, k, stats)
    for p in low:
        for q in up:
            out |= _res(p, q, k, stats)
    return out


def _finish(sample: Sequence, polys: set, cover: tuple = ()):
    basis = refine_basis(polys)
    if not sample:
        return ImplicitCell(frozenset(), (), None, cover)
    iv = compute_cell(sample, basis)
    if isinstance(iv, Nullified):
        return iv
    return ImplicitCell(basis, tuple(sample), iv, cover)


def characterize_cell(sample: Sequence[RealAlgebraicNumber], cell: ImplicitCell, stats: Stats | None = None):
    """Project a cell one level down; returns an :class:`ImplicitCell` or :class:`Nullified`."""
    if stats is not None:
        stats.cells_characterized += 1
    try:
        polys = _projection(sample, cell, stats) if sample else set()
    except _NullifiedSignal as e:
        return e.result
    return _finish(sample, polys)


def _contained(a: Interval, b: Interval) -> bool:
    if b.section:
        return a.section and compare(a.lower, b.lower) == 0
    if a.section:
        return compare_bounds(b.lower, a.lower) < 0 and compare_bounds(a.lower, b.upper) < 0
    return compare_bounds(b.lower, a.lower) <= 0 and compare_bounds(a.upper, b.upper) <= 0


def _same(a: Interval, b: Interval) -> bool:
    return (a.section == b.section and compare_bounds(a.lower, b.lower) == 0
            and compare_bounds(a.upper, b.upper) == 0)


def compute_cover(cells: Sequence[ImplicitCell]) -> list[ImplicitCell]:
    """Redundancy-free subsequence of ``cells`` sorted by lower bound."""
    cells = list(cells)
    if not union_covers_line([c.interval for c in cells]):
        raise ValueError("the intervals do not cover the real line")
    keys = [(sum(p.sotd() for p in c.polys), n) for n, c in enumerate(cells)]
    keep = []
    for n, c in enumerate(cells):
        redundant = False
        for m, d in enumerate(cells):
            if m == n or not _contained(c.interval, d.interval):
                continue
            if not _same(c.interval, d.interval) or keys[m] < keys[n]:
                redundant = True
                break
        if not redundant:
            keep.append(c)

    def order(a: ImplicitCell, b: ImplicitCell) -> int:
        c = compare_bounds(a.interval.lower, b.interval.lower)
        if c:
            return c
        return (not a.interval.section) - (not b.interval.section)

    keep.sort(key=functools.cmp_to_key(order))
    return keep


def characterize_covering(sample: Sequence[RealAlgebraicNumber], cells: Sequence[ImplicitCell],
                          stats: Stats | None = None):
    """Project a covering of the cylinder over ``sample``.

    The returned cell records the selected covering in ``cover``.
    """
    seq = compute_cover(cells)
    if stats is not None:
        stats.cells_characterized += 1
    if not sample:
        return ImplicitCell(frozenset(), (), None, tuple(seq))
    k = len(sample) + 1
    polys: set = set()
    try:
        for c in seq:
            polys |= _projection(sample, c, stats)
        for a, b in zip(seq, seq[1:]):
            ta = [p for p in _sorted_polys(a.polys) if p.level == k]
            tb = [p for p in _sorted_polys(b.polys) if p.level == k]
            for p in _vanishing_at(ta, a.interval.upper, sample):
                for q in _vanishing_at(tb, b.interval.lower, sample):
                    polys |= _res(p, q, k, stats)
    except _NullifiedSignal as e:
        return e.result
    return _finish(sample, polys, tuple(seq))


# ---------------------------------------------------------------------------
# symbolic description


def _root_exprs(cell: ImplicitCell, bound) -> list[tuple[Polynomial, int]]:
    if not isinstance(bound, RealAlgebraicNumber):
        return []
    k = cell.level
    out = []
    for p in _sorted_polys(cell.polys):
        if p.level != k:
            continue
        rs = _roots_over(p, cell.sample)
        below = 0
        for r in rs:
            c = compare(r, bound)
            if c < 0:
                below += 1
            elif c == 0:
                out.append((p, below + 1))
                break
            else:
                break
    return out


def root_bounds(cell: ImplicitCell) -> tuple[list[RootAtom], list[RootAtom]]:
    """Lower and upper bound atoms of a cell (sections give non-strict pairs)."""
    if cell.is_placeholder:
        return [], []
    k = cell.level
    iv = cell.interval
    if iv.section:
        ex = _root_exprs(cell, iv.lower)
        return ([RootAtom(k, Relation.GE, p, j) for p, j in ex],
                [RootAtom(k, Relation.LE, p, j) for p, j in ex])
    lower = [RootAtom(k, Relation.GT, p, j) for p, j in _root_exprs(cell, iv.lower)]
    upper = [RootAtom(k, Relation.LT, p, j) for p, j in _root_exprs(cell, iv.upper)]
    return lower, upper


def bounds_formula(lower: Sequence[RootAtom], upper: Sequence[RootAtom]) -> Formula:
    """Conjunction of bound atoms; a matching non-strict pair becomes an equation."""
    ups = {(a.poly, a.index): a for a in upper}
    parts: list[Formula] = []
    merged = set()
    for a in lower:
        key = (a.poly, a.index)
        if a.rel is Relation.GE and key in ups and ups[key].rel is Relation.LE:
            parts.append(RootAtom(a.var, Relation.EQ, a.poly, a.index))
            merged.add(key)
        else:
            parts.append(a)
    parts.extend(a for a in upper if (a.poly, a.index) not in merged)
    return conj(*parts)


def indexed_root_formula(cell: ImplicitCell) -> Formula:
    """Symbolic description of the cell's interval by indexed root atoms.

    Lower bounds read ``root(p, j) < x``, upper bounds ``x < root(p, j)`` and
    sections ``x = root(p, j)``; an unbounded interval gives ``True``.
    """
    lower, upper = root_bounds(cell)
    return bounds_formula(lower, upper)
