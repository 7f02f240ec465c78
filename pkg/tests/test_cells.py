import random

import pytest
from gmpy2 import mpq

from calcqe.cells import (
    ImplicitCell,
    Nullified,
    characterize_cell,
    characterize_covering,
    compute_cell,
    compute_cover,
    get_enclosing_cell,
    indexed_root_formula,
)
from calcqe.formula import Const, Relation, RootAtom, conj, constraint, disj, evaluate, evaluate_partial
from calcqe.oracle import random_polynomial
from calcqe.poly import Polynomial
from calcqe.ralg import (
    NEG_INF,
    POS_INF,
    Interval,
    RealAlgebraicNumber,
    compare,
    compare_bounds,
    isolate_real_roots,
    isolate_roots_at,
    pick_value_in,
    union_covers_line,
)

R = RealAlgebraicNumber
x1, x2 = Polynomial.var(1), Polynomial.var(2)
C = Polynomial.const
CIRCLE = x1 * x1 + x2 * x2 - C(2)
P = frozenset({x2 + C(1), CIRCLE, x1 - C(1)})


def sqrt2():
    return isolate_real_roots(x1 * x1 - C(2))[1]


def _bounds_equal(iv, lo, hi):
    return compare_bounds(iv.lower, lo) == 0 and compare_bounds(iv.upper, hi) == 0


def test_compute_cell_examples():
    iv = compute_cell((R(0), R(0)), P)
    assert not iv.section and _bounds_equal(iv, R(-1), sqrt2())
    assert _bounds_equal(compute_cell((R(0),), []), NEG_INF, POS_INF)
    sec = compute_cell((sqrt2(),), [x1 * x1 - C(2)])
    assert sec.section and compare(sec.lower, sqrt2()) == 0
    bad = compute_cell((R(0), R(1)), [x1 * x2])
    assert isinstance(bad, Nullified) and bad.poly == x1 * x2


def test_indexed_root_formula_of_the_implicit_cell():
    c = ImplicitCell(P, (R(0), R(0)), compute_cell((R(0), R(0)), P))
    f = indexed_root_formula(c)
    assert f == conj(RootAtom(2, Relation.GT, x2 + C(1), 1), RootAtom(2, Relation.LT, CIRCLE, 2))
    assert "root(x2 + 1, 1) < x2" in f.to_string()
    whole = ImplicitCell(frozenset(), (R(0),), Interval.whole_line())
    assert indexed_root_formula(whole) == Const(True)
    sec = ImplicitCell(frozenset({x1 * x1 - C(2)}), (sqrt2(),), Interval.point(sqrt2()))
    assert indexed_root_formula(sec) == RootAtom(1, Relation.EQ, x1 * x1 - C(2), 2)


def test_indexed_root_formula_is_true_exactly_on_the_interval():
    c = ImplicitCell(P, (R(0), R(0)), compute_cell((R(0), R(0)), P))
    f = indexed_root_formula(c)
    for v, inside in [(-1, False), (mpq(-99, 100), True), (1, True), (mpq(3, 2), False), (0, True)]:
        assert evaluate(f, [0, v]) is inside


def test_enclosing_cell_examples():
    phi = conj(constraint(x1 * x1, ">"), disj(constraint(x1 - C(2), "<"), constraint(x1 - C(4), ">")))
    c = get_enclosing_cell(phi, (R(1),))
    assert {x1, x1 - C(2)} <= set(c.polys)
    assert _bounds_equal(c.interval, R(0), R(2))
    c = get_enclosing_cell(constraint(x1, ">"), (R(1),))
    assert set(c.polys) == {x1} and _bounds_equal(c.interval, R(0), POS_INF)
    c = get_enclosing_cell(constraint(x1 * x1, "<="), (R(1),))
    assert set(c.polys) == {x1} and _bounds_equal(c.interval, R(0), POS_INF)
    with pytest.raises(ValueError):
        get_enclosing_cell(constraint(x1 * x2, ">"), (R(1),))


def test_characterize_cell_examples():
    circle = frozenset({x1 * x1 + x2 * x2 - C(2)})
    s = (R(0), R(0))
    c = ImplicitCell(circle, s, compute_cell(s, circle))
    down = characterize_cell((R(0),), c)
    assert set(down.polys) == {x1 * x1 - C(2)}
    neg, pos = isolate_real_roots(x1 * x1 - C(2))
    assert _bounds_equal(down.interval, neg, pos)
    flat = ImplicitCell(frozenset({x1 - C(1)}), s, Interval.whole_line())
    down = characterize_cell((R(0),), flat)
    assert set(down.polys) == {x1 - C(1)} and _bounds_equal(down.interval, NEG_INF, R(1))


def test_characterize_cell_at_the_bottom_gives_a_placeholder():
    c = ImplicitCell(frozenset({x1}), (R(1),), Interval.sector(R(0), POS_INF))
    top = characterize_cell((), c)
    assert top.is_placeholder and top.level == 0


def test_compute_cover_examples():
    def cell(lo, hi):
        return ImplicitCell(frozenset(), (R(0),), Interval.sector(lo, hi))

    a, b, c, d = cell(NEG_INF, R(1)), cell(R(0), R(2)), cell(R(mpq(1, 2)), R(mpq(3, 2))), cell(R(mpq(3, 2)), POS_INF)
    assert compute_cover([d, c, b, a]) == [a, b, d]
    w = cell(NEG_INF, POS_INF)
    assert compute_cover([w]) == [w]
    left, right = cell(NEG_INF, R(mpq(7, 2))), cell(R(3), POS_INF)
    assert compute_cover([right, left]) == [left, right]
    with pytest.raises(ValueError):
        compute_cover([left])


def test_compute_cover_keeps_the_cheaper_of_two_equal_intervals():
    iv = Interval.whole_line()
    cheap = ImplicitCell(frozenset({x1}), (R(0),), iv)
    dear = ImplicitCell(frozenset({x1 ** 3 + x1 + C(1)}), (R(0),), iv)
    assert compute_cover([dear, cheap]) == [cheap]


def test_characterize_covering_examples():
    s = (R(0),)
    lo = ImplicitCell(frozenset({x2}), (R(0), R(-1)), Interval.sector(NEG_INF, R(0)))
    hi = ImplicitCell(frozenset({x2 + C(1)}), (R(0), R(0)), Interval.sector(R(-1), POS_INF))
    down = characterize_covering(s, [hi, lo])
    assert set(down.polys) == set()
    assert _bounds_equal(down.interval, NEG_INF, POS_INF)
    assert list(down.cover) == [lo, hi]


def test_characterize_covering_of_the_two_parabolas():
    c1 = x2 - C(mpq(7, 2)) + C(2) * (x1 - C(4)) ** 2
    c3 = x2 - C(3) - C(mpq(1, 4)) * (x1 - C(4)) ** 2
    s = (R(4),)
    below = ImplicitCell(frozenset({c1.normalized()}), (R(4), R(2)), Interval.sector(NEG_INF, R(mpq(7, 2))))
    above = ImplicitCell(frozenset({c3.normalized()}), (R(4), R(4)), Interval.sector(R(3), POS_INF))
    down = characterize_covering(s, [below, above])
    lo, hi = isolate_real_roots(C(9) * x1 * x1 - C(72) * x1 + C(142))
    assert _bounds_equal(down.interval, lo, hi)


# properties


def _random_poly(rng, nvars):
    return random_polynomial(rng, nvars, 2, 4)


def _rand_q(rng):
    return mpq(rng.randint(-30, 30), rng.randint(1, 6))


def _point_in(rng, iv):
    lo = iv.lower.rational if iv.lower is not NEG_INF and iv.lower.is_rational() else None
    for _ in range(200):
        v = _rand_q(rng)
        if iv.contains(v):
            return v
    if lo is not None:
        return lo
    return None


def test_compute_cell_contains_the_sample_and_no_roots():
    rng = random.Random(1)
    for _ in range(200):
        polys = [_random_poly(rng, 2) for _ in range(rng.randint(1, 3))]
        s = (R(_rand_q(rng)), R(_rand_q(rng)))
        iv = compute_cell(s, polys)
        if isinstance(iv, Nullified):
            continue
        assert iv.contains(s[1])
        if iv.section:
            continue
        for p in polys:
            if p.level != 2:
                continue
            for r in isolate_roots_at(p, s):
                assert not iv.contains(r)


def test_enclosing_cells_are_truth_invariant():
    rng = random.Random(2)
    tested = 0
    while tested < 60:
        atoms = [constraint(_random_poly(rng, 2), rng.choice(list(Relation))) for _ in range(3)]
        phi = disj(conj(atoms[0], atoms[1]), atoms[2]) if rng.random() < 0.5 else conj(atoms[0], disj(*atoms[1:]))
        if isinstance(phi, Const):
            continue
        s = (R(rng.randint(-3, 3)), R(rng.randint(-3, 3)))
        value = evaluate_partial(phi, s)
        cell = get_enclosing_cell(phi, s)
        if isinstance(cell, Nullified):
            continue
        tested += 1
        for _ in range(50):
            v = _point_in(rng, cell.interval)
            if v is None:
                break
            assert evaluate_partial(phi, (s[0], R(v))) is value


def test_characterized_cells_keep_their_boundary_structure():
    rng = random.Random(3)
    tested = 0
    while tested < 40:
        polys = frozenset(_random_poly(rng, 2) for _ in range(2))
        s = (R(rng.randint(-3, 3)), R(rng.randint(-3, 3)))
        iv = compute_cell(s, polys)
        if isinstance(iv, Nullified) or iv.section:
            continue
        c = ImplicitCell(polys, s, iv)
        down = characterize_cell(s[:1], c)
        if isinstance(down, Nullified):
            continue
        tested += 1

        def shape(point, interval):
            # for each bound: which polynomials vanish there, and at which root index
            out = []
            for b in (interval.lower, interval.upper):
                tag = set()
                if b is not NEG_INF and b is not POS_INF:
                    for p in polys:
                        if p.level == 2:
                            rs = isolate_roots_at(p, point)
                            tag |= {(p, j) for j, r in enumerate(rs) if compare(r, b) == 0}
                out.append(frozenset(tag))
            return out

        base = shape(s[:1], iv)
        for _ in range(20):
            r = _point_in(rng, down.interval)
            if r is None:
                break
            pt = (R(r),)
            # a point of the lifted cylinder strictly inside the lifted interval
            roots_here = sorted(
                (rt for p in polys if p.level == 2 for rt in isolate_roots_at(p, pt)),
                key=float,
            )
            inner = _lift_inside(pt, polys, base, roots_here)
            if inner is None:
                continue
            assert shape(pt, compute_cell(pt + (inner,), polys)) == base


def _lift_inside(pt, polys, base, roots_here):
    """A sample whose cell has the same bound polynomials as ``base``, picked by root index."""
    lo_tag, hi_tag = base
    lo = hi = None
    for p, j in lo_tag:
        rs = isolate_roots_at(p, pt)
        lo = rs[j] if j < len(rs) else None
    for p, j in hi_tag:
        rs = isolate_roots_at(p, pt)
        hi = rs[j] if j < len(rs) else None
    if (lo_tag and lo is None) or (hi_tag and hi is None):
        return None
    return pick_value_in(lo if lo is not None else NEG_INF, hi if hi is not None else POS_INF)


def test_characterized_coverings_still_cover():
    rng = random.Random(4)
    tested = 0
    while tested < 30:
        a, b = _random_poly(rng, 2), _random_poly(rng, 2)
        if a.level != 2 or b.level != 2:
            continue
        s = (R(rng.randint(-3, 3)),)
        cells = []
        for p in (a, b):
            for y in (-10, -1, 0, 1, 10):
                iv = compute_cell(s + (R(y),), [p])
                if isinstance(iv, Nullified):
                    cells = None
                    break
                cells.append(ImplicitCell(frozenset({p}), s + (R(y),), iv))
            if cells is None:
                break
        if not cells or not union_covers_line([c.interval for c in cells]):
            continue
        down = characterize_covering(s, cells)
        if isinstance(down, Nullified):
            continue
        tested += 1
        for _ in range(20):
            r = _point_in(rng, down.interval)
            if r is None:
                break
            pt = (R(r),)
            moved = []
            for c in down.cover:
                lo, hi = _moved_bounds(c, pt)
                moved.append(Interval.point(lo) if c.interval.section else Interval.sector(lo, hi))
            assert union_covers_line(moved)


def _moved_bounds(cell, pt):
    """The cell's bounds recomputed over a new base point, tracked by root index."""
    out = []
    for b in (cell.interval.lower, cell.interval.upper):
        if b is NEG_INF or b is POS_INF:
            out.append(b)
            continue
        (p,) = [q for q in cell.polys if q.level == 2]
        j = [k for k, r in enumerate(isolate_roots_at(p, cell.sample[:1])) if compare(r, b) == 0][0]
        out.append(isolate_roots_at(p, pt)[j])
    return out
