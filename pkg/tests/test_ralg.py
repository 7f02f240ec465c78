import functools

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from calcqe import roots
from calcqe.poly import Polynomial, Sign
from calcqe.ralg import (
    NEG_INF,
    NULLIFIED,
    POS_INF,
    Interval,
    RealAlgebraicNumber,
    compare,
    isolate_real_roots,
    isolate_roots_at,
    pick_value_in,
    sample_outside,
    sign_at,
)

from strategies import Q, polynomials, rationals, to_sympy

R = RealAlgebraicNumber
x1, x2 = Polynomial.var(1), Polynomial.var(2)
C = Polynomial.const


def sqrt2():
    return isolate_real_roots(x1 * x1 - C(2))[1]


def test_isolate_examples():
    neg, pos = isolate_real_roots(x1 * x1 - C(2))
    assert not neg.is_rational() and not pos.is_rational()
    assert compare(neg, R(-1)) < 0 < compare(neg, R(-2))
    assert compare(pos, R(1)) > 0 > compare(pos, R(2))
    assert isolate_real_roots(x1 * x1 + C(1)) == []
    (one,) = isolate_real_roots(x1 * x1 - C(2) * x1 + C(1))
    assert one.is_rational() and one.rational == 1


def test_isolate_rejects_zero():
    with pytest.raises(ValueError):
        isolate_real_roots(Polynomial.zero())


def test_rational_roots_come_out_rational():
    rs = isolate_real_roots((C(3) * x1 - C(1)) * (x1 * x1 - C(3)) * (x1 + C(5)))
    assert [r.is_rational() for r in rs] == [True, False, True, False]
    assert rs[0].rational == -5 and rs[2].rational == Q(1, 3)


def test_isolate_roots_at_examples():
    neg, pos = isolate_roots_at(x1 * x1 + x2 * x2 - C(2), (R(0),))
    assert compare(pos, sqrt2()) == 0 and compare(neg, R(0)) < 0
    (r,) = isolate_roots_at(x2 + C(1), (R(0),))
    assert r.rational == -1
    assert isolate_roots_at(x1 * x2, (R(0),)) is NULLIFIED


def test_isolate_roots_over_an_algebraic_coordinate():
    # x2^2 = x1 over x1 = sqrt 2 gives -+ 2^(1/4)
    rs = isolate_roots_at(x2 * x2 - x1, (sqrt2(),))
    assert len(rs) == 2
    assert abs(float(rs[1]) - 2 ** 0.25) < 1e-9
    # x2 - x1^2 over sqrt 2 is the rational 2
    (r,) = isolate_roots_at(x2 - x1 * x1, (sqrt2(),))
    assert r.is_rational() and r.rational == 2


def test_sign_at_examples():
    s = sqrt2()
    assert sign_at(x1 * x1 - C(2), (s,)) is Sign.ZERO
    assert sign_at(x1 - C(1), (s,)) is Sign.POSITIVE
    assert sign_at(x1 * x2, (R(0), R(5))) is Sign.ZERO
    # (x2 - x1)(x2 + x1) vanishes at (sqrt 2, sqrt 2) though no factor is rational there
    assert sign_at(x2 * x2 - x1 * x1, (s, sqrt2())) is Sign.ZERO
    assert sign_at(x2 - x1 - C(Q(1, 10**9)), (s, s)) is Sign.NEGATIVE


def test_compare_examples():
    assert compare(sqrt2(), R(Q(3, 2))) < 0
    assert compare(sqrt2(), sqrt2()) == 0
    assert compare(R(-1), sqrt2()) < 0
    cube = isolate_real_roots(x1 ** 3 - C(2))[0]
    assert compare(sqrt2(), cube) > 0


def test_pick_value_in_examples():
    assert pick_value_in(NEG_INF, POS_INF).rational == 0
    assert pick_value_in(R(-1), sqrt2()).rational == 0
    assert pick_value_in(sqrt2(), R(2)).rational == Q(3, 2)
    assert pick_value_in(R(3), POS_INF).rational == 4
    assert pick_value_in(R(Q(1, 3)), R(Q(1, 2))).rational == Q(2, 5)
    with pytest.raises(ValueError):
        pick_value_in(R(1), R(1))


def test_sample_outside_examples():
    assert sample_outside([]).rational == 0
    assert sample_outside([Interval.sector(NEG_INF, R(0)), Interval.sector(R(0), POS_INF)]).rational == 0
    assert sample_outside([Interval.sector(R(-1), sqrt2())]).rational == -1
    assert sample_outside([Interval.whole_line()]) is None
    # the only gap is the point sqrt 2
    left, right = Interval.sector(NEG_INF, sqrt2()), Interval.sector(sqrt2(), POS_INF)
    assert compare(sample_outside([left, right]), sqrt2()) == 0
    assert sample_outside([left, right, Interval.point(sqrt2())]) is None


# properties


def _dense(p):
    return [mpq(str(c)) for c in sympy.Poly(to_sympy(p), sympy.Symbol("x1")).all_coeffs()]


@settings(max_examples=200, deadline=None)
@given(polynomials(1, 5, 4, nonconstant=True))
def test_isolation_matches_sympy_and_sturm(p):
    rs = isolate_real_roots(p)
    expected = sympy.Poly(to_sympy(p), sympy.Symbol("x1")).real_roots()
    distinct = sorted(set(expected), key=lambda r: float(r))
    assert len(rs) == len(distinct) == roots.sturm_count(roots.squarefree_part(_dense(p)))
    for r, e in zip(rs, distinct):
        assert abs(float(r) - float(e)) < 1e-6
        if not r.is_rational():
            lo, hi = r.interval()
            f = roots.squarefree_part(_dense(p))
            assert roots.sign_at(f, lo) * roots.sign_at(f, hi) < 0
    for a, b in zip(rs, rs[1:]):
        assert compare(a, b) < 0


@settings(max_examples=100, deadline=None)
@given(polynomials(2, 3, 4, need_var=2), st.lists(rationals, min_size=1, max_size=1))
def test_isolate_roots_at_agrees_with_substitution(p, pt):
    at = isolate_roots_at(p, tuple(R(v) for v in pt))
    direct = p.substitute({1: pt[0]})
    if direct.is_zero():
        assert at is NULLIFIED
        return
    expected = isolate_real_roots(direct, 2) if not direct.is_constant() else []
    assert len(at) == len(expected)
    assert all(compare(a, b) == 0 for a, b in zip(at, expected))


@settings(max_examples=200, deadline=None)
@given(st.lists(polynomials(1, 3, 3, nonconstant=True), min_size=1, max_size=3))
def test_compare_is_a_total_order_stable_under_refinement(ps):
    vals = [r for p in ps for r in isolate_real_roots(p)]
    before = [[compare(a, b) for b in vals] for a in vals]
    for v in vals:
        v.refine_to(mpq(1, 10**6))
    after = [[compare(a, b) for b in vals] for a in vals]
    assert before == after
    ordered = sorted(vals, key=functools.cmp_to_key(compare))
    floats = [float(v) for v in ordered]
    assert all(a <= b + 1e-9 for a, b in zip(floats, floats[1:]))


bounds = st.one_of(st.just(NEG_INF), st.just(POS_INF), rationals.map(R))


@settings(max_examples=300, deadline=None)
@given(bounds, bounds)
def test_pick_value_in_is_strictly_inside(a, b):
    from calcqe.ralg import compare_bounds

    if compare_bounds(a, b) >= 0:
        with pytest.raises(ValueError):
            pick_value_in(a, b)
        return
    v = pick_value_in(a, b)
    assert v.is_rational()
    assert compare_bounds(a, v) < 0 < compare_bounds(b, v)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(rationals, rationals, st.booleans()), max_size=5))
def test_sample_outside_avoids_every_interval(specs):
    ivs = []
    for a, b, point in specs:
        if point:
            ivs.append(Interval.point(a))
        elif a < b:
            ivs.append(Interval.sector(R(a), R(b)))
    v = sample_outside(ivs)
    if v is None:
        return
    assert not any(iv.contains(v) for iv in ivs)
