"""Real algebraic numbers, sample points and exact sign determination.

A :class:`RealAlgebraicNumber` is either an exact rational or the unique root
of a defining polynomial inside an open isolating interval with rational
endpoints.  Coordinate ``k`` of a sample point may be a root of a polynomial
in ``x1..xk`` over the preceding coordinates; such values are produced by
:func:`isolate_roots_at` when the prefix itself contains irrational
coordinates.  Values over a rational-only prefix always carry a univariate
irreducible defining polynomial.

Signs are computed with interval arithmetic and adaptive refinement; when
refinement cannot separate a value from zero an exact test decides it: the
gcd of the evaluated polynomial and the defining polynomial of the last
algebraic coordinate, taken over the field generated by the earlier
coordinates, has a root in the isolating interval iff the value vanishes.
"""
from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from typing import Sequence, Union

from gmpy2 import mpq

from . import roots as _u
from .poly import Polynomial, PolynomialError, Sign, _factor_cached, pseudo_quotient, pseudo_remainder, resultant, to_rational

__all__ = [
    "RealAlgebraicNumber",
    "NEG_INF",
    "POS_INF",
    "NULLIFIED",
    "Interval",
    "isolate_real_roots",
    "isolate_roots_at",
    "sign_at",
    "eval_partial",
    "compare",
    "compare_bounds",
    "pick_value_in",
    "sample_outside",
    "union_covers_line",
]

_LOCK = threading.RLock()
_INTERVAL_ROUNDS = 6


class RealAlgebraicNumber:
    """Exact real algebraic number.

    Rational values are stored as ``mpq``.  Irrational values keep a defining
    polynomial in ``x1..x_var`` (square-free over the field of ``prefix``),
    the prefix coordinates it is evaluated over and an open isolating
    interval.  Refinement narrows the interval in place without changing the
    value, so instances can be shared freely.
    """

    __slots__ = ("_rat", "poly", "var", "prefix", "lo", "hi", "_slo", "_dense")

    def __init__(self, value):
        self._rat = to_rational(value)
        self.poly = None
        self.var = 0
        self.prefix: tuple = ()
        self.lo = self.hi = self._rat
        self._slo = 0
        self._dense = None

    @classmethod
    def _root(cls, poly: Polynomial, var: int, prefix: tuple, lo: mpq, hi: mpq, slo: int | None = None):
        obj = cls.__new__(cls)
        obj._rat = None
        obj.poly = poly
        obj.var = var
        obj.prefix = tuple(prefix) if poly.variables() - {var} else ()
        obj.lo = mpq(lo)
        obj.hi = mpq(hi)
        obj._dense = _dense_of(poly, var) if not obj.prefix else None
        obj._slo = slo if slo is not None else obj._sign_of_defining(obj.lo)
        assert obj._slo != 0
        return obj

    # basic queries ------------------------------------------------------

    def is_rational(self) -> bool:
        return self._rat is not None

    @property
    def rational(self) -> mpq:
        if self._rat is None:
            raise ValueError("value is irrational")
        return self._rat

    def interval(self) -> tuple[mpq, mpq]:
        return self.lo, self.hi

    def defining_polynomial(self) -> Polynomial:
        if self._rat is not None:
            return (Polynomial.var(1) - Polynomial.const(self._rat)).normalized()
        return self.poly

    def __float__(self) -> float:
        if self._rat is not None:
            return float(self._rat)
        self.refine_to(mpq(1, 2**40))
        return float((self.lo + self.hi) / 2)

    def __repr__(self) -> str:
        if self._rat is not None:
            return f"RealAlgebraicNumber({_fmt_q(self._rat)})"
        return f"RealAlgebraicNumber(root of {self.poly} in ({_fmt_q(self.lo)}, {_fmt_q(self.hi)}))"

    def __str__(self) -> str:
        if self._rat is not None:
            return _fmt_q(self._rat)
        return f"~{float(self):.6g}"

    # refinement ---------------------------------------------------------

    def _sign_of_defining(self, x: mpq) -> int:
        if self._dense is not None:
            return _u.sign_at(self._dense, x)
        return int(sign_at(self.poly.substitute({self.var: x}), self.prefix))

    def refine(self) -> None:
        """Halve the isolating interval; may discover that the value is rational."""
        with _LOCK:
            if self._rat is not None:
                return
            m = (self.lo + self.hi) / 2
            s = self._sign_of_defining(m)
            if s == 0:
                self._become_rational(m)
            elif s == self._slo:
                self.lo = m
            else:
                self.hi = m

    def refine_to(self, width: mpq) -> None:
        while self._rat is None and self.hi - self.lo > width:
            self.refine()

    def _become_rational(self, m: mpq) -> None:
        self._rat = m
        self.lo = self.hi = m
        self.poly = None
        self._dense = None
        self.prefix = ()


RAN = RealAlgebraicNumber
Point = Sequence[RealAlgebraicNumber]


def _fmt_q(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _dense_of(p: Polynomial, k: int) -> list:
    return [c.constant_value() for c in p.coefficients(k)]


def as_value(v) -> RealAlgebraicNumber:
    return v if isinstance(v, RealAlgebraicNumber) else RealAlgebraicNumber(v)


# ---------------------------------------------------------------------------
# infinite bounds and intervals


class _Infinity:
    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self) -> str:
        return "+oo" if self.sign > 0 else "-oo"

    __str__ = __repr__


NEG_INF = _Infinity(-1)
POS_INF = _Infinity(1)
Bound = Union[RealAlgebraicNumber, _Infinity]


class _Nullified:
    def __repr__(self) -> str:
        return "NULLIFIED"

    def __bool__(self) -> bool:
        return False


NULLIFIED = _Nullified()


@dataclass(frozen=True)
class Interval:
    """Open sector ``(lower, upper)`` or point section ``[v, v]``."""

    lower: Bound
    upper: Bound
    section: bool = False

    @classmethod
    def point(cls, v) -> "Interval":
        v = as_value(v)
        return cls(v, v, True)

    @classmethod
    def sector(cls, lower: Bound, upper: Bound) -> "Interval":
        return cls(lower, upper, False)

    @classmethod
    def whole_line(cls) -> "Interval":
        return cls(NEG_INF, POS_INF, False)

    def contains(self, v) -> bool:
        v = as_value(v)
        if self.section:
            return compare(v, self.lower) == 0
        return compare_bounds(self.lower, v) < 0 and compare_bounds(v, self.upper) < 0

    def __str__(self) -> str:
        if self.section:
            return f"[{self.lower}, {self.lower}]"
        return f"({self.lower}, {self.upper})"


# ---------------------------------------------------------------------------
# interval arithmetic


def _imul(a: tuple, b: tuple) -> tuple:
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(p), max(p)


def _ipow(a: tuple, d: int) -> tuple:
    lo, hi = a
    if d % 2 == 1 or lo >= 0:
        return lo**d, hi**d
    if hi <= 0:
        return hi**d, lo**d
    return mpq(0), max(lo**d, hi**d)


def _enclose(q: Polynomial, point: Point) -> tuple[mpq, mpq]:
    """Closed interval containing ``q(point)``."""
    boxes = {}
    for k in q.variables():
        c = point[k - 1]
        boxes[k] = (c.lo, c.hi)
    lo = hi = mpq(0)
    for e, c in q.terms.items():
        t = (c, c)
        for i, d in enumerate(e):
            if d:
                t = _imul(t, _ipow(boxes[i + 1], d))
        lo += t[0]
        hi += t[1]
    return lo, hi


# ---------------------------------------------------------------------------
# signs


def substitute_rationals(p: Polynomial, point: Point) -> Polynomial:
    vals = {}
    for k in p.variables():
        if k <= len(point) and point[k - 1].is_rational():
            vals[k] = point[k - 1].rational
    return p.substitute(vals) if vals else p


_SIGN_CACHE: dict = {}


def sign_at(p: Polynomial, point: Point) -> Sign:
    """Exact sign of ``p`` at ``point`` (every variable of ``p`` must be assigned)."""
    if p.level > len(point):
        raise ValueError("sample point does not assign every variable of the polynomial")
    q = substitute_rationals(p, point)
    if q.is_constant():
        return Sign.of(q.constant_value())
    used = tuple(sorted(q.variables()))
    key = (q, tuple(id(point[k - 1]) for k in used))
    hit = _SIGN_CACHE.get(key)
    if hit is not None:
        return hit[0]
    s = _sign_algebraic(q, point, used)
    if len(_SIGN_CACHE) > 200000:
        _SIGN_CACHE.clear()
    # keep the coordinates alive so their ids stay valid for the key
    _SIGN_CACHE[key] = (s, tuple(point[k - 1] for k in used))
    return s


def _sign_algebraic(q: Polynomial, point: Point, used: tuple) -> Sign:
    def attempt() -> Sign | None:
        lo, hi = _enclose(q, point)
        if lo > 0:
            return Sign.POSITIVE
        if hi < 0:
            return Sign.NEGATIVE
        return None

    for _ in range(_INTERVAL_ROUNDS):
        s = attempt()
        if s is not None:
            return s
        for k in used:
            point[k - 1].refine()
        if any(point[k - 1].is_rational() for k in used):
            return sign_at(q, point)
    if _vanishes(q, point):
        return Sign.ZERO
    while True:
        s = attempt()
        if s is not None:
            return s
        for k in used:
            point[k - 1].refine()
        if any(point[k - 1].is_rational() for k in used):
            return sign_at(q, point)


def _vanishes(q: Polynomial, point: Point) -> bool:
    m = q.level
    c = point[m - 1]
    prefix = tuple(point[: m - 1])
    d = c.poly if c.var == m else c.poly.rename({c.var: m})
    g = gcd_over(q, d, m, prefix)
    if g.degree(m) <= 0:
        return False
    s1 = sign_at(g.substitute({m: c.lo}), prefix)
    s2 = sign_at(g.substitute({m: c.hi}), prefix)
    return s1 * s2 < 0


def truncate(p: Polynomial, k: int, prefix: Point) -> list[Polynomial]:
    """Coefficients of ``p`` in ``xk`` with leading terms vanishing at ``prefix`` dropped."""
    coeffs = p.coefficients(k)
    i = 0
    while i < len(coeffs) and (coeffs[i].is_zero() or sign_at(coeffs[i], prefix) == 0):
        i += 1
    return coeffs[i:]


def _primitive(p: Polynomial) -> Polynomial:
    c = p.content()
    return p if c in (0, 1) else p.scale(1 / c)


def gcd_over(a: Polynomial, b: Polynomial, k: int, prefix: Point) -> Polynomial:
    """A gcd of ``a(prefix, xk)`` and ``b(prefix, xk)`` over the field of the prefix.

    The result is a polynomial whose evaluation at ``prefix`` is the gcd up to
    a nonzero factor; its leading coefficient does not vanish at ``prefix``.
    """
    ca, cb = truncate(a, k, prefix), truncate(b, k, prefix)
    if not ca:
        return Polynomial.from_coefficients(cb, k) if cb else Polynomial.zero()
    if not cb:
        return Polynomial.from_coefficients(ca, k)
    a = Polynomial.from_coefficients(ca, k)
    b = Polynomial.from_coefficients(cb, k)
    if a.degree(k) < b.degree(k):
        a, b = b, a
    while True:
        if b.degree(k) <= 0:
            return b
        r = pseudo_remainder(a, b, k)
        cr = truncate(r, k, prefix)
        if not cr:
            return _primitive(b)
        a, b = b, _primitive(Polynomial.from_coefficients(cr, k))


# ---------------------------------------------------------------------------
# root isolation


def isolate_real_roots(p: Polynomial, var: int | None = None) -> list[RealAlgebraicNumber]:
    """Distinct real roots of a univariate polynomial, in increasing order."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    vs = p.variables()
    if len(vs) > 1:
        raise ValueError("polynomial is not univariate")
    if not vs:
        raise ValueError("constant polynomial")
    k = var if var is not None else next(iter(vs))
    out: list[RealAlgebraicNumber] = []
    for f, _ in _factor_cached(p):
        dense = _dense_of(f, k)
        exact, intervals = _u.isolate(dense)
        out.extend(RealAlgebraicNumber(r) for r in exact)
        out.extend(RealAlgebraicNumber._root(f, k, (), a, b) for a, b in intervals)
    out.sort(key=functools.cmp_to_key(compare))
    return out


_ROOT_CACHE: dict = {}


def isolate_roots_at(p: Polynomial, point: Point):
    """Real roots of ``p(point, x_i)`` where ``i = level(p)``.

    Returns an increasing list of values, or :data:`NULLIFIED` when the
    substituted polynomial is identically zero.
    """
    k = p.level
    prefix = tuple(point[: k - 1]) if k else ()
    key = (p, tuple(map(id, prefix)))
    hit = _ROOT_CACHE.get(key)
    if hit is not None:
        return hit[0]
    res = _isolate_roots_at(p, point)
    if len(_ROOT_CACHE) > 50000:
        _ROOT_CACHE.clear()
    _ROOT_CACHE[key] = (res, prefix)
    return res


def _isolate_roots_at(p: Polynomial, point: Point):
    k = p.level
    if k == 0:
        return [] if not p.is_zero() else NULLIFIED
    prefix = tuple(point[: k - 1])
    if len(prefix) < k - 1:
        raise ValueError("sample point too short")
    q = substitute_rationals(p, prefix)
    if q.is_zero():
        return NULLIFIED
    if q.degree(k) <= 0:
        return NULLIFIED if sign_at(q, prefix) == 0 else []
    if q.variables() == {k}:
        return isolate_real_roots(q, k)
    found: list[RealAlgebraicNumber] = []
    for f, _ in _factor_cached(q):
        if f.degree(k) <= 0:
            if sign_at(f, prefix) == 0:
                return NULLIFIED
            continue
        rs = _factor_roots_at(f, k, prefix)
        if rs is NULLIFIED:
            return NULLIFIED
        found.extend(rs)
    found.sort(key=functools.cmp_to_key(compare))
    out: list[RealAlgebraicNumber] = []
    for r in found:
        if not out or compare(out[-1], r) != 0:
            out.append(r)
    return out


def _factor_roots_at(f: Polynomial, k: int, prefix: tuple):
    if f.variables() == {k}:
        return isolate_real_roots(f, k)
    coeffs = truncate(f, k, prefix)
    if not coeffs:
        return NULLIFIED
    if len(coeffs) == 1:
        return []
    g = Polynomial.from_coefficients(coeffs, k)
    h = gcd_over(g, g.derivative(k), k, prefix)
    if h.degree(k) > 0:
        g = Polynomial.from_coefficients(truncate(pseudo_quotient(g, h, k), k, prefix), k)
    g = _primitive(g)
    if g.degree(k) <= 0:
        return []
    return _sturm_isolate(g, k, prefix)


def _nonzero_box(c: Polynomial, prefix: Point) -> tuple[mpq, mpq]:
    if sign_at(c, prefix) == 0:
        raise AssertionError("expected a nonzero coefficient")
    while True:
        lo, hi = _enclose(substitute_rationals(c, prefix), prefix)
        if lo > 0 or hi < 0:
            return lo, hi
        for v in c.variables():
            prefix[v - 1].refine()


def _norm_rational_roots(g: Polynomial, k: int, prefix: tuple) -> list[mpq]:
    """Rational roots of the norm of ``g`` over the prefix, a superset of its rational roots there."""
    norm = g
    for j in range(k - 1, 0, -1):
        if j not in norm.variables():
            continue
        c = prefix[j - 1]
        if c.is_rational():
            norm = norm.substitute({j: c.rational})
            continue
        try:
            norm = resultant(norm, c.poly, j)
        except PolynomialError:
            return []
        if norm.is_zero():
            return []
    if norm.variables() != {k}:
        return []
    return [r.rational for r in isolate_real_roots(norm, k) if r.is_rational()]


def _sturm_isolate(g: Polynomial, k: int, prefix: tuple) -> list[RealAlgebraicNumber]:
    coeffs = g.coefficients(k)
    lo, hi = _nonzero_box(coeffs[0], prefix)
    lead = min(abs(lo), abs(hi))
    big = mpq(0)
    for c in coeffs[1:]:
        if c.is_zero():
            continue
        clo, chi = _enclose(substitute_rationals(c, prefix), prefix)
        big = max(big, abs(clo), abs(chi))
    bound = mpq(1)
    while bound <= 1 + big / lead:
        bound *= 2

    seq = [g]
    d = _primitive(Polynomial.from_coefficients(truncate(g.derivative(k), k, prefix), k))
    seq.append(d)
    while seq[-1].degree(k) > 0:
        a, b = seq[-2], seq[-1]
        r = pseudo_remainder(a, b, k)
        delta = a.degree(k) - b.degree(k) + 1
        slc = sign_at(b.leading_coefficient(k), prefix)
        if slc > 0 or delta % 2 == 0:
            r = -r
        cr = truncate(r, k, prefix)
        if not cr:
            break
        seq.append(_primitive(Polynomial.from_coefficients(cr, k)))

    cache: dict = {}

    def sgn(f: Polynomial, y: mpq) -> int:
        return int(sign_at(f.substitute({k: y}), prefix))

    def variations(y: mpq) -> int:
        hit = cache.get(y)
        if hit is None:
            signs = [s for s in (sgn(f, y) for f in seq) if s]
            hit = sum(1 for u, v in zip(signs, signs[1:]) if u != v)
            cache[y] = hit
        return hit

    rational = [q for q in _norm_rational_roots(g, k, prefix) if sgn(g, q) == 0]
    found: list[RealAlgebraicNumber] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = variations(a) - variations(b)
        if n == 0:
            continue
        if n == 1:
            hit = [q for q in rational if a < q < b]
            if hit:
                found.append(RealAlgebraicNumber(hit[0]))
            else:
                found.append(RealAlgebraicNumber._root(g, k, prefix, a, b, sgn(g, a)))
            continue
        m = (a + b) / 2
        if sgn(g, m) == 0:
            found.append(RealAlgebraicNumber(m))
            eps = (b - a) / 4
            while sgn(g, m - eps) == 0 or sgn(g, m + eps) == 0 or variations(m - eps) - variations(m + eps) != 1:
                eps /= 2
            stack.append((a, m - eps))
            stack.append((m + eps, b))
        else:
            stack.append((a, m))
            stack.append((m, b))
    found.sort(key=lambda r: r.lo)
    return found


def eval_partial(p: Polynomial, point: Point):
    """Substitute the sample point into ``p``.

    Returns a :class:`Sign` when every variable of ``p`` is assigned,
    :data:`NULLIFIED` when the result is identically zero as a polynomial in
    the unassigned variables, and otherwise the polynomial with rational
    coordinates substituted (irrational coordinates remain as variables).
    """
    j = len(point)
    if p.level <= j:
        return sign_at(p, point)
    q = substitute_rationals(p, point)
    groups: dict[tuple, dict] = {}
    for e, c in q.terms.items():
        groups.setdefault(e[j:], {})[e[:j]] = c
    for inner in groups.values():
        coeff = Polynomial({e: c for e, c in inner.items()})
        if sign_at(coeff, point) != 0:
            return q
    return NULLIFIED


# ---------------------------------------------------------------------------
# comparison and sampling


def compare(a, b) -> int:
    """Exact comparison returning -1, 0 or 1."""
    a, b = as_value(a), as_value(b)
    if a is b:
        return 0
    if a.is_rational() and b.is_rational():
        return (a.rational > b.rational) - (a.rational < b.rational)
    if a.is_rational():
        return -compare(b, a)
    if b.is_rational():
        return _compare_with_rational(a, b.rational)
    for _ in range(4):
        if a.is_rational() or b.is_rational():
            return compare(a, b)
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        a.refine()
        b.refine()
    if a.is_rational() or b.is_rational():
        return compare(a, b)
    if _equal_algebraic(a, b):
        return 0
    while True:
        if a.is_rational() or b.is_rational():
            return compare(a, b)
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        a.refine()
        b.refine()


def _compare_with_rational(a: RealAlgebraicNumber, r: mpq) -> int:
    while True:
        if a.is_rational():
            return (a.rational > r) - (a.rational < r)
        if r <= a.lo:
            return 1
        if r >= a.hi:
            return -1
        if a._sign_of_defining(r) == 0:
            a._become_rational(r)
            return 0
        a.refine()


def _equal_algebraic(a: RealAlgebraicNumber, b: RealAlgebraicNumber) -> bool:
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo >= hi:
        return False
    if a.var != b.var and (a.prefix or b.prefix):
        raise ValueError("values belong to different coordinates")
    if not a.prefix and not b.prefix:
        fa = a.poly.rename({a.var: 1})
        fb = b.poly.rename({b.var: 1})
        if fa != fb:
            return False
        f = a._dense
        return _u.sign_at(f, lo) * _u.sign_at(f, hi) < 0
    k = a.var
    prefix = a.prefix or b.prefix
    g = gcd_over(a.poly, b.poly, k, prefix)
    if g.degree(k) <= 0:
        return False
    s1 = sign_at(g.substitute({k: lo}), prefix)
    s2 = sign_at(g.substitute({k: hi}), prefix)
    return s1 * s2 < 0


def compare_bounds(a, b) -> int:
    if isinstance(a, _Infinity):
        if isinstance(b, _Infinity):
            return (a.sign > b.sign) - (a.sign < b.sign)
        return a.sign
    if isinstance(b, _Infinity):
        return -b.sign
    return compare(a, b)


def _cmp_q(bound, r: mpq) -> int:
    """Sign of ``bound - r``."""
    if isinstance(bound, _Infinity):
        return bound.sign
    return compare(bound, RealAlgebraicNumber(r))


def _simplest_positive(too_small, too_big) -> mpq:
    # Stern-Brocot descent with runs of equal moves taken in one step
    lp, lq, rp, rq = 0, 1, 1, 0
    while True:
        mp, mq = lp + rp, lq + rq
        m = mpq(mp, mq)
        if too_small(m):
            k = _max_run(lambda t: too_small(mpq(lp + t * rp, lq + t * rq)))
            lp, lq = lp + k * rp, lq + k * rq
        elif too_big(m):
            k = _max_run(lambda t: too_big(mpq(rp + t * lp, rq + t * lq)))
            rp, rq = rp + k * lp, rq + k * lq
        else:
            return m


def _max_run(pred) -> int:
    # largest t >= 1 with pred(t), given pred(1) and pred monotone decreasing
    hi = 2
    while pred(hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def simplest_between(lower: Bound, upper: Bound) -> mpq:
    """The simplest rational strictly between two extended reals."""
    if compare_bounds(lower, upper) >= 0:
        raise ValueError("empty range")
    if _cmp_q(lower, mpq(0)) < 0 < _cmp_q(upper, mpq(0)):
        return mpq(0)
    if _cmp_q(lower, mpq(0)) >= 0:
        return _simplest_positive(lambda r: _cmp_q(lower, r) >= 0, lambda r: _cmp_q(upper, r) <= 0)
    r = _simplest_positive(lambda r: _cmp_q(upper, -r) <= 0, lambda r: _cmp_q(lower, -r) >= 0)
    return -r


def pick_value_in(lower: Bound, upper: Bound) -> RealAlgebraicNumber:
    """A simple rational strictly inside ``(lower, upper)``.

    Zero is preferred, then the integer of smallest absolute value, then the
    rational with the smallest denominator.

    >>> pick_value_in(NEG_INF, POS_INF)
    RealAlgebraicNumber(0)
    """
    return RealAlgebraicNumber(simplest_between(lower, upper))


def _union(intervals: Sequence[Interval]) -> list[tuple]:
    """Merge intervals into disjoint pieces ``(lo, lo_closed, hi, hi_closed)``."""

    def key_cmp(x, y):
        c = compare_bounds(x.lower, y.lower)
        if c:
            return c
        return (not x.section) - (not y.section)

    pieces: list[list] = []
    for iv in sorted(intervals, key=functools.cmp_to_key(key_cmp)):
        lo, lc, hi, hc = iv.lower, iv.section, iv.upper, iv.section
        if pieces:
            cur = pieces[-1]
            c = compare_bounds(lo, cur[2])
            if c < 0 or (c == 0 and (lc or cur[3])):
                d = compare_bounds(hi, cur[2])
                if d > 0:
                    cur[2], cur[3] = hi, hc
                elif d == 0:
                    cur[3] = cur[3] or hc
                continue
        pieces.append([lo, lc, hi, hc])
    return [tuple(p) for p in pieces]


def union_covers_line(intervals: Sequence[Interval]) -> bool:
    pieces = _union(intervals)
    return len(pieces) == 1 and pieces[0][0] is NEG_INF and pieces[0][2] is POS_INF


def _largest_integer_below(b: Bound, inclusive: bool) -> mpq:
    # largest integer n with n < b (or n <= b when inclusive)
    if isinstance(b, RealAlgebraicNumber) and not b.is_rational():
        while int(_floor(b.lo)) + 1 < b.hi:
            b.refine()
            if b.is_rational():
                return _largest_integer_below(b, inclusive)
        return mpq(_floor(b.lo))
    v = b.rational
    n = _floor(v)
    if n == v and not inclusive:
        n -= 1
    return mpq(n)


def _floor(q: mpq) -> int:
    return q.numerator // q.denominator


def sample_outside(intervals: Sequence[Interval]) -> RealAlgebraicNumber | None:
    """Choose a value outside the union of ``intervals`` (``None`` if they cover R).

    With nothing excluded the value is 0.  Otherwise the largest integer
    below every interval is preferred, then the smallest integer above all of
    them, then the simplest rational in a gap, and only then an algebraic
    point left uncovered between two adjacent sectors.
    """
    if not intervals:
        return RealAlgebraicNumber(0)
    pieces = _union(intervals)
    first, last = pieces[0], pieces[-1]
    if first[0] is not NEG_INF:
        return RealAlgebraicNumber(_largest_integer_below(first[0], not first[1]))
    if last[2] is not POS_INF:
        inc = not last[3]
        b = last[2]
        neg = _largest_integer_below(_negate(b), inc)
        return RealAlgebraicNumber(-neg)
    best = None
    point_gap = None
    for left, right in zip(pieces, pieces[1:]):
        a, a_closed = left[2], not left[3]
        b, b_closed = right[0], not right[1]
        if compare(a, b) == 0:
            if point_gap is None:
                point_gap = a
            continue
        cands = [simplest_between(a, b)]
        if a_closed and a.is_rational():
            cands.append(a.rational)
        if b_closed and b.is_rational():
            cands.append(b.rational)
        for c in cands:
            if best is None or _simpler(c, best):
                best = c
    if best is not None:
        return RealAlgebraicNumber(best)
    return point_gap


def _simpler(a: mpq, b: mpq) -> bool:
    return (a.denominator, abs(a.numerator), a < 0) < (b.denominator, abs(b.numerator), b < 0)


def _negate(b: RealAlgebraicNumber) -> RealAlgebraicNumber:
    if b.is_rational():
        return RealAlgebraicNumber(-b.rational)
    # -b is a root of f(-x), isolated by the mirrored interval
    k = b.var
    f = Polynomial({e: c * (-1) ** (e[k - 1] if len(e) >= k else 0) for e, c in b.poly.terms.items()})
    return RealAlgebraicNumber._root(f, k, b.prefix, -b.hi, -b.lo)
