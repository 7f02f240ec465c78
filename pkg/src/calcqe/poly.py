"""Sparse multivariate polynomials over the rationals.

Variables are identified by their position ``k >= 1`` in a global ordering
``x1 < x2 < ... < xn``.  A monomial is an exponent tuple whose entry ``k-1``
is the exponent of ``xk``; trailing zero exponents are trimmed so that every
monomial has a unique representation.

The heavy algebra (resultants, gcds, factorization) is delegated to the
dense recursive routines of :mod:`sympy.polys`, converting on the fly with
the requested variable in front.
"""
from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Mapping

import gmpy2
from gmpy2 import mpq
from sympy.polys.densebasic import dmp_from_dict, dmp_to_dict
from sympy.polys.domains import QQ
from sympy.polys.euclidtools import dmp_discriminant, dmp_gcd, dmp_resultant
from sympy.polys.densearith import dmp_quo
from sympy.polys.factortools import dmp_factor_list
from sympy.polys.sqfreetools import dmp_sqf_list

__all__ = [
    "Polynomial",
    "Sign",
    "PolynomialError",
    "level_and_degree",
    "resultant",
    "discriminant",
    "coefficients",
    "derivative",
    "refine_basis",
    "gcd",
    "to_rational",
]


class PolynomialError(ValueError):
    """Raised on misuse of the polynomial kernel (e.g. eliminating an absent variable)."""


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def of(cls, value) -> "Sign":
        if value > 0:
            return cls.POSITIVE
        if value < 0:
            return cls.NEGATIVE
        return cls.ZERO


def to_rational(value) -> mpq:
    """Convert ints, Fractions, decimal strings and mpq to an exact mpq."""
    if isinstance(value, type(mpq())):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(Fraction(value))
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or a string")
    return mpq(value)


def _trim(exp: tuple[int, ...]) -> tuple[int, ...]:
    n = len(exp)
    while n and exp[n - 1] == 0:
        n -= 1
    return exp if n == len(exp) else exp[:n]


def _add_exp(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + y for x, y in zip(a, b)) + a[len(b):]


def _lex_key(exp: tuple[int, ...], n: int) -> tuple[int, ...]:
    # lexicographic with xn most significant
    padded = exp + (0,) * (n - len(exp))
    return tuple(reversed(padded))


class Polynomial:
    """Immutable sparse polynomial with mpq coefficients.

    >>> x1, x2 = Polynomial.var(1), Polynomial.var(2)
    >>> p = x1**2 + x2**2 - 2
    >>> p.level, p.degree(2)
    (2, 2)
    >>> print(p)
    x2^2 + x1^2 - 2
    """

    __slots__ = ("_terms", "_hash", "_level")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None):
        clean: dict[tuple[int, ...], mpq] = {}
        if terms:
            for exp, c in terms.items():
                c = to_rational(c)
                if c:
                    e = _trim(tuple(exp))
                    acc = clean.get(e)
                    if acc is None:
                        clean[e] = c
                    else:
                        acc = acc + c
                        if acc:
                            clean[e] = acc
                        else:
                            del clean[e]
        self._terms = clean
        self._hash = None
        self._level = max((len(e) for e in clean), default=0)

    @classmethod
    def _raw(cls, terms: dict[tuple[int, ...], mpq]) -> "Polynomial":
        # terms must already be trimmed with nonzero mpq coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        obj._level = max((len(e) for e in terms), default=0)
        return obj

    # construction -------------------------------------------------------

    @classmethod
    def const(cls, c) -> "Polynomial":
        c = to_rational(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, k: int) -> "Polynomial":
        if k < 1:
            raise PolynomialError("variable indices start at 1")
        return cls._raw({(0,) * (k - 1) + (1,): mpq(1)})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls._raw({(): mpq(1)})

    # basic queries ------------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple[int, ...], mpq]:
        return self._terms

    @property
    def level(self) -> int:
        return self._level

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return self._level == 0

    def constant_value(self) -> mpq:
        if self._level:
            raise PolynomialError("polynomial is not constant")
        return self._terms.get((), mpq(0))

    def variables(self) -> set[int]:
        out = set()
        for e in self._terms:
            for i, d in enumerate(e):
                if d:
                    out.add(i + 1)
        return out

    def degree(self, k: int) -> int:
        """Degree in ``xk``; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        return max((e[k - 1] if len(e) >= k else 0) for e in self._terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def sotd(self) -> int:
        """Sum over all monomials of their total degree."""
        return sum(sum(e) for e in self._terms)

    def num_terms(self) -> int:
        return len(self._terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], mpq]]:
        n = self._level
        return sorted(self._terms.items(), key=lambda t: _lex_key(t[0], n), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], mpq]:
        n = self._level
        return max(self._terms.items(), key=lambda t: _lex_key(t[0], n))

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        terms = dict(self._terms)
        for e, c in other._terms.items():
            acc = terms.get(e)
            if acc is None:
                terms[e] = c
            else:
                acc = acc + c
                if acc:
                    terms[e] = acc
                else:
                    del terms[e]
        return Polynomial._raw(terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return Polynomial.zero()
        if len(other._terms) == 1 and () in other._terms:
            c = other._terms[()]
            return Polynomial._raw({e: v * c for e, v in self._terms.items()})
        terms: dict[tuple[int, ...], mpq] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exp(e1, e2)
                acc = terms.get(e)
                terms[e] = c1 * c2 if acc is None else acc + c1 * c2
        return Polynomial._raw({e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise PolynomialError("negative exponent")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = to_rational(c)
        if not c:
            return Polynomial.zero()
        return Polynomial._raw({e: v * c for e, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, type(mpq()))):
            return self._terms == Polynomial.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # structure in one variable --------------------------------------

    def coefficients(self, k: int) -> list["Polynomial"]:
        """Coefficients as a polynomial in ``xk``, highest degree first."""
        d = self.degree(k)
        if d < 0:
            return [Polynomial.zero()]
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        for e, c in self._terms.items():
            dk = e[k - 1] if len(e) >= k else 0
            rest = _trim(e[: k - 1] + (0,) + e[k:]) if len(e) >= k else e
            buckets[d - dk][rest] = c
        return [Polynomial._raw(b) for b in buckets]

    def leading_coefficient(self, k: int) -> "Polynomial":
        return self.coefficients(k)[0]

    @classmethod
    def from_coefficients(cls, coeffs: list["Polynomial"], k: int) -> "Polynomial":
        """Inverse of :meth:`coefficients` (highest degree first)."""
        d = len(coeffs) - 1
        terms: dict[tuple[int, ...], mpq] = {}
        for i, c in enumerate(coeffs):
            power = d - i
            for e, v in c._terms.items():
                if power:
                    padded = e + (0,) * max(0, k - len(e))
                    e = padded[: k - 1] + (padded[k - 1] + power,) + padded[k:]
                terms[e] = v
        return cls._raw(terms)

    def derivative(self, k: int) -> "Polynomial":
        terms = {}
        for e, c in self._terms.items():
            if len(e) >= k and e[k - 1]:
                d = e[k - 1]
                terms[_trim(e[: k - 1] + (d - 1,) + e[k:])] = c * d
        return Polynomial._raw(terms)

    def substitute(self, values: Mapping[int, object]) -> "Polynomial":
        """Substitute rational values for some variables."""
        vals = {k: to_rational(v) for k, v in values.items()}
        terms: dict[tuple[int, ...], mpq] = {}
        for e, c in self._terms.items():
            e2 = list(e)
            for k, v in vals.items():
                if len(e) >= k and e[k - 1]:
                    c = c * v ** e[k - 1]
                    e2[k - 1] = 0
            if not c:
                continue
            t = _trim(tuple(e2))
            acc = terms.get(t)
            terms[t] = c if acc is None else acc + c
        return Polynomial._raw({e: c for e, c in terms.items() if c})

    def evaluate(self, point: Iterable) -> mpq:
        """Evaluate at a rational point assigning every variable."""
        vals = [to_rational(v) for v in point]
        total = mpq(0)
        for e, c in self._terms.items():
            if len(e) > len(vals):
                raise PolynomialError("point does not assign every variable")
            term = c
            for v, d in zip(vals, e):
                if d:
                    term *= v ** d
            total += term
        return total

    def rename(self, mapping: Mapping[int, int]) -> "Polynomial":
        """Permute variables: ``xk`` becomes ``x{mapping[k]}`` (unmapped indices stay)."""
        terms = {}
        for e, c in self._terms.items():
            new: dict[int, int] = {}
            for i, d in enumerate(e):
                if d:
                    new[mapping.get(i + 1, i + 1)] = d
            width = max(new, default=0)
            terms[tuple(new.get(j, 0) for j in range(1, width + 1))] = c
        return Polynomial(terms)

    # normalization ------------------------------------------------------

    def content(self) -> mpq:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self._terms:
            return mpq(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = gmpy2.gcd(num, c.numerator)
            den = gmpy2.lcm(den, c.denominator)
        return mpq(num, den)

    def normalized(self) -> "Polynomial":
        """Primitive integer-coefficient associate with positive leading coefficient."""
        if not self._terms:
            return self
        c = self.content()
        _, lc = self.leading_term()
        if lc < 0:
            c = -c
        if c == 1:
            return self
        return Polynomial._raw({e: v / c for e, v in self._terms.items()})

    def sign_normalized(self) -> tuple[int, "Polynomial"]:
        """Return ``(sign, q)`` with ``self == sign * positive_const * q`` and q normalized."""
        if not self._terms:
            return 0, self
        _, lc = self.leading_term()
        return (1 if lc > 0 else -1), self.normalized()

    # printing -----------------------------------------------------------

    def __repr__(self) -> str:
        return f"Polynomial({self!s})"

    def __str__(self) -> str:
        return self.to_string()

    def to_string(self, names: Mapping[int, str] | None = None) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (_name(i + 1, names) if d == 1 else f"{_name(i + 1, names)}^{d}")
                for i, d in reversed(list(enumerate(e)))
                if d
            )
            a = abs(c)
            if not mono:
                body = _fmt(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt(a)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    # conversion to sympy's dense recursive form -------------------------

    def _gens(self, main: int, nvars: int) -> list[int]:
        return [main] + [j for j in range(nvars, 0, -1) if j != main]

    def to_dmp(self, main: int, nvars: int):
        gens = self._gens(main, nvars)
        d = {}
        for e, c in self._terms.items():
            padded = e + (0,) * (nvars - len(e))
            d[tuple(padded[g - 1] for g in gens)] = c
        return dmp_from_dict(d, nvars - 1, QQ)

    @classmethod
    def from_dmp(cls, f, main: int, nvars: int) -> "Polynomial":
        gens = [main] + [j for j in range(nvars, 0, -1) if j != main]
        terms = {}
        for exp, c in dmp_to_dict(f, nvars - 1, QQ).items():
            e = [0] * nvars
            for g, d in zip(gens, exp):
                e[g - 1] = d
            if c:
                terms[_trim(tuple(e))] = mpq(c)
        return cls._raw(terms)


def _name(k: int, names: Mapping[int, str] | None) -> str:
    if names and k in names:
        return names[k]
    return f"x{k}"


def _fmt(c: mpq) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _coerce(other):
    if isinstance(other, Polynomial):
        return other
    if isinstance(other, (int, Fraction, type(mpq()))):
        return Polynomial.const(other)
    return NotImplemented


# ---------------------------------------------------------------------------
# projection primitives


def level_and_degree(p: Polynomial, k: int) -> tuple[int, int]:
    return p.level, max(p.degree(k), 0)


def coefficients(p: Polynomial, k: int) -> list[Polynomial]:
    return p.coefficients(k)


def derivative(p: Polynomial, k: int) -> Polynomial:
    return p.derivative(k)


def resultant(p: Polynomial, q: Polynomial, k: int) -> Polynomial:
    """Resultant of ``p`` and ``q`` with respect to ``xk`` (subresultant PRS)."""
    if p.degree(k) <= 0 or q.degree(k) <= 0:
        raise PolynomialError(f"x{k} must occur in both polynomials")
    dp, dq = p.degree(k), q.degree(k)
    if dp < dq:
        # the library routine can return the wrong sign in this orientation
        return resultant(q, p, k).scale(-1 if dp * dq % 2 else 1)
    n = max(p.level, q.level)
    r = dmp_resultant(p.to_dmp(k, n), q.to_dmp(k, n), n - 1, QQ)
    if n == 1:
        return Polynomial.const(r)
    return _from_eliminated(r, k, n)


def _from_eliminated(r, k: int, n: int) -> Polynomial:
    # r lives in the remaining generators [n..1] \ {k}, still in descending order
    gens = [j for j in range(n, 0, -1) if j != k]
    terms = {}
    for exp, c in dmp_to_dict(r, n - 2, QQ).items():
        e = [0] * n
        for g, d in zip(gens, exp):
            e[g - 1] = d
        if c:
            terms[_trim(tuple(e))] = mpq(c)
    return Polynomial._raw(terms)


def discriminant(p: Polynomial, k: int) -> Polynomial:
    """Discriminant with respect to ``xk``; degree-1 polynomials give 1 by convention."""
    d = p.degree(k)
    if d <= 0:
        raise PolynomialError(f"x{k} does not occur in the polynomial")
    if d == 1:
        return Polynomial.one()
    n = p.level
    r = dmp_discriminant(p.to_dmp(k, n), n - 1, QQ)
    if n == 1:
        return Polynomial.const(r)
    return _from_eliminated(r, k, n)


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Normalized greatest common divisor over Q."""
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    n = max(p.level, q.level, 1)
    g = dmp_gcd(p.to_dmp(n, n), q.to_dmp(n, n), n - 1, QQ)
    return Polynomial.from_dmp(g, n, n).normalized()


def factor(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Irreducible factors over Q with multiplicities, each normalized; constants dropped."""
    if p.is_constant():
        return []
    n = p.level
    _, facs = dmp_factor_list(p.to_dmp(n, n), n - 1, QQ)
    out = []
    for f, m in facs:
        g = Polynomial.from_dmp(f, n, n)
        if not g.is_constant():
            out.append((g.normalized(), m))
    return out


def quotient(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact quotient ``p / q``; ``q`` must divide ``p``."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    n = max(p.level, q.level, 1)
    return Polynomial.from_dmp(dmp_quo(p.to_dmp(n, n), q.to_dmp(n, n), n - 1, QQ), n, n)


def squarefree_factorization(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Pairwise coprime square-free factors ``f_i`` with ``p ~ prod f_i^m_i``, normalized."""
    if p.is_constant():
        return []
    n = p.level
    _, facs = dmp_sqf_list(p.to_dmp(n, n), n - 1, QQ)
    out = []
    for f, m in facs:
        g = Polynomial.from_dmp(f, n, n)
        if not g.is_constant():
            out.append((g.normalized(), m))
    return out


def refine_basis(polys: Iterable[Polynomial]) -> frozenset[Polynomial]:
    """Square-free, pairwise coprime, normalized basis of the non-constant members.

    Each input is split into square-free parts, then parts sharing a common
    factor are split by gcds until no two members have one.  Every input is a
    product of powers of the result, up to a rational constant.
    """
    basis: list[Polynomial] = []
    for p in polys:
        if p.is_constant():
            continue
        pending = [g for f, _ in _sqf_cached(p) for g in _content_split(f)]
        while pending:
            g = pending.pop()
            if g.is_constant():
                continue
            for i, b in enumerate(basis):
                if b == g:
                    break
                d = gcd(g, b)
                if not d.is_constant():
                    del basis[i]
                    pending.extend((d, quotient(b, d).normalized(), quotient(g, d).normalized()))
                    break
            else:
                basis.append(g)
    return frozenset(basis)


def _content_split(p: Polynomial) -> list[Polynomial]:
    # content in the main variable, then the primitive part; contents split recursively
    out = []
    while not p.is_constant():
        k = p.level
        c = Polynomial.zero()
        for a in p.coefficients(k):
            c = gcd(c, a)
            if c.is_constant():
                break
        if c.is_constant():
            out.append(p.normalized())
            break
        out.append(quotient(p, c).normalized())
        p = c
    return out


_SQF_CACHE: dict[Polynomial, list[tuple[Polynomial, int]]] = {}


def _sqf_cached(p: Polynomial) -> list[tuple[Polynomial, int]]:
    key = p.normalized()
    hit = _SQF_CACHE.get(key)
    if hit is None:
        hit = squarefree_factorization(key)
        if len(_SQF_CACHE) > 50000:
            _SQF_CACHE.clear()
        _SQF_CACHE[key] = hit
    return hit


_FACTOR_CACHE: dict[Polynomial, list[tuple[Polynomial, int]]] = {}


def _factor_cached(p: Polynomial) -> list[tuple[Polynomial, int]]:
    key = p.normalized()
    hit = _FACTOR_CACHE.get(key)
    if hit is None:
        hit = factor(key)
        if len(_FACTOR_CACHE) > 50000:
            _FACTOR_CACHE.clear()
        _FACTOR_CACHE[key] = hit
    return hit


def pseudo_remainder(a: Polynomial, b: Polynomial, k: int) -> Polynomial:
    """``lc(b)^(deg a - deg b + 1) * a`` reduced modulo ``b`` as polynomials in ``xk``."""
    db = b.degree(k)
    if db < 0:
        raise ZeroDivisionError("pseudo-remainder by zero")
    da = a.degree(k)
    if da < db:
        return a
    bc = b.coefficients(k)
    lcb = bc[0]
    r = a.coefficients(k)
    # each step multiplies by lc(b) once, so the result is exactly prem
    for _ in range(da - db + 1):
        lead = r[0]
        new = []
        for i in range(len(r)):
            c = r[i] * lcb
            if i < len(bc) and not lead.is_zero():
                c = c - lead * bc[i]
            new.append(c)
        r = new[1:]
    while r and r[0].is_zero():
        r = r[1:]
    if not r:
        return Polynomial.zero()
    return Polynomial.from_coefficients(r, k)


def pseudo_quotient(a: Polynomial, b: Polynomial, k: int) -> Polynomial:
    """Quotient ``q`` with ``lc(b)^(deg a - deg b + 1) * a == q*b + r``."""
    db = b.degree(k)
    da = a.degree(k)
    if da < db:
        return Polynomial.zero()
    bc = b.coefficients(k)
    lcb = bc[0]
    r = a.coefficients(k)
    steps = da - db + 1
    quot: list[Polynomial] = []
    for _ in range(steps):
        lead = r[0]
        quot = [c * lcb for c in quot] + [lead]
        new = []
        for i in range(len(r)):
            c = r[i] * lcb
            if i < len(bc):
                c = c - lead * bc[i]
            new.append(c)
        r = new[1:]
    return Polynomial.from_coefficients(quot, k)
