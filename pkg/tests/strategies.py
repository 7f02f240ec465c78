"""Shared hypothesis strategies and conversions for the test suite."""
from __future__ import annotations

import sympy
from gmpy2 import mpq
from hypothesis import strategies as st

from calcqe.poly import Polynomial

SYMS = sympy.symbols("x1:6")


def to_sympy(p: Polynomial):
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for i, d in enumerate(e):
            term *= SYMS[i] ** d
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, nvars: int) -> Polynomial:
    poly = sympy.Poly(expr, *SYMS[:nvars])
    return Polynomial({e: mpq(int(c.p), int(c.q)) for e, c in poly.terms()})


def Q(a, b=1) -> mpq:
    return mpq(a, b)


small_ints = st.integers(-5, 5)
rationals = st.builds(lambda a, b: mpq(a, b), st.integers(-20, 20), st.integers(1, 6))


@st.composite
def polynomials(draw, nvars: int = 2, max_degree: int = 3, max_terms: int = 4, nonconstant: bool = False,
                need_var: int | None = None):
    """Random polynomial in ``x1..x_nvars`` with small integer coefficients."""
    while True:
        n = draw(st.integers(1, max_terms))
        terms = {}
        for _ in range(n):
            e = tuple(draw(st.integers(0, max_degree)) for _ in range(nvars))
            if sum(e) > max_degree:
                continue
            c = draw(small_ints.filter(bool))
            terms[e] = terms.get(e, 0) + c
        p = Polynomial(terms)
        if nonconstant and p.is_constant():
            p = p + Polynomial.var(draw(st.integers(1, nvars)))
        if need_var is not None and p.degree(need_var) <= 0:
            p = p + Polynomial.var(need_var) * Polynomial.const(draw(small_ints.filter(bool)))
        if nonconstant and p.is_constant():
            continue
        return p
