"""Naive sign-invariant cylindrical decomposition, used as an independent referee.

Projection closes the input polynomials under all coefficients,
discriminants and pairwise resultants, level by level.  Lifting enumerates
every cell of every cylinder (one sample per section and per sector) and
applies the quantifiers directly.  A polynomial vanishing identically over a
sample makes the decomposition untrustworthy, so the answer is UNKNOWN.
"""
from __future__ import annotations

import functools
import random
from typing import Sequence

from .engine import SolverResult
from .formula import (
    Exists,
    Forall,
    Formula,
    Problem,
    Quantifier,
    Relation,
    conj,
    constraint,
    disj,
    evaluate,
    neg,
    polynomials,
)
from .poly import Polynomial, discriminant, refine_basis, resultant
from .ralg import NEG_INF, NULLIFIED, POS_INF, RealAlgebraicNumber, compare, isolate_roots_at, pick_value_in

__all__ = ["cad_decide", "full_projection", "random_polynomial", "random_sentence", "random_qe_formula"]


class _Undecidable(Exception):
    pass


def full_projection(polys: Sequence[Polynomial], n: int) -> dict[int, list[Polynomial]]:
    """Projection factors grouped by level ``1..n``."""
    current = set(refine_basis(polys))
    for i in range(n, 1, -1):
        top = sorted((p for p in current if p.level == i), key=str)
        new = []
        for p in top:
            new.extend(c for c in p.coefficients(i) if not c.is_constant())
            if p.degree(i) >= 2:
                new.append(discriminant(p, i))
        for a in range(len(top)):
            for b in range(a + 1, len(top)):
                new.append(resultant(top[a], top[b], i))
        current |= refine_basis(new)
    levels: dict[int, list[Polynomial]] = {i: [] for i in range(1, n + 1)}
    for p in sorted(current, key=str):
        levels[p.level].append(p)
    return levels


def _samples(polys: Sequence[Polynomial], s: tuple) -> list[RealAlgebraicNumber]:
    roots: list[RealAlgebraicNumber] = []
    for p in polys:
        rs = isolate_roots_at(p, s)
        if rs is NULLIFIED:
            raise _Undecidable(p)
        roots.extend(rs)
    roots.sort(key=functools.cmp_to_key(compare))
    uniq: list[RealAlgebraicNumber] = []
    for r in roots:
        if not uniq or compare(uniq[-1], r) != 0:
            uniq.append(r)
    bounds = [NEG_INF, *uniq, POS_INF]
    out = []
    for lo, hi in zip(bounds, bounds[1:]):
        out.append(pick_value_in(lo, hi))
        if hi is not POS_INF:
            out.append(hi)
    return out


def cad_decide(problem: Problem) -> SolverResult:
    """Decide a sentence by exhaustive lifting over a full projection."""
    if problem.num_params:
        raise ValueError("the oracle decides sentences only")
    n = problem.num_vars
    if n == 0:
        return SolverResult.SAT if evaluate(problem.matrix, ()) else SolverResult.UNSAT
    levels = full_projection(polynomials(problem.matrix), n)

    def lift(s: tuple) -> bool:
        i = len(s) + 1
        if i > n:
            return evaluate(problem.matrix, s)
        vals = (lift(s + (v,)) for v in _samples(levels[i], s))
        return any(vals) if problem.quantifier(i) is Quantifier.EXISTS else all(vals)

    try:
        return SolverResult.SAT if lift(()) else SolverResult.UNSAT
    except _Undecidable:
        return SolverResult.UNKNOWN


# ---------------------------------------------------------------------------
# random instances

_RELATIONS = tuple(Relation)


def random_polynomial(rng: random.Random, nvars: int, degree: int = 2, coeff: int = 5,
                      max_terms: int = 3) -> Polynomial:
    """Nonconstant polynomial with up to ``max_terms`` monomials of total degree at most ``degree``."""
    monos = [e for e in _exponents(nvars, degree)]
    while True:
        p = Polynomial.zero()
        for e in rng.sample(monos, rng.randint(1, min(max_terms, len(monos)))):
            c = rng.choice([c for c in range(-coeff, coeff + 1) if c])
            p = p + Polynomial({e: c})
        if not p.is_constant():
            return p


@functools.lru_cache(maxsize=None)
def _exponents(nvars: int, degree: int) -> tuple:
    out = [()]
    for _ in range(nvars):
        out = [e + (d,) for e in out for d in range(degree + 1)]
    return tuple(e for e in out if sum(e) <= degree)


def _random_matrix(rng: random.Random, nvars: int, natoms: int, degree: int, coeff: int) -> Formula:
    parts = [constraint(random_polynomial(rng, nvars, degree, coeff), rng.choice(_RELATIONS))
             for _ in range(natoms)]
    while len(parts) > 1:
        a = parts.pop(rng.randrange(len(parts)))
        b = parts.pop(rng.randrange(len(parts)))
        f = conj(a, b) if rng.random() < 0.5 else disj(a, b)
        if rng.random() < 0.15:
            f = neg(f)
        parts.append(f)
    return parts[0]


def random_sentence(rng: random.Random, max_vars: int = 3, max_atoms: int = 4, degree: int = 2,
                    coeff: int = 5) -> Formula:
    """Prenex sentence with random quantifiers over ``x1..xn``."""
    n = rng.randint(1, max_vars)
    f = _random_matrix(rng, n, rng.randint(1, max_atoms), degree, coeff)
    for v in range(n, 0, -1):
        f = Exists(v, f) if rng.random() < 0.5 else Forall(v, f)
    return f


def random_qe_formula(rng: random.Random, max_bound: int = 2, max_atoms: int = 3, degree: int = 2,
                      coeff: int = 5) -> Formula:
    """Formula with free parameter ``x1`` and up to ``max_bound`` quantified variables."""
    m = rng.randint(1, max_bound)
    f = _random_matrix(rng, m + 1, rng.randint(1, max_atoms), degree, coeff)
    for v in range(m + 1, 1, -1):
        f = Exists(v, f) if rng.random() < 0.5 else Forall(v, f)
    return f

