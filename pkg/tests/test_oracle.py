import random

from calcqe.engine import SolverResult
from calcqe.formula import Exists, Forall, conj, constraint, polynomials, prepare, to_prenex
from calcqe.oracle import cad_decide, full_projection, random_polynomial, random_qe_formula, random_sentence
from calcqe.poly import Polynomial, discriminant

x1, x2 = Polynomial.var(1), Polynomial.var(2)
C = Polynomial.const
SAT, UNSAT = SolverResult.SAT, SolverResult.UNSAT


def test_oracle_small_sentences():
    assert cad_decide(prepare(Exists(1, constraint(x1 * x1, "<")))) is UNSAT
    assert cad_decide(prepare(Forall(1, Exists(2, constraint(x2 * x2 - x1, "="))))) is UNSAT
    assert cad_decide(prepare(Forall(1, Exists(2, constraint(x2 * x2 * x2 - x1, "="))))) is SAT
    tangent = conj(constraint(x1 * x1 + x2 * x2 - C(1), "="), constraint(x2 - C(1), ">="))
    assert cad_decide(prepare(Exists(1, Exists(2, tangent)))) is SAT


def test_projection_contains_the_discriminant():
    levels = full_projection([x1 * x1 + x2 * x2 - C(1)], 2)
    assert levels[2] == [x1 * x1 + x2 * x2 - C(1)]
    d = discriminant(x1 * x1 + x2 * x2 - C(1), 2)
    # the level-one basis is the square-free part of 4 - 4 x1^2 up to units
    assert [str(p) for p in levels[1]] == ["x1^2 - 1"]
    assert d.substitute({1: 1}).is_zero() and d.substitute({1: -1}).is_zero()


def test_random_generators_respect_their_bounds():
    rng = random.Random(2)
    for _ in range(300):
        p = random_polynomial(rng, 3)
        assert not p.is_constant() and p.total_degree() <= 2 and p.level <= 3
        assert all(-5 <= c <= 5 for c in p.terms.values())
        f = random_sentence(rng)
        assert len(polynomials(prepare(f).matrix)) <= 4
        prefix, m = to_prenex(random_qe_formula(rng))
        assert 1 <= len(prefix) <= 2 and {v for _, v in prefix} == set(range(2, len(prefix) + 2))
        assert polynomials(m) and max(p.level for p in polynomials(m)) <= len(prefix) + 1
