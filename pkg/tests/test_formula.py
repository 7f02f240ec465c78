import random

from hypothesis import given, settings
from hypothesis import strategies as st

from calcqe.engine import SolverResult, check_truth
from calcqe.formula import (
    And,
    Atom,
    Const,
    Exists,
    Forall,
    Not,
    Or,
    Quantified,
    Quantifier,
    Truth,
    conj,
    constraint,
    disj,
    evaluate,
    evaluate_partial,
    implies,
    neg,
    prepare,
    subformulas,
    to_nnf,
    to_prenex,
    variable_order,
    xor,
)
from calcqe.oracle import random_sentence
from calcqe.poly import Polynomial
from calcqe.ralg import RealAlgebraicNumber

from strategies import rationals

R = RealAlgebraicNumber
x1, x2, x3 = (Polynomial.var(k) for k in (1, 2, 3))
C = Polynomial.const


def _nnf_shape_ok(f) -> bool:
    return all(isinstance(g.arg, Atom) for g in subformulas(f) if isinstance(g, Not))


def test_constant_constraints_fold():
    assert constraint(C(3), ">") == Const(True)
    assert constraint(C(0), "<") == Const(False)


def test_nnf_examples():
    a, b = constraint(x1, "<"), constraint(x2, ">")
    f = to_nnf(neg(conj(a, b)))
    assert isinstance(f, Or) and _nnf_shape_ok(f)
    assert to_nnf(Not(Not(a))) == a
    g = to_nnf(Not(Forall(1, constraint(x1, ">"))))
    assert isinstance(g, Quantified) and g.quantifier is Quantifier.EXISTS
    assert g.body == Not(constraint(x1, ">"))


def test_prenex_examples():
    body = constraint(x2 - x1, ">")
    prefix, m = to_prenex(Forall(1, Exists(2, body)))
    assert prefix == [(Quantifier.FORALL, 1), (Quantifier.EXISTS, 2)] and m == body
    # (exists y. y > x) and x > 0, with x a parameter ordered first
    p = prepare(conj(Exists(2, body), constraint(x1, ">")))
    assert p.num_params == 1 and p.quantifiers == (Quantifier.EXISTS,)
    assert p.matrix == conj(body, constraint(x1, ">"))
    q = prepare(neg(Exists(2, constraint(x2 * x2 - x1, "="))))
    assert q.quantifiers == (Quantifier.FORALL,)
    assert q.matrix == Not(constraint(x2 * x2 - x1, "="))


def test_evaluate_partial_examples():
    assert evaluate_partial(constraint(x1 * x2 - C(1), ">"), [R(0)]) is Truth.UNDEF
    f = conj(constraint(x1, ">"), constraint(x2 - C(1), "<"))
    assert evaluate_partial(f, [R(-1)]) is Truth.FALSE
    g = disj(constraint(x1, ">"), constraint(x2 - C(1), "<"))
    assert evaluate_partial(g, [R(1)]) is Truth.TRUE
    assert evaluate_partial(f, [R(1)]) is Truth.UNDEF


def test_variable_order_examples():
    a, b = constraint(x1, "<"), constraint(x1 * x2 - C(1), ">")
    E = Quantifier.EXISTS
    # x2 is named first in the block, yet x1 is univariate in more constraints
    assert variable_order([(E, 2), (E, 1)], [], conj(a, b)) == [1, 2]
    assert variable_order([(E, 1)], [], a) == [1]
    both = [(Quantifier.FORALL, 1), (E, 2)]
    for h in ("max-univariate", "features"):
        assert variable_order(both, [], conj(a, b), h) == [1, 2]
    # a tie on univariate counts places the lower-degree variable last
    tied = constraint(C(5) * x3 * x1 + C(2) * x2, "<")
    A = Quantifier.FORALL
    assert variable_order([(A, 2), (A, 3)], [1], tied) == [1, 3, 2]


def test_boolean_connectives_fold():
    a, b = constraint(x1, ">"), constraint(x1 - C(1), "<")
    for v in (-1, 0, 1, 2):
        pt = [v]
        va, vb = evaluate(a, pt), evaluate(b, pt)
        assert evaluate(implies(a, b), pt) == ((not va) or vb)
        assert evaluate(xor(a, b), pt) == (va != vb)


# properties

atoms = st.sampled_from([
    constraint(x1 - x2, "<"),
    constraint(x1 * x1 + x2 - C(2), ">="),
    constraint(x1 * x2 - C(1), "="),
    constraint(x3 - x1, "!="),
    constraint(x2 * x2 - x3, "<="),
])


def _formulas():
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            st.builds(lambda a, b: And((a, b)), sub, sub),
            st.builds(lambda a, b: Or((a, b)), sub, sub),
            st.builds(Not, sub),
        ),
        max_leaves=6,
    )


@settings(max_examples=200, deadline=None)
@given(_formulas(), st.lists(rationals, min_size=3, max_size=3))
def test_nnf_preserves_truth(f, pt):
    g = to_nnf(f)
    assert _nnf_shape_ok(g)
    assert evaluate(f, pt) == evaluate(g, pt)


@settings(max_examples=200, deadline=None)
@given(_formulas(), st.lists(rationals, min_size=3, max_size=3), st.integers(0, 2))
def test_partial_evaluation_is_monotone_and_matches_full(f, pt, i):
    sample = [R(v) for v in pt]
    partial = evaluate_partial(f, sample[:i])
    full = evaluate(f, pt)
    assert evaluate_partial(f, sample) is Truth.of(full)
    if partial is not Truth.UNDEF:
        assert partial is Truth.of(full)


def test_prenexing_preserves_verdicts_on_random_sentences():
    rng = random.Random(11)
    seen = 0
    for _ in range(60):
        f = random_sentence(rng, max_vars=2, max_atoms=3)
        c = rng.randint(-2, 2)
        # forall x. x^2 + c >= 0 holds exactly when c >= 0
        h = Forall(1, constraint(x1 * x1 + C(c), ">="))
        use_and = rng.random() < 0.5
        g = conj(f, h) if use_and else disj(h, f)
        a = check_truth(prepare(f)).result
        b = check_truth(prepare(g)).result
        if SolverResult.UNKNOWN in (a, b):
            continue
        seen += 1
        want = (a is SolverResult.SAT) and c >= 0 if use_and else (a is SolverResult.SAT) or c >= 0
        assert (b is SolverResult.SAT) == want
    assert seen >= 50
