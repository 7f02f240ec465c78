"""Quantifier elimination on a few one-parameter formulas.

The answers come back with indexed root atoms such as ``root(x^2 - 1, 2)``,
meaning the second real root of that polynomial in its main variable.  Each
result is then checked against the input at random parameter points.
"""
from calcqe import Polynomial, constraint, eliminate_quantifiers, prepare
from calcqe.formula import Exists, Forall, disj
from calcqe.verify import verify_qe

x, y = Polynomial.var(1), Polynomial.var(2)
C = Polynomial.const

cases = {
    "some y inside the unit disk": Exists(2, constraint(x * x + y * y - C(1), "<")),
    "x has a real square root": Exists(2, constraint(y * y - x, "=")),
    "x has a reciprocal": Exists(2, constraint(x * y - C(1), "=")),
    "y^2 + x stays positive": Forall(2, constraint(y * y + x, ">")),
    "a root of y^2 + x*y + 1 exists": Exists(2, constraint(y * y + x * y + C(1), "=")),
    "every y escapes [x, x + 1]": Forall(2, disj(constraint(y - x, "<"), constraint(y - x - C(1), ">"))),
}

for label, formula in cases.items():
    problem = prepare(formula, {1: "x", 2: "y"})
    q = eliminate_quantifiers(problem)
    report = verify_qe(problem, q.formula, 300, seed=1)
    print(f"{label}:")
    print(f"    {q.formula.to_string(problem.name_map())}")
    print(f"    check: {report.summary()}")
