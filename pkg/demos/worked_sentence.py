"""Deciding a universal/existential sentence and watching the coverings form.

For every x1 we ask whether some x2 lies above one parabola, below another,
and outside a disk of radius 1 around (2, 2).  The answer is no: near x1 = 4
the two parabolas pinch the strip shut.  Run with ``python demos/worked_sentence.py``.
"""
from gmpy2 import mpq

from calcqe import Engine, EngineConfig, Polynomial, constraint, prepare
from calcqe.formula import Exists, Forall, conj

x1, x2 = Polynomial.var(1), Polynomial.var(2)
C = Polynomial.const

above = constraint(x2 - C(mpq(7, 2)) + C(2) * (x1 - C(4)) ** 2, ">")
outside = constraint((x1 - C(2)) ** 2 + (x2 - C(2)) ** 2 - C(1), ">")
below = constraint(x2 - C(3) - C(mpq(1, 4)) * (x1 - C(4)) ** 2, "<")
problem = prepare(Forall(1, Exists(2, conj(above, outside, below))), {1: "x1", 2: "x2"})

engine = Engine(problem, EngineConfig(record_trace=True))
result = engine.check()
print("verdict:", result.result.value)
print()

# every sample, every cell found around it, and the coverings that close a level
for kind, sample, *rest in engine.trace:
    point = "(" + ", ".join(str(v) for v in sample) + ")"
    if kind == "sample":
        print(f"try {point}")
    elif kind in ("enclosing", "characterized", "covering"):
        truth, cell = rest[0], rest[-1]
        where = cell.interval if cell.interval is not None else "everything"
        print(f"  {kind:<13} at {point}: {truth} on {where}")

print()
print("counters:", ", ".join(result.stats.lines()))
