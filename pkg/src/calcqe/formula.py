"""First-order formulas over polynomial constraints.

Constraints are stored canonically: the polynomial is primitive with a
positive leading coefficient and the relation is one of ``<``, ``=``, ``>``.
The remaining relations are negations (``p >= 0`` is ``not (p < 0)``), so a
constraint and its negation share one atom.  Formulas built through the
helpers :func:`constraint`, :func:`conj`, :func:`disj` and :func:`neg` fold
constants and flatten nested connectives.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .poly import Polynomial, Sign
from .ralg import NULLIFIED, RealAlgebraicNumber, compare, isolate_roots_at, sign_at

__all__ = [
    "Relation",
    "Quantifier",
    "Truth",
    "Formula",
    "Const",
    "TRUE",
    "FALSE",
    "Atom",
    "RootAtom",
    "Not",
    "And",
    "Or",
    "Quantified",
    "Exists",
    "Forall",
    "implies",
    "iff",
    "xor",
    "polynomials",
    "rename",
    "substitute",
    "size",
    "constraint",
    "conj",
    "disj",
    "neg",
    "to_nnf",
    "to_prenex",
    "evaluate_partial",
    "evaluate",
    "atoms",
    "free_variables",
    "variable_order",
    "Problem",
    "prepare",
    "NullifiedError",
]


class NullifiedError(Exception):
    """A polynomial vanished identically over a sample prefix."""

    def __init__(self, poly: Polynomial, sample: tuple):
        self.poly = poly
        self.sample = tuple(sample)
        super().__init__(self.describe())

    def describe(self, names: Mapping[int, str] | None = None) -> str:
        point = ", ".join(str(v) for v in self.sample)
        return f"{self.poly.to_string(names)} is nullified over ({point})"


class Relation(enum.Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    NE = "!="
    GE = ">="
    GT = ">"

    def holds(self, sign: int) -> bool:
        return _HOLDS[self](sign)

    def negate(self) -> "Relation":
        return _NEGATE[self]

    def mirror(self) -> "Relation":
        """Relation for the same constraint after multiplying by -1."""
        return _MIRROR[self]


_HOLDS = {
    Relation.LT: lambda s: s < 0,
    Relation.LE: lambda s: s <= 0,
    Relation.EQ: lambda s: s == 0,
    Relation.NE: lambda s: s != 0,
    Relation.GE: lambda s: s >= 0,
    Relation.GT: lambda s: s > 0,
}
_NEGATE = {
    Relation.LT: Relation.GE,
    Relation.LE: Relation.GT,
    Relation.EQ: Relation.NE,
    Relation.NE: Relation.EQ,
    Relation.GE: Relation.LT,
    Relation.GT: Relation.LE,
}
_MIRROR = {
    Relation.LT: Relation.GT,
    Relation.LE: Relation.GE,
    Relation.EQ: Relation.EQ,
    Relation.NE: Relation.NE,
    Relation.GE: Relation.LE,
    Relation.GT: Relation.LT,
}


class Quantifier(enum.Enum):
    EXISTS = "exists"
    FORALL = "forall"

    def dual(self) -> "Quantifier":
        return Quantifier.FORALL if self is Quantifier.EXISTS else Quantifier.EXISTS


class Truth(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNDEF = "Undef"

    @classmethod
    def of(cls, b: bool) -> "Truth":
        return cls.TRUE if b else cls.FALSE


class Formula:
    """Base class of formula nodes."""

    __slots__ = ()

    def to_string(self, names: Mapping[int, str] | None = None) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.to_string()

    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return neg(self)


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool

    def to_string(self, names=None) -> str:
        return "True" if self.value else "False"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    """``poly rel 0`` with a normalized polynomial and ``rel`` in ``<, =, >``."""

    poly: Polynomial
    rel: Relation

    @property
    def level(self) -> int:
        return self.poly.level

    def to_string(self, names=None) -> str:
        return f"{self.poly.to_string(names)} {self.rel.value} 0"


@dataclass(frozen=True, eq=True)
class RootAtom(Formula):
    """``x_var rel root(poly, index)``, the index-th real root of poly in ``x_var``."""

    var: int
    rel: Relation
    poly: Polynomial
    index: int

    @property
    def level(self) -> int:
        return self.var

    def to_string(self, names=None) -> str:
        x = (names or {}).get(self.var, f"x{self.var}")
        root = f"root({self.poly.to_string(names)}, {self.index})"
        if self.rel in (Relation.GT, Relation.GE):
            return f"{root} {self.rel.mirror().value} {x}"
        return f"{x} {self.rel.value} {root}"


@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula

    def to_string(self, names=None) -> str:
        a = self.arg
        if isinstance(a, Atom):
            return f"{a.poly.to_string(names)} {a.rel.negate().value} 0"
        return f"!({a.to_string(names)})"


@dataclass(frozen=True, eq=True)
class And(Formula):
    args: tuple

    def to_string(self, names=None) -> str:
        return "(" + " & ".join(a.to_string(names) for a in self.args) + ")"


@dataclass(frozen=True, eq=True)
class Or(Formula):
    args: tuple

    def to_string(self, names=None) -> str:
        return "(" + " | ".join(a.to_string(names) for a in self.args) + ")"


@dataclass(frozen=True, eq=True)
class Quantified(Formula):
    quantifier: Quantifier
    var: int
    body: Formula

    def to_string(self, names=None) -> str:
        x = (names or {}).get(self.var, f"x{self.var}")
        return f"{self.quantifier.value} {x}. {self.body.to_string(names)}"


def Exists(var: int, body: Formula) -> Quantified:
    return Quantified(Quantifier.EXISTS, var, body)


def Forall(var: int, body: Formula) -> Quantified:
    return Quantified(Quantifier.FORALL, var, body)


# ---------------------------------------------------------------------------
# smart constructors

_CANONICAL = {
    Relation.LT: (Relation.LT, False),
    Relation.EQ: (Relation.EQ, False),
    Relation.GT: (Relation.GT, False),
    Relation.GE: (Relation.LT, True),
    Relation.NE: (Relation.EQ, True),
    Relation.LE: (Relation.GT, True),
}


def constraint(poly: Polynomial, rel: Relation | str) -> Formula:
    """The constraint ``poly rel 0`` in canonical form (constants fold)."""
    rel = Relation(rel) if not isinstance(rel, Relation) else rel
    if poly.is_constant():
        return Const(rel.holds(Sign.of(poly.constant_value())))
    sign, q = poly.sign_normalized()
    if sign < 0:
        rel = rel.mirror()
    base, negated = _CANONICAL[rel]
    a = Atom(q, base)
    return Not(a) if negated else a


def neg(f: Formula) -> Formula:
    if isinstance(f, Const):
        return Const(not f.value)
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def _flatten(kind, args: Iterable[Formula]) -> list[Formula]:
    out: list[Formula] = []
    seen = set()
    for a in args:
        parts = a.args if isinstance(a, kind) else (a,)
        for p in parts:
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def conj(*args: Formula) -> Formula:
    if len(args) == 1 and not isinstance(args[0], Formula):
        args = tuple(args[0])
    parts = [a for a in _flatten(And, args) if a != TRUE]
    if FALSE in parts:
        return FALSE
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def disj(*args: Formula) -> Formula:
    if len(args) == 1 and not isinstance(args[0], Formula):
        args = tuple(args[0])
    parts = [a for a in _flatten(Or, args) if a != FALSE]
    if TRUE in parts:
        return TRUE
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(tuple(parts))


def implies(a: Formula, b: Formula) -> Formula:
    return disj(neg(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(disj(neg(a), b), disj(a, neg(b)))


def xor(a: Formula, b: Formula) -> Formula:
    return conj(disj(a, b), disj(neg(a), neg(b)))


# ---------------------------------------------------------------------------
# traversal


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from subformulas(a)
    elif isinstance(f, Quantified):
        yield from subformulas(f.body)


def atoms(f: Formula) -> list[Formula]:
    """Distinct atoms (constraints and root atoms) in first-occurrence order."""
    out: dict[Formula, None] = {}
    for g in subformulas(f):
        if isinstance(g, (Atom, RootAtom)):
            out.setdefault(g, None)
    return list(out)


def polynomials(f: Formula) -> list[Polynomial]:
    return list(dict.fromkeys(a.poly for a in atoms(f)))


def free_variables(f: Formula) -> set[int]:
    if isinstance(f, Atom):
        return f.poly.variables()
    if isinstance(f, RootAtom):
        return f.poly.variables() | {f.var}
    if isinstance(f, Not):
        return free_variables(f.arg)
    if isinstance(f, (And, Or)):
        out: set[int] = set()
        for a in f.args:
            out |= free_variables(a)
        return out
    if isinstance(f, Quantified):
        return free_variables(f.body) - {f.var}
    return set()


def max_level(f: Formula) -> int:
    return max((a.level for a in atoms(f)), default=0)


def rename(f: Formula, mapping: Mapping[int, int]) -> Formula:
    """Rename variables (polynomials are re-normalized)."""
    if isinstance(f, Const):
        return f
    if isinstance(f, Atom):
        return constraint(f.poly.rename(mapping), f.rel)
    if isinstance(f, RootAtom):
        p = f.poly.rename(mapping)
        return RootAtom(mapping.get(f.var, f.var), f.rel, p.normalized(), f.index)
    if isinstance(f, Not):
        return neg(rename(f.arg, mapping))
    if isinstance(f, And):
        return conj(*(rename(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return disj(*(rename(a, mapping) for a in f.args))
    if isinstance(f, Quantified):
        return Quantified(f.quantifier, mapping.get(f.var, f.var), rename(f.body, mapping))
    raise TypeError(f)


def substitute(f: Formula, values: Mapping[int, object]) -> Formula:
    """Substitute rational values for free variables of a quantifier-free formula."""
    if isinstance(f, Const):
        return f
    if isinstance(f, Atom):
        return constraint(f.poly.substitute(values), f.rel)
    if isinstance(f, Not):
        return neg(substitute(f.arg, values))
    if isinstance(f, And):
        return conj(*(substitute(a, values) for a in f.args))
    if isinstance(f, Or):
        return disj(*(substitute(a, values) for a in f.args))
    if isinstance(f, Quantified):
        inner = {k: v for k, v in values.items() if k != f.var}
        return Quantified(f.quantifier, f.var, substitute(f.body, inner))
    raise TypeError(f"cannot substitute into {type(f).__name__}")


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


# ---------------------------------------------------------------------------
# normal forms


def to_nnf(f: Formula) -> Formula:
    """Push negations down to atoms; negated root atoms flip their relation."""
    return _nnf(f, False)


def _nnf(f: Formula, negate: bool) -> Formula:
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, RootAtom):
        return RootAtom(f.var, f.rel.negate(), f.poly, f.index) if negate else f
    if isinstance(f, Not):
        return _nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = [_nnf(a, negate) for a in f.args]
        return disj(*parts) if negate else conj(*parts)
    if isinstance(f, Or):
        parts = [_nnf(a, negate) for a in f.args]
        return conj(*parts) if negate else disj(*parts)
    if isinstance(f, Quantified):
        q = f.quantifier.dual() if negate else f.quantifier
        return Quantified(q, f.var, _nnf(f.body, negate))
    raise TypeError(f)


def rename_apart(f: Formula, start: int) -> tuple[Formula, dict[int, int]]:
    """Give every binder a fresh variable index ``>= start``.

    Returns the renamed formula and a map from each fresh index to the
    original index it replaced.
    """
    origin: dict[int, int] = {}
    counter = [start]

    def go(g: Formula, env: dict[int, int]) -> Formula:
        if isinstance(g, Quantified):
            fresh = counter[0]
            counter[0] += 1
            origin[fresh] = g.var
            return Quantified(g.quantifier, fresh, go(g.body, {**env, g.var: fresh}))
        if isinstance(g, (Atom, RootAtom)):
            return rename(g, env) if env else g
        if isinstance(g, Not):
            return neg(go(g.arg, env))
        if isinstance(g, And):
            return conj(*(go(a, env) for a in g.args))
        if isinstance(g, Or):
            return disj(*(go(a, env) for a in g.args))
        return g

    return go(f, {}), origin


def to_prenex(f: Formula) -> tuple[list[tuple[Quantifier, int]], Formula]:
    """Prenex form of an NNF formula whose binders are already renamed apart."""
    if isinstance(f, Quantified):
        prefix, matrix = to_prenex(f.body)
        return [(f.quantifier, f.var)] + prefix, matrix
    if isinstance(f, (And, Or)):
        prefix: list[tuple[Quantifier, int]] = []
        parts = []
        for a in f.args:
            p, m = to_prenex(a)
            prefix.extend(p)
            parts.append(m)
        return prefix, (conj(*parts) if isinstance(f, And) else disj(*parts))
    return [], f


# ---------------------------------------------------------------------------
# evaluation


def _root_atom_truth(a: RootAtom, point: Sequence[RealAlgebraicNumber]) -> bool:
    roots = isolate_roots_at(a.poly, point[: a.var - 1])
    if roots is NULLIFIED:
        raise NullifiedError(a.poly, point[: a.var - 1])
    if a.index > len(roots):
        return False
    return a.rel.holds(compare(point[a.var - 1], roots[a.index - 1]))


def atom_truth(a: Formula, point: Sequence[RealAlgebraicNumber]) -> Truth:
    if a.level > len(point):
        return Truth.UNDEF
    if isinstance(a, Atom):
        return Truth.of(a.rel.holds(sign_at(a.poly, point)))
    return Truth.of(_root_atom_truth(a, point))


def evaluate_partial(f: Formula, point: Sequence[RealAlgebraicNumber], cache: dict | None = None) -> Truth:
    """Kleene evaluation deciding every atom of level at most ``len(point)``."""
    if cache is None:
        cache = {}
    if isinstance(f, Const):
        return Truth.of(f.value)
    if isinstance(f, (Atom, RootAtom)):
        hit = cache.get(f)
        if hit is None:
            hit = cache[f] = atom_truth(f, point)
        return hit
    if isinstance(f, Not):
        v = evaluate_partial(f.arg, point, cache)
        return v if v is Truth.UNDEF else Truth.of(v is Truth.FALSE)
    if isinstance(f, And):
        res = Truth.TRUE
        for a in f.args:
            v = evaluate_partial(a, point, cache)
            if v is Truth.FALSE:
                return v
            if v is Truth.UNDEF:
                res = v
        return res
    if isinstance(f, Or):
        res = Truth.FALSE
        for a in f.args:
            v = evaluate_partial(a, point, cache)
            if v is Truth.TRUE:
                return v
            if v is Truth.UNDEF:
                res = v
        return res
    raise TypeError(f"cannot evaluate {type(f).__name__}")


def evaluate(f: Formula, point: Sequence) -> bool:
    """Two-valued evaluation at a point assigning every free variable."""
    pt = [v if isinstance(v, RealAlgebraicNumber) else RealAlgebraicNumber(v) for v in point]
    v = evaluate_partial(f, pt)
    if v is Truth.UNDEF:
        raise ValueError("point does not assign every variable")
    return v is Truth.TRUE


# ---------------------------------------------------------------------------
# variable ordering and problem preparation


def _features(v: int, polys: list[Polynomial]) -> tuple:
    # degree in v, then largest total degree of a term containing v, then number of such terms
    deg = max((p.degree(v) for p in polys), default=0)
    tdeg = 0
    count = 0
    for p in polys:
        for e in p.terms:
            if len(e) >= v and e[v - 1]:
                tdeg = max(tdeg, sum(e))
                count += 1
    return (deg, tdeg, count)


def _order_block(block: list[int], placed: list[int], polys: list[Polynomial], heuristic: str) -> list[int]:
    if len(block) <= 1:
        return list(block)
    if heuristic in ("max-univariate", "univariate"):
        chosen = set(placed)
        rest = list(block)
        out = []
        while rest:
            def score(v: int) -> int:
                return sum(1 for p in polys if v in p.variables() and p.variables() - chosen == {v})

            # ties go to the variable with the larger degree features, leaving simpler ones for the end
            best = max(rest, key=lambda v: (score(v), _features(v, polys), -rest.index(v)))
            out.append(best)
            chosen.add(best)
            rest.remove(best)
        return out
    if heuristic in ("features", "feature-based"):
        return sorted(block, key=lambda v: (_features(v, polys), block.index(v)))
    raise ValueError(f"unknown variable ordering heuristic {heuristic!r}")


def variable_order(prefix: Sequence[tuple[Quantifier, int]], params: Sequence[int], matrix: Formula,
                   heuristic: str = "max-univariate") -> list[int]:
    """Order parameters first, then each quantifier block, reordering inside blocks."""
    polys = polynomials(matrix)
    blocks: list[list[int]] = [list(params)]
    last = None
    for q, v in prefix:
        if q is not last:
            blocks.append([])
            last = q
        blocks[-1].append(v)
    order: list[int] = []
    for b in blocks:
        order.extend(_order_block(b, order, polys, heuristic))
    return order


@dataclass(frozen=True)
class Problem:
    """A prenex problem over variables ``x1..xn``.

    Variables ``x1..x_num_params`` are free parameters; ``quantifiers[j]``
    binds ``x_{num_params + j + 1}``.
    """

    quantifiers: tuple
    matrix: Formula
    num_params: int = 0
    names: tuple = field(default=())

    @property
    def num_vars(self) -> int:
        return self.num_params + len(self.quantifiers)

    def quantifier(self, k: int) -> Quantifier | None:
        if k <= self.num_params:
            return None
        return self.quantifiers[k - self.num_params - 1]

    def name_map(self) -> dict[int, str]:
        return {i + 1: n for i, n in enumerate(self.names)}

    def to_formula(self) -> Formula:
        f = self.matrix
        for j in range(len(self.quantifiers) - 1, -1, -1):
            f = Quantified(self.quantifiers[j], self.num_params + j + 1, f)
        return f

    def instantiate(self, values: Sequence) -> "Problem":
        """Fix the parameters to rational values and renumber the bound variables."""
        k = self.num_params
        m = substitute(self.matrix, {i + 1: v for i, v in enumerate(values[:k])})
        m = rename(m, {k + j: j for j in range(1, len(self.quantifiers) + 1)})
        return Problem(self.quantifiers, m, 0, tuple(self.names[k:]))


def prepare(f: Formula, names: Mapping[int, str] | None = None, heuristic: str = "max-univariate") -> Problem:
    """Normalize, prenex and reorder a formula into a :class:`Problem`."""
    names = dict(names or {})
    nnf = to_nnf(f)
    free = sorted(free_variables(nnf))
    top = max([0, *free, *(g.var for g in subformulas(nnf) if isinstance(g, Quantified)),
               *(v for a in atoms(nnf) for v in free_variables(a))])
    renamed, origin = rename_apart(nnf, top + 1)
    prefix, matrix = to_prenex(renamed)
    used = free_variables(matrix)
    prefix = [(q, v) for q, v in prefix if v in used]
    order = variable_order(prefix, free, matrix, heuristic)
    mapping = {old: new for new, old in enumerate(order, start=1)}
    new_matrix = rename(matrix, mapping)
    quants = {v: q for q, v in prefix}
    new_names = []
    taken: set[str] = set()
    for old in order:
        base = names.get(origin.get(old, old), f"x{origin.get(old, old)}")
        nm = base
        i = 1
        while nm in taken:
            i += 1
            nm = f"{base}_{i}"
        taken.add(nm)
        new_names.append(nm)
    return Problem(
        quantifiers=tuple(quants[v] for v in order[len(free):]),
        matrix=new_matrix,
        num_params=len(free),
        names=tuple(new_names),
    )
