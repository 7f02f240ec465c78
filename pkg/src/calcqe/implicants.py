"""Implicants: small conjunctions of literals explaining a truth value at a sample.

Three ways of computing them are provided.

``eval``
    Plain recursive evaluation.  Conjunctions of false children contribute
    the union of the children's implicant sets, disjunctions the pairwise
    unions.
``propagate``
    Reason sets ``T(psi)`` and ``F(psi)`` for every subformula are saturated
    under evaluation and propagation rules, as in unit propagation.  A
    subformula with reasons for both values is a conflict, and every pair of
    reasons is an implicant.
``explore``
    Propagation plus case splits on undecided subformulas.

A literal is an :class:`~calcqe.formula.Atom` (true at the sample) or its
negation (the atom is false at the sample).  Implicants are frozensets of
literals.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .formula import And, Atom, Const, Formula, Not, Or, Relation, Truth, atom_truth, evaluate_partial
from .poly import Polynomial

__all__ = [
    "Implicant",
    "implicants_eval",
    "implicants_propagate",
    "implicants_explore",
    "select_implicant",
    "decide_and_explain",
    "literal_polys",
    "MODES",
    "METRICS",
]

Implicant = frozenset
MODES = ("eval", "propagate", "explore")
METRICS = ("size", "sotd", "rsotd", "features")
_METRIC_ALIASES = {"reverse-sotd": "rsotd", "feature-based": "features"}


def literal_polys(imp: Iterable[Formula]) -> set[Polynomial]:
    out = set()
    for lit in imp:
        a = lit.arg if isinstance(lit, Not) else lit
        out.add(a.poly)
    return out


def _literal(atom: Atom, value: bool) -> Formula:
    return atom if value else Not(atom)


# ---------------------------------------------------------------------------
# reason-set algebra


def _minimize(sets: Iterable[frozenset]) -> set[frozenset]:
    ordered = sorted(set(sets), key=len)
    kept: list[frozenset] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return set(kept)


def _cross(a: Iterable[frozenset], b: Iterable[frozenset]) -> set[frozenset]:
    return {x | y for x in a for y in b}


def _cross_all(groups: Sequence[Iterable[frozenset]]) -> set[frozenset]:
    acc: set[frozenset] = {frozenset()}
    for g in groups:
        acc = _cross(acc, g)
        if not acc:
            break
    return acc


class _ReasonSet:
    """Subsumption-reduced set of reasons, optionally capped at ``budget`` members."""

    __slots__ = ("items", "budget")

    def __init__(self, budget: int | None):
        self.items: set[frozenset] = set()
        self.budget = budget

    def add_all(self, new: Iterable[frozenset]) -> bool:
        changed = False
        for s in sorted(new, key=lambda r: (len(r), _key_of(r))):
            if any(k <= s for k in self.items):
                continue
            if self.budget is not None and len(self.items) >= self.budget:
                break
            self.items = {k for k in self.items if not s <= k}
            self.items.add(s)
            changed = True
        return changed

    def __bool__(self) -> bool:
        return bool(self.items)


def _lit_key(lit: Formula) -> tuple:
    neg = isinstance(lit, Not)
    a = lit.arg if neg else lit
    return (str(a.poly), a.rel.value, neg)


def _key_of(imp: frozenset) -> tuple:
    return tuple(sorted(_lit_key(l) for l in imp))


# ---------------------------------------------------------------------------
# evaluation only


def implicants_eval(phi: Formula, point: Sequence) -> set[frozenset]:
    """Implicants obtained by plain evaluation (empty when ``phi`` is undecided)."""
    cache: dict = {}
    v = evaluate_partial(phi, point, cache)
    if v is Truth.UNDEF:
        return set()
    return _eval_rec(phi, v is Truth.TRUE, point, cache)


def _eval_rec(f: Formula, target: bool, point, cache) -> set[frozenset]:
    # implicants proving that f evaluates to ``target``
    if isinstance(f, Const):
        return {frozenset()} if f.value == target else set()
    if isinstance(f, Atom):
        v = evaluate_partial(f, point, cache)
        if v is Truth.UNDEF or (v is Truth.TRUE) != target:
            return set()
        return {frozenset([_literal(f, target)])}
    if isinstance(f, Not):
        a = f.arg
        if isinstance(a, Atom):
            v = evaluate_partial(a, point, cache)
            if v is Truth.UNDEF or (v is Truth.TRUE) == target:
                return set()
            return {frozenset([_literal(a, not target)])}
        return _eval_rec(a, not target, point, cache)
    if isinstance(f, (And, Or)):
        children = [_eval_rec(a, target, point, cache) for a in f.args]
        # a conjunction is true by all children, false by any child
        union = isinstance(f, And) != target
        if union:
            out: set[frozenset] = set()
            for c in children:
                out |= c
            return _minimize(out)
        return _minimize(_cross_all(children))
    raise TypeError(f"unsupported formula node {type(f).__name__}")


# ---------------------------------------------------------------------------
# propagation


@dataclass
class _Node:
    kind: str  # "atom", "and", "or", "const"
    children: tuple  # of (node id, negated)
    formula: Formula
    size: int


class _Graph:
    """Subformula DAG with shared nodes; negated atoms are edges, not nodes."""

    def __init__(self, phi: Formula, clauses: Sequence[Formula]):
        self.nodes: list[_Node] = []
        self.index: dict[Formula, int] = {}
        self.root = self._ref(phi)
        self.clauses = [self._ref(c) for c in clauses]

    def _ref(self, f: Formula) -> tuple[int, bool]:
        if isinstance(f, Not):
            nid, neg = self._ref(f.arg)
            return nid, not neg
        hit = self.index.get(f)
        if hit is not None:
            return hit, False
        if isinstance(f, Atom):
            node = _Node("atom", (), f, 1)
        elif isinstance(f, Const):
            node = _Node("const", (), f, 1)
        elif isinstance(f, (And, Or)):
            kids = tuple(self._ref(a) for a in f.args)
            node = _Node("and" if isinstance(f, And) else "or", kids, f,
                         1 + sum(self.nodes[k].size for k, _ in kids))
        else:
            raise TypeError(f"unsupported formula node {type(f).__name__}")
        self.nodes.append(node)
        nid = len(self.nodes) - 1
        self.index[f] = nid
        return nid, False


def _exclusion_clauses(phi: Formula) -> list[Formula]:
    by_poly: dict[Polynomial, list[Atom]] = {}
    for a in dict.fromkeys(g for g in _walk(phi) if isinstance(g, Atom)):
        by_poly.setdefault(a.poly, []).append(a)
    out: list[Formula] = []
    for group in by_poly.values():
        for a, b in itertools.combinations(group, 2):
            out.append(Or((Not(a), Not(b))))
        rels = {a.rel for a in group}
        if rels == {Relation.LT, Relation.EQ, Relation.GT}:
            out.append(Or(tuple(sorted(group, key=lambda a: a.rel.value))))
    return out


def _walk(f: Formula):
    yield f
    if isinstance(f, Not):
        yield from _walk(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _walk(a)


class _Propagator:
    def __init__(self, graph: _Graph, point, budget: int | None, atom_values: dict):
        self.g = graph
        self.point = point
        self.budget = budget
        self.atom_values = atom_values

    def run(self, decisions: Sequence[tuple[int, bool]]):
        g = self.g
        n = len(g.nodes)
        T = [_ReasonSet(self.budget) for _ in range(n)]
        F = [_ReasonSet(self.budget) for _ in range(n)]

        def TT(ref):
            nid, neg = ref
            return F[nid] if neg else T[nid]

        def FF(ref):
            nid, neg = ref
            return T[nid] if neg else F[nid]

        empty = {frozenset()}
        for ref in decisions:
            TT(ref).add_all(empty)
        for ref in g.clauses:
            TT(ref).add_all(empty)
        for nid, node in enumerate(g.nodes):
            if node.kind == "atom":
                v = self.atom_values.get(node.formula)
                if v is None:
                    v = self.atom_values[node.formula] = atom_truth(node.formula, self.point)
                if v is Truth.TRUE:
                    T[nid].add_all({frozenset([node.formula])})
                elif v is Truth.FALSE:
                    F[nid].add_all({frozenset([Not(node.formula)])})
            elif node.kind == "const":
                (T if node.formula.value else F)[nid].add_all(empty)

        changed = True
        while changed:
            changed = False
            for nid, node in enumerate(g.nodes):
                if node.kind not in ("and", "or"):
                    continue
                kids = node.children
                if node.kind == "and":
                    # evaluate
                    changed |= T[nid].add_all(_cross_all([TT(k).items for k in kids]))
                    changed |= F[nid].add_all(set().union(*(FF(k).items for k in kids)))
                    # propagate
                    for i, k in enumerate(kids):
                        changed |= TT(k).add_all(T[nid].items)
                        others = [TT(o).items for j, o in enumerate(kids) if j != i]
                        changed |= FF(k).add_all(_cross_all([F[nid].items] + others))
                else:
                    changed |= T[nid].add_all(set().union(*(TT(k).items for k in kids)))
                    changed |= F[nid].add_all(_cross_all([FF(k).items for k in kids]))
                    for i, k in enumerate(kids):
                        changed |= FF(k).add_all(F[nid].items)
                        others = [FF(o).items for j, o in enumerate(kids) if j != i]
                        changed |= TT(k).add_all(_cross_all([T[nid].items] + others))

        result: set[frozenset] = set()
        for nid in range(n):
            if T[nid] and F[nid]:
                result |= _cross(T[nid].items, F[nid].items)
        undecided = [nid for nid in range(n) if not T[nid] and not F[nid]]
        return _minimize(result), undecided


def _setup(phi: Formula, point, budget, atom_values):
    graph = _Graph(phi, _exclusion_clauses(phi))
    return graph, _Propagator(graph, point, budget, {} if atom_values is None else atom_values)


def _decision_refs(graph: _Graph, decisions: Sequence[Formula]) -> list[tuple[int, bool]]:
    return [graph._ref(d) for d in decisions]


def implicants_propagate(phi: Formula, decisions: Sequence[Formula], point, budget: int | None = None,
                         atom_values: dict | None = None) -> set[frozenset]:
    """Implicants from the evaluate/propagate fixpoint under the given decisions."""
    graph, prop = _setup(phi, point, budget, atom_values)
    result, _ = prop.run(_decision_refs(graph, decisions))
    return result


def implicants_explore(phi: Formula, decisions: Sequence[Formula], point, budget: int | None = None,
                       atom_values: dict | None = None) -> set[frozenset]:
    """Propagation with case splits on the smallest undecided subformula."""
    graph, prop = _setup(phi, point, budget, atom_values)
    return _explore(graph, prop, _decision_refs(graph, decisions), budget)


def _explore(graph: _Graph, prop: _Propagator, decisions: list, budget) -> set[frozenset]:
    result, undecided = prop.run(decisions)
    if result:
        return result
    if not undecided:
        return set()
    # smallest undecided subformula; ties go to the leftmost (first built) node
    pick = min(undecided, key=lambda nid: (graph.nodes[nid].size, _position(graph, nid)))
    left = _explore(graph, prop, decisions + [(pick, False)], budget)
    if not left:
        return set()
    right = _explore(graph, prop, decisions + [(pick, True)], budget)
    if not right:
        return set()
    out = _minimize(_cross(left, right))
    if budget is not None:
        out = set(sorted(out, key=lambda r: (len(r), _key_of(r)))[:budget])
    return out


def _position(graph: _Graph, nid: int) -> int:
    pos = getattr(graph, "_preorder", None)
    if pos is None:
        pos = {}

        def visit(ref):
            k, _ = ref
            if k in pos:
                return
            pos[k] = len(pos)
            for c in graph.nodes[k].children:
                visit(c)

        visit(graph.root)
        for c in graph.clauses:
            visit(c)
        graph._preorder = pos
    return pos.get(nid, len(pos) + nid)


# ---------------------------------------------------------------------------
# selection


def _sotd(polys: Iterable[Polynomial]) -> int:
    return sum(p.sotd() for p in polys)


def _features(polys: Sequence[Polynomial]) -> tuple:
    if not polys:
        return (Fraction(0), Fraction(0), 0)
    per_poly = sum(Fraction(p.sotd(), p.num_terms()) for p in polys)
    terms = sum(p.num_terms() for p in polys)
    total = _sotd(polys)
    return (per_poly, Fraction(total, terms), total)


def metric_key(imp: frozenset, metric: str) -> tuple:
    metric = _METRIC_ALIASES.get(metric, metric)
    polys = sorted(literal_polys(imp), key=str)
    if metric == "size":
        return (len(imp), _key_of(imp))
    if metric == "sotd":
        return (_sotd(polys), len(imp), _key_of(imp))
    if metric == "rsotd":
        return (-_sotd(polys), len(imp), _key_of(imp))
    if metric == "features":
        return (_features(polys), len(imp), _key_of(imp))
    raise ValueError(f"unknown selection metric {metric!r}")


def select_implicant(cands: Iterable[frozenset], metric: str = "sotd") -> frozenset:
    cands = list(cands)
    if not cands:
        raise ValueError("no implicant to select from")
    return min(cands, key=lambda imp: metric_key(imp, metric))


# ---------------------------------------------------------------------------
# entry point


@dataclass
class Explanation:
    truth: Truth
    implicant: frozenset | None
    candidates: int = 0


def decide_and_explain(phi: Formula, point, mode: str = "propagate", metric: str = "sotd",
                       budget: int | None = None) -> Explanation:
    """Decide ``phi`` at ``point`` and explain the verdict with an implicant."""
    if isinstance(phi, Const):
        return Explanation(Truth.of(phi.value), frozenset(), 1)
    if mode == "eval":
        cache: dict = {}
        v = evaluate_partial(phi, point, cache)
        if v is Truth.UNDEF:
            return Explanation(v, None)
        cands = _eval_rec(phi, v is Truth.TRUE, point, cache)
        if budget is not None:
            cands = set(sorted(cands, key=lambda r: (len(r), _key_of(r)))[:budget])
        return Explanation(v, select_implicant(cands, metric), len(cands))
    if mode not in ("propagate", "explore"):
        raise ValueError(f"unknown Boolean mode {mode!r}")
    fn = implicants_propagate if mode == "propagate" else implicants_explore
    values: dict = {}
    cands = fn(phi, [phi], point, budget, values)
    if cands:
        return Explanation(Truth.FALSE, select_implicant(cands, metric), len(cands))
    cands = fn(phi, [Not(phi) if not isinstance(phi, Not) else phi.arg], point, budget, values)
    if cands:
        return Explanation(Truth.TRUE, select_implicant(cands, metric), len(cands))
    return Explanation(Truth.UNDEF, None)
