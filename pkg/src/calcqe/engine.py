"""Recursive covering search for quantified problems and quantifier elimination.

Truth checking samples the variables in order.  At each level it collects
cells that refute (existential) or confirm (universal) the current choice
until either a decisive cell is found or the collected cells cover the real
line; the outcome is then generalized one level down by projection.

Quantifier elimination treats the parameters like existential variables
but keeps both satisfying and unsatisfying cells, building a tree of
cylindrically arranged cells that is simplified and encoded as a formula
with indexed root atoms.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cells import (
    ImplicitCell,
    Nullified,
    bounds_formula,
    characterize_cell,
    characterize_covering,
    enclosing_cell,
    root_bounds,
)
from .formula import FALSE, TRUE, Formula, NullifiedError, Problem, Quantifier, Truth, conj, disj, evaluate, neg, to_nnf
from .implicants import decide_and_explain
from .ralg import RealAlgebraicNumber, as_value, sample_outside
from .stats import Stats

__all__ = [
    "SolverResult",
    "EngineConfig",
    "CheckResult",
    "QEResult",
    "CoveringTree",
    "Engine",
    "check_truth",
    "eliminate_quantifiers",
    "simplify_tree",
    "encode_tree",
    "sample_outside_cells",
]


class SolverResult(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass
class EngineConfig:
    """Switches for one solver run.

    ``sample_hook(prefix)`` may return a preferred value for the next
    coordinate; it is used only when the value lies outside every cell
    collected so far.
    """

    mode: str = "check"
    boolean_mode: str = "propagate"
    selection: str = "sotd"
    var_order: str = "max-univariate"
    candidate_budget: int | None = None
    seed: int = 0
    sample_hook: Callable[[tuple], object] | None = None
    record_trace: bool = False


@dataclass
class CheckResult:
    result: SolverResult
    cell: ImplicitCell | None = None
    reason: NullifiedError | None = None
    stats: Stats = field(default_factory=Stats)

    def __str__(self) -> str:
        return self.result.value


@dataclass
class CoveringTree:
    """Node of the parameter-space covering: interval bounds plus a label or children."""

    lower: tuple = ()
    upper: tuple = ()
    label: bool | None = None
    children: list = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    def interval_formula(self) -> Formula:
        return bounds_formula(self.lower, self.upper)

    def leaves(self) -> int:
        return 1 if self.is_leaf else sum(c.leaves() for c in self.children)


@dataclass
class QEResult:
    result: SolverResult
    formula: Formula | None = None
    tree: CoveringTree | None = None
    reason: NullifiedError | None = None
    stats: Stats = field(default_factory=Stats)


class _Unknown(Exception):
    def __init__(self, n: Nullified):
        self.error = NullifiedError(n.poly, n.sample)


def sample_outside_cells(cells: Sequence[ImplicitCell]) -> RealAlgebraicNumber | None:
    """A preferred value outside every cell's interval, or ``None`` if they cover R."""
    return sample_outside([c.interval for c in cells])


class Engine:
    """One solver instance for a prepared :class:`~calcqe.formula.Problem`."""

    def __init__(self, problem: Problem, config: EngineConfig | None = None):
        self.problem = problem
        self.config = config or EngineConfig()
        self.stats = Stats()
        self.trace: list[tuple] = []
        self.matrix = problem.matrix
        self.n = problem.num_vars

    # shared helpers -------------------------------------------------------

    def _note(self, *event) -> None:
        if self.config.record_trace:
            self.trace.append(event)

    def _check(self, res):
        if isinstance(res, Nullified):
            raise _Unknown(res)
        return res

    def _sample(self, s: tuple, cells: list[ImplicitCell]) -> RealAlgebraicNumber | None:
        intervals = [c.interval for c in cells]
        hook = self.config.sample_hook
        if hook is not None:
            v = hook(s)
            if v is not None:
                v = as_value(v)
                if not any(iv.contains(v) for iv in intervals):
                    return v
        v = sample_outside(intervals)
        if v is not None:
            # every round must leave the covered region
            assert not any(iv.contains(v) for iv in intervals)
        return v

    def _decide(self, s: tuple):
        e = decide_and_explain(self.matrix, s, self.config.boolean_mode, self.config.selection,
                               self.config.candidate_budget)
        if e.truth is Truth.UNDEF:
            return None, None
        self.stats.implicants_generated += e.candidates
        self.stats.implicants_used += 1
        cell = self._check(enclosing_cell(s, e.implicant))
        self._note("enclosing", s, e.truth is Truth.TRUE, cell)
        return e.truth is Truth.TRUE, cell

    # truth checking -------------------------------------------------------

    def check(self) -> CheckResult:
        if self.problem.num_params:
            raise ValueError("check requires a sentence; use eliminate() for parameters")
        if self.n == 0:
            sat = evaluate(self.matrix, ())
            return CheckResult(SolverResult.SAT if sat else SolverResult.UNSAT, None, None, self.stats)
        try:
            sat, cell = self.recurse(())
        except _Unknown as u:
            return CheckResult(SolverResult.UNKNOWN, None, u.error, self.stats)
        return CheckResult(SolverResult.SAT if sat else SolverResult.UNSAT, cell, None, self.stats)

    def recurse(self, s: tuple) -> tuple[bool, ImplicitCell]:
        i = len(s) + 1
        if i > self.n:
            raise ValueError("sample already assigns every variable")
        q = self.problem.quantifier(i)
        return self.exists_level(s) if q is Quantifier.EXISTS else self.forall_level(s)

    def exists_level(self, s: tuple) -> tuple[bool, ImplicitCell]:
        """Search the next existential variable over ``s``; True means a satisfying cell."""
        return self._level(s, True)

    def forall_level(self, s: tuple) -> tuple[bool, ImplicitCell]:
        """Search the next universal variable over ``s``; False means a refuting cell."""
        return self._level(s, False)

    def _level(self, s: tuple, existential: bool) -> tuple[bool, ImplicitCell]:
        # existential levels return on the first satisfying cell, universal on the first refuting one
        collected: list[ImplicitCell] = []
        while True:
            v = self._sample(s, collected)
            if v is None:
                break
            self.stats.samples_tried += 1
            s2 = s + (v,)
            self._note("sample", s2)
            sat, cell = self._decide(s2)
            if sat is None:
                sat, cell = self.recurse(s2)
            if sat == existential:
                out = self._check(characterize_cell(s, cell, self.stats))
                self._note("characterized", s, sat, out)
                return sat, out
            collected.append(cell)
        out = self._check(characterize_covering(s, collected, self.stats))
        self._note("covering", s, not existential, out)
        return not existential, out

    # quantifier elimination ------------------------------------------------

    def eliminate(self) -> QEResult:
        k = self.problem.num_params
        if k == 0:
            r = self.check()
            if r.result is SolverResult.UNKNOWN:
                return QEResult(r.result, None, None, r.reason, self.stats)
            truth = r.result is SolverResult.SAT
            return QEResult(r.result, TRUE if truth else FALSE, CoveringTree(label=truth), None, self.stats)
        try:
            children, _ = self._parameter(())
        except _Unknown as u:
            return QEResult(SolverResult.UNKNOWN, None, None, u.error, self.stats)
        tree = simplify_tree(CoveringTree(children=children))
        formula = encode_tree(tree)
        status = SolverResult.UNSAT if formula == FALSE else SolverResult.SAT
        return QEResult(status, formula, tree, None, self.stats)

    def _parameter(self, s: tuple) -> tuple[list[CoveringTree], ImplicitCell]:
        i = len(s) + 1
        k = self.problem.num_params
        cells: list[ImplicitCell] = []
        nodes: dict[int, CoveringTree] = {}
        while True:
            v = self._sample(s, cells)
            if v is None:
                break
            self.stats.samples_tried += 1
            s2 = s + (v,)
            self._note("sample", s2)
            label, cell = self._decide(s2)
            children: list[CoveringTree] = []
            if label is None:
                if i < k:
                    children, cell = self._parameter(s2)
                else:
                    label, cell = self.recurse(s2)
            lower, upper = root_bounds(cell)
            nodes[id(cell)] = CoveringTree(tuple(lower), tuple(upper), label, children)
            cells.append(cell)
        out = self._check(characterize_covering(s, cells, self.stats))
        self._note("covering", s, None, out)
        return [nodes[id(c)] for c in out.cover], out


# ---------------------------------------------------------------------------
# tree simplification and encoding


def simplify_tree(t: CoveringTree) -> CoveringTree:
    """Merge equally labelled neighbouring leaves and collapse single-leaf nodes."""
    if t.is_leaf:
        return t
    kids = [simplify_tree(c) for c in t.children]
    merged: list[CoveringTree] = []
    for c in kids:
        if merged and c.is_leaf and merged[-1].is_leaf and merged[-1].label == c.label:
            prev = merged[-1]
            merged[-1] = CoveringTree(prev.lower, c.upper, c.label, [])
        else:
            merged.append(c)
    if len(merged) == 1 and merged[0].is_leaf:
        return CoveringTree(t.lower, t.upper, merged[0].label, [])
    return CoveringTree(t.lower, t.upper, None, merged)


def encode_tree(t: CoveringTree, negate: bool = False) -> Formula:
    """Formula describing the satisfying part of ``t`` (the unsatisfying part if ``negate``)."""
    return _encode(t, not negate)


def _encode(t: CoveringTree, want: bool) -> Formula:
    own = t.interval_formula()
    if t.is_leaf:
        return own if t.label == want else FALSE
    hits = sum(1 for c in t.children if c.is_leaf and c.label == want)
    misses = sum(1 for c in t.children if c.is_leaf and c.label != want)
    if hits <= misses:
        parts = [c.interval_formula() if c.is_leaf else _encode(c, want)
                 for c in t.children if not c.is_leaf or c.label == want]
        inner = disj(*parts)
    else:
        parts = [c.interval_formula() if c.is_leaf else _encode(c, not want)
                 for c in t.children if not c.is_leaf or c.label != want]
        inner = to_nnf(neg(disj(*parts)))
    return conj(own, inner)


# ---------------------------------------------------------------------------
# functional entry points


def check_truth(problem: Problem, config: EngineConfig | None = None) -> CheckResult:
    """Decide a sentence: SAT if it is true, UNSAT if false, UNKNOWN on nullification."""
    return Engine(problem, config).check()


def eliminate_quantifiers(problem: Problem, config: EngineConfig | None = None) -> QEResult:
    """Quantifier-free equivalent over the parameters, with its covering tree."""
    return Engine(problem, config).eliminate()
