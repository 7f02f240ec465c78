"""Sampling check that a quantifier-free formula is equivalent to a QE input.

Parameter points are drawn at several magnitudes and, for half the trials,
right next to (or on) real roots of the output formula's polynomials, where
a wrong answer is most likely to show.  At every point the output formula is
evaluated directly and the instantiated input sentence is decided with the
truth checker.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .engine import EngineConfig, SolverResult, check_truth
from .formula import Atom, Formula, NullifiedError, Problem, RootAtom, atoms, evaluate
from .ralg import NULLIFIED, RealAlgebraicNumber, isolate_roots_at

__all__ = ["VerifyReport", "verify_qe", "random_rational"]

_OFFSETS = (mpq(1, 10), mpq(1, 1000), mpq(1, 10**6))


@dataclass
class VerifyReport:
    trials: int
    checked: int = 0
    skipped: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        head = "pass" if self.passed else "FAIL"
        text = f"{head}: {self.checked} checked, {len(self.skipped)} skipped, {len(self.failures)} failed"
        if self.failures:
            point, expected, got = self.failures[0]
            text += f"; first witness {[str(v) for v in point]} input={expected} output={got}"
        return text


def random_rational(rng: random.Random) -> mpq:
    """A rational of mixed magnitude: small integers, fractions, tiny and large values."""
    kind = rng.randrange(4)
    if kind == 0:
        return mpq(rng.randint(-10, 10))
    if kind == 1:
        d = rng.randint(1, 16)
        return mpq(rng.randint(-10 * d, 10 * d), d)
    if kind == 2:
        d = rng.randint(1, 1000)
        return mpq(rng.randint(-d, d), d)
    return mpq(rng.choice((-1, 1)) * rng.randint(100, 10**4), rng.randint(1, 7))


def _near(rng: random.Random, r: RealAlgebraicNumber) -> mpq:
    delta = rng.choice(_OFFSETS)
    if r.is_rational():
        return r.rational + rng.choice((-delta, mpq(0), delta))
    r.refine_to(delta)
    lo, hi = r.interval()
    return rng.choice((lo, hi))


def _boundary_point(rng: random.Random, k: int, polys: Sequence) -> list[mpq]:
    point = [random_rational(rng) for _ in range(k)]
    if not polys:
        return point
    p = rng.choice(polys)
    j = p.level
    prefix = tuple(RealAlgebraicNumber(v) for v in point[: j - 1])
    roots = isolate_roots_at(p, prefix)
    if roots is not NULLIFIED and roots:
        point[j - 1] = _near(rng, rng.choice(roots))
    return point


def verify_qe(problem: Problem, output: Formula, trials: int = 1000, seed: int = 0,
              config: EngineConfig | None = None) -> VerifyReport:
    """Compare ``output`` with the QE input ``problem`` at ``trials`` parameter points."""
    k = problem.num_params
    if k == 0:
        report = VerifyReport(1)
        r = check_truth(problem, config)
        if r.result is SolverResult.UNKNOWN:
            report.skipped.append(((), r.reason))
            return report
        expected = r.result is SolverResult.SAT
        got = evaluate(output, ())
        report.checked = 1
        if expected != got:
            report.failures.append(((), expected, got))
        return report
    rng = random.Random(seed)
    polys = sorted({a.poly for a in atoms(output) if isinstance(a, (Atom, RootAtom)) and 0 < a.poly.level <= k},
                   key=str)
    report = VerifyReport(trials)
    for t in range(trials):
        if t % 2:
            point = _boundary_point(rng, k, polys)
        else:
            point = [random_rational(rng) for _ in range(k)]
        try:
            got = evaluate(output, point)
        except NullifiedError as e:
            report.skipped.append((tuple(point), e))
            continue
        r = check_truth(problem.instantiate(point), config)
        if r.result is SolverResult.UNKNOWN:
            report.skipped.append((tuple(point), r.reason))
            continue
        report.checked += 1
        expected = r.result is SolverResult.SAT
        if expected != got:
            report.failures.append((tuple(point), expected, got))
    return report
