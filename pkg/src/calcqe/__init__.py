"""Exact decision and quantifier elimination for nonlinear real arithmetic by cylindrical coverings."""
from .engine import (
    CheckResult,
    CoveringTree,
    Engine,
    EngineConfig,
    QEResult,
    SolverResult,
    check_truth,
    eliminate_quantifiers,
    encode_tree,
    simplify_tree,
)
from .formula import Exists, Forall, Problem, Quantifier, Relation, constraint, prepare
from .poly import Polynomial
from .ralg import RealAlgebraicNumber
from .smtlib import parse, print_formula
from .verify import verify_qe

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "CoveringTree",
    "Engine",
    "EngineConfig",
    "Exists",
    "Forall",
    "Polynomial",
    "Problem",
    "QEResult",
    "Quantifier",
    "RealAlgebraicNumber",
    "Relation",
    "SolverResult",
    "check_truth",
    "constraint",
    "eliminate_quantifiers",
    "encode_tree",
    "parse",
    "prepare",
    "print_formula",
    "simplify_tree",
    "verify_qe",
]
