"""A small SMT-LIB2 frontend for real arithmetic with quantifiers.

Supported: ``set-logic``, ``set-option``, ``set-info``, ``declare-const`` and
nullary ``declare-fun`` of sort Real, ``assert``, ``check-sat``, the
``eliminate-quantifiers`` extension and ``exit``.  Terms are polynomials
built from ``+ - *``, numerals and exact decimals; ``(/ a b)`` is accepted
only between numeric literals.  Formulas use ``and or not => xor``,
chainable relations, ``distinct``, ``exists``/``forall`` and non-shadowing
``let``.  Quantifier-free output may contain ``(root p j x)`` terms, read as
the j-th real root of ``p`` in ``x``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from gmpy2 import mpq

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Const,
    Formula,
    Not,
    Or,
    Quantified,
    Quantifier,
    Relation,
    RootAtom,
    conj,
    constraint,
    disj,
    implies,
    neg,
    xor,
)
from .poly import Polynomial

__all__ = [
    "SmtError",
    "Command",
    "Script",
    "parse",
    "print_script",
    "print_formula",
    "print_polynomial",
]


class SmtError(Exception):
    """Parse failure with a 1-based source location."""

    def __init__(self, kind: str, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {kind} error: {message}")
        self.kind = kind
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# reader


@dataclass(frozen=True)
class _Sym:
    text: str
    line: int
    col: int
    quoted: bool = False


@dataclass(frozen=True)
class _List:
    items: tuple
    line: int
    col: int


_TOKEN = re.compile(r"""\s+|;[^\n]*|\(|\)|\|[^|]*\||"(?:[^"]|"")*"|[^\s()|;"]+""")


def _read(text: str) -> list:
    stack: list[list] = [[]]
    opens: list[tuple[int, int]] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SmtError("syntax", f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        tok = m.group()
        col = pos - line_start + 1
        if tok == "(":
            stack.append([])
            opens.append((line, col))
        elif tok == ")":
            if len(stack) == 1:
                raise SmtError("syntax", "unbalanced ')'", line, col)
            items = stack.pop()
            ln, cl = opens.pop()
            stack[-1].append(_List(tuple(items), ln, cl))
        elif not tok[0].isspace() and tok[0] != ";":
            if tok[0] == "|":
                stack[-1].append(_Sym(tok[1:-1], line, col, True))
            else:
                stack[-1].append(_Sym(tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rfind("\n") + 1
        pos = m.end()
    if len(stack) != 1:
        ln, cl = opens[-1]
        raise SmtError("syntax", "unclosed '('", ln, cl)
    return stack[0]


# ---------------------------------------------------------------------------
# script model


@dataclass(frozen=True)
class Command:
    kind: str
    formula: Formula | None = None
    args: tuple = ()


@dataclass
class Script:
    commands: list = field(default_factory=list)
    names: dict = field(default_factory=dict)
    declared: list = field(default_factory=list)

    def assertions(self) -> Formula:
        return conj(*[c.formula for c in self.commands if c.kind == "assert"])

    def queries(self) -> list[Command]:
        return [c for c in self.commands if c.kind in ("check-sat", "eliminate-quantifiers")]


_NUMERAL = re.compile(r"^(0|[1-9][0-9]*)$")
_DECIMAL = re.compile(r"^(0|[1-9][0-9]*)\.([0-9]+)$")
_RELATIONS = {"<": Relation.LT, "<=": Relation.LE, "=": Relation.EQ, ">=": Relation.GE, ">": Relation.GT}
_UNSUPPORTED = {
    "ite": "if-then-else terms",
    "div": "integer division",
    "mod": "modulo",
    "abs": "absolute value",
    "to_real": "sort conversion",
    "to_int": "sort conversion",
    "push": "push",
    "pop": "pop",
    "get-model": "get-model",
    "get-value": "get-value",
}


@dataclass(frozen=True)
class _Root:
    poly: Polynomial
    index: int
    var: int


def _number(sym: _Sym) -> mpq | None:
    if sym.quoted:
        return None
    if _NUMERAL.match(sym.text):
        return mpq(int(sym.text))
    m = _DECIMAL.match(sym.text)
    if m:
        return mpq(int(m.group(1) + m.group(2)), 10 ** len(m.group(2)))
    return None


class _Parser:
    def __init__(self):
        self.script = Script()
        self.globals: dict[str, int] = {}
        self.next_var = 1

    def fresh(self, name: str) -> int:
        v = self.next_var
        self.next_var += 1
        self.script.names[v] = name
        return v

    # commands -------------------------------------------------------------

    def command(self, e) -> None:
        if not isinstance(e, _List) or not e.items or not isinstance(e.items[0], _Sym):
            raise SmtError("syntax", "expected a command", e.line, e.col)
        head = e.items[0].text
        args = e.items[1:]
        add = self.script.commands.append
        if head == "set-logic":
            self._arity(e, 1)
            logic = self._symbol(args[0])
            if logic not in ("NRA", "QF_NRA", "LRA", "QF_LRA", "ALL"):
                raise SmtError("unsupported", f"logic {logic}", args[0].line, args[0].col)
            add(Command("set-logic", None, (logic,)))
        elif head in ("set-option", "set-info"):
            add(Command(head, None, tuple(_render_raw(a) for a in args)))
        elif head == "declare-const":
            self._arity(e, 2)
            self._declare(args[0], args[1])
        elif head == "declare-fun":
            self._arity(e, 3)
            if not isinstance(args[1], _List) or args[1].items:
                raise SmtError("unsupported", "functions with arguments", args[1].line, args[1].col)
            self._declare(args[0], args[2])
        elif head == "assert":
            self._arity(e, 1)
            add(Command("assert", self.formula(args[0], {})))
        elif head in ("check-sat", "eliminate-quantifiers", "exit"):
            self._arity(e, 0)
            add(Command(head))
        elif head in _UNSUPPORTED:
            raise SmtError("unsupported", _UNSUPPORTED[head], e.line, e.col)
        else:
            raise SmtError("unsupported", f"command {head}", e.line, e.col)

    def _arity(self, e: _List, n: int) -> None:
        if len(e.items) - 1 != n:
            raise SmtError("syntax", f"{e.items[0].text} expects {n} argument(s)", e.line, e.col)

    def _symbol(self, e) -> str:
        if not isinstance(e, _Sym):
            raise SmtError("syntax", "expected a symbol", e.line, e.col)
        return e.text

    def _sort(self, e) -> None:
        if not isinstance(e, _Sym) or e.text != "Real":
            raise SmtError("sort", f"only sort Real is supported, got {_render_raw(e)}", e.line, e.col)

    def _declare(self, name_e, sort_e) -> None:
        name = self._symbol(name_e)
        self._sort(sort_e)
        if name in self.globals:
            raise SmtError("syntax", f"{name} is already declared", name_e.line, name_e.col)
        v = self.fresh(name)
        self.globals[name] = v
        self.script.declared.append(v)
        self.script.commands.append(Command("declare-const", None, (name,)))

    # scoping --------------------------------------------------------------

    def lookup(self, sym: _Sym, scope: Mapping):
        if sym.text in scope:
            return scope[sym.text]
        if sym.text in self.globals:
            return Polynomial.var(self.globals[sym.text])
        raise SmtError("syntax", f"unknown symbol {sym.text}", sym.line, sym.col)

    def _bound(self, name: str, scope: Mapping) -> bool:
        return name in scope or name in self.globals

    # formulas -------------------------------------------------------------

    def formula(self, e, scope: Mapping) -> Formula:
        v = self.expr(e, scope)
        if not isinstance(v, Formula):
            raise SmtError("sort", "expected a Boolean formula, got a Real term", e.line, e.col)
        return v

    def term(self, e, scope: Mapping) -> Polynomial:
        v = self.expr(e, scope)
        if isinstance(v, Formula):
            raise SmtError("sort", "expected a Real term, got a Boolean formula", e.line, e.col)
        if isinstance(v, _Root):
            raise SmtError("syntax", "root terms may only be compared with their variable", e.line, e.col)
        return v

    def expr(self, e, scope: Mapping):
        if isinstance(e, _Sym):
            if not e.quoted:
                if e.text == "true":
                    return TRUE
                if e.text == "false":
                    return FALSE
                q = _number(e)
                if q is not None:
                    return Polynomial.const(q)
            return self.lookup(e, scope)
        if not e.items:
            raise SmtError("syntax", "empty expression", e.line, e.col)
        head = e.items[0]
        args = e.items[1:]
        if not isinstance(head, _Sym):
            raise SmtError("unsupported", "higher-order application", e.line, e.col)
        op = head.text
        if op in ("exists", "forall"):
            return self._quantified(e, op, scope)
        if op == "let":
            return self._let(e, scope)
        if op == "root":
            return self._root(e, scope)
        if op in _RELATIONS or op == "distinct":
            return self._relation(e, op, args, scope)
        if op in ("and", "or", "not", "=>", "xor"):
            fs = [self.formula(a, scope) for a in args]
            if op == "and":
                return conj(*fs)
            if op == "or":
                return disj(*fs)
            if op == "not":
                if len(fs) != 1:
                    raise SmtError("syntax", "not expects one argument", e.line, e.col)
                return neg(fs[0])
            if len(fs) < 2:
                raise SmtError("syntax", f"{op} expects at least two arguments", e.line, e.col)
            if op == "=>":
                out = fs[-1]
                for f in reversed(fs[:-1]):
                    out = implies(f, out)
                return out
            out = fs[0]
            for f in fs[1:]:
                out = xor(out, f)
            return out
        if op in ("+", "-", "*"):
            ts = [self.term(a, scope) for a in args]
            if not ts:
                raise SmtError("syntax", f"{op} expects arguments", e.line, e.col)
            if op == "+":
                return sum(ts[1:], ts[0])
            if op == "-":
                if len(ts) == 1:
                    return -ts[0]
                out = ts[0]
                for t in ts[1:]:
                    out = out - t
                return out
            out = ts[0]
            for t in ts[1:]:
                out = out * t
            return out
        if op == "/":
            return self._division(e, args)
        if op in _UNSUPPORTED:
            raise SmtError("unsupported", _UNSUPPORTED[op], e.line, e.col)
        raise SmtError("unsupported", f"operator {op}", head.line, head.col)

    def _division(self, e: _List, args) -> Polynomial:
        # rational constants only; division by a term is not polynomial arithmetic
        if len(args) == 2:
            a, b = (self._literal(x) for x in args)
            if a is not None and b is not None and b != 0:
                return Polynomial.const(a / b)
        raise SmtError("unsupported", "division is only allowed between numeric literals", e.line, e.col)

    def _literal(self, e) -> mpq | None:
        if isinstance(e, _Sym):
            return _number(e)
        if isinstance(e, _List) and len(e.items) == 2 and isinstance(e.items[0], _Sym) and e.items[0].text == "-":
            v = self._literal(e.items[1])
            return None if v is None else -v
        return None

    def _relation(self, e: _List, op: str, args, scope) -> Formula:
        if len(args) < 2:
            raise SmtError("syntax", f"{op} expects at least two arguments", e.line, e.col)
        vals = [self.expr(a, scope) for a in args]
        if op == "=" and all(isinstance(v, Formula) for v in vals):
            return conj(*[conj(implies(a, b), implies(b, a)) for a, b in zip(vals, vals[1:])])
        if any(isinstance(v, _Root) for v in vals):
            return self._root_relation(e, op, vals)
        for a, v in zip(args, vals):
            if isinstance(v, Formula):
                raise SmtError("sort", "expected a Real term, got a Boolean formula", a.line, a.col)
        if op == "distinct":
            return conj(*[constraint(vals[i] - vals[j], Relation.NE)
                          for i in range(len(vals)) for j in range(i + 1, len(vals))])
        rel = _RELATIONS[op]
        return conj(*[constraint(a - b, rel) for a, b in zip(vals, vals[1:])])

    def _root_relation(self, e: _List, op: str, vals) -> Formula:
        if op == "distinct" or len(vals) != 2:
            raise SmtError("syntax", "a root term must be compared with exactly one variable", e.line, e.col)
        a, b = vals
        rel = _RELATIONS[op]
        if isinstance(a, _Root):
            a, b, rel = b, a, rel.mirror()
        if isinstance(a, _Root) or not isinstance(a, Polynomial) or a != Polynomial.var(b.var):
            raise SmtError("syntax", "a root term must be compared with its own variable", e.line, e.col)
        return RootAtom(b.var, rel, b.poly, b.index)

    def _root(self, e: _List, scope) -> _Root:
        if len(e.items) != 4:
            raise SmtError("syntax", "root expects a polynomial, an index and a variable", e.line, e.col)
        _, pe, je, xe = e.items
        x = self.lookup(self._as_sym(xe), scope) if isinstance(xe, _Sym) else None
        if not isinstance(x, Polynomial) or x.num_terms() != 1 or x.total_degree() != 1:
            raise SmtError("syntax", "root expects a variable as its last argument", xe.line, xe.col)
        j = _number(je) if isinstance(je, _Sym) else None
        if j is None or j.denominator != 1 or j < 1:
            raise SmtError("syntax", "root index must be a positive numeral", je.line, je.col)
        return _Root(self.term(pe, scope), int(j), x.level)

    def _as_sym(self, e) -> _Sym:
        if not isinstance(e, _Sym):
            raise SmtError("syntax", "expected a symbol", e.line, e.col)
        return e

    def _quantified(self, e: _List, op: str, scope) -> Formula:
        if len(e.items) != 3 or not isinstance(e.items[1], _List) or not e.items[1].items:
            raise SmtError("syntax", f"{op} expects a binder list and a body", e.line, e.col)
        inner = dict(scope)
        bound = []
        for b in e.items[1].items:
            if not isinstance(b, _List) or len(b.items) != 2:
                raise SmtError("syntax", "binders have the form (name Sort)", b.line, b.col)
            name = self._symbol(b.items[0])
            self._sort(b.items[1])
            v = self.fresh(name)
            inner[name] = Polynomial.var(v)
            bound.append(v)
        body = self.formula(e.items[2], inner)
        q = Quantifier.EXISTS if op == "exists" else Quantifier.FORALL
        for v in reversed(bound):
            body = Quantified(q, v, body)
        return body

    def _let(self, e: _List, scope) -> object:
        if len(e.items) != 3 or not isinstance(e.items[1], _List):
            raise SmtError("syntax", "let expects a binding list and a body", e.line, e.col)
        inner = dict(scope)
        for b in e.items[1].items:
            if not isinstance(b, _List) or len(b.items) != 2:
                raise SmtError("syntax", "let bindings have the form (name term)", b.line, b.col)
            name = self._symbol(b.items[0])
            if self._bound(name, scope) or name in inner:
                raise SmtError("unsupported", f"let binding {name} shadows another name", b.line, b.col)
            inner[name] = self.expr(b.items[1], scope)
        return self.expr(e.items[2], inner)


def parse(text: str) -> Script:
    """Parse a script; raises :class:`SmtError` with line and column on failure."""
    p = _Parser()
    for e in _read(text):
        p.command(e)
    return p.script


# ---------------------------------------------------------------------------
# printing


def _render_raw(e) -> str:
    if isinstance(e, _Sym):
        return f"|{e.text}|" if e.quoted else e.text
    return "(" + " ".join(_render_raw(i) for i in e.items) + ")"


_SIMPLE = re.compile(r"[A-Za-z~!@$%^&*_+=<>.?/\-][0-9A-Za-z~!@$%^&*_+=<>.?/\-]*")


def _quote(name: str) -> str:
    return name if _SIMPLE.fullmatch(name) else f"|{name}|"


def _name(v: int, names: Mapping[int, str]) -> str:
    return _quote(names.get(v, f"x{v}"))


def _rational(q: mpq) -> str:
    a = abs(q)
    s = str(a.numerator) if a.denominator == 1 else f"(/ {a.numerator} {a.denominator})"
    return s if q >= 0 else f"(- {s})"


def print_polynomial(p: Polynomial, names: Mapping[int, str] | None = None) -> str:
    """Prefix form with a fixed monomial order."""
    names = names or {}
    if p.is_zero():
        return "0"
    terms = []
    for e, c in p.sorted_terms():
        factors = [_name(i + 1, names) for i in reversed(range(len(e))) for _ in range(e[i])]
        if not factors:
            terms.append(_rational(c))
        elif c == 1 and len(factors) == 1:
            terms.append(factors[0])
        elif c == 1:
            terms.append("(* " + " ".join(factors) + ")")
        else:
            terms.append("(* " + " ".join([_rational(c), *factors]) + ")")
    return terms[0] if len(terms) == 1 else "(+ " + " ".join(terms) + ")"


def print_formula(f: Formula, names: Mapping[int, str] | None = None) -> str:
    names = names or {}
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"({f.rel.value} {print_polynomial(f.poly, names)} 0)"
    if isinstance(f, RootAtom):
        return (f"({f.rel.value} {_name(f.var, names)} "
                f"(root {print_polynomial(f.poly, names)} {f.index} {_name(f.var, names)}))")
    if isinstance(f, Not):
        return f"(not {print_formula(f.arg, names)})"
    if isinstance(f, (And, Or)):
        op = "and" if isinstance(f, And) else "or"
        return f"({op} " + " ".join(print_formula(a, names) for a in f.args) + ")"
    if isinstance(f, Quantified):
        q = "exists" if f.quantifier is Quantifier.EXISTS else "forall"
        return f"({q} (({_name(f.var, names)} Real)) {print_formula(f.body, names)})"
    raise TypeError(f"cannot print {type(f).__name__}")


def print_script(script: Script) -> str:
    out = []
    for c in script.commands:
        if c.kind == "declare-const":
            out.append(f"(declare-const {_quote(c.args[0])} Real)")
        elif c.kind == "assert":
            out.append(f"(assert {print_formula(c.formula, script.names)})")
        elif c.args:
            out.append(f"({c.kind} " + " ".join(c.args) + ")")
        else:
            out.append(f"({c.kind})")
    return "\n".join(out) + "\n"

