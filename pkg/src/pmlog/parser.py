"""Tokenizer and recursive-descent parser for the rule language.

Grammar summary (see README for the full description)::

    program   := (const | pred | rule)*
    const     := "const" IDENT "=" term "."
    pred      := "pred" IDENT "(" IDENT ("," IDENT)* ")" "."
    rule      := head [":-" [body]] "."
    head      := "FAIL" | atom ("OR" atom)* | atom ("AND" atom)*   [":" ("@" IDENT "(" STRING,* ")")+]
    body      := lit ("," lit)*
    lit       := "NOT" "(" body ")" | "LET(" var "," term ")" | "CHOOSE(" var "," term ")"
               | "MATCH(" term "," term ")" | "COLLECT(" var "," term "STH" body ")"
               | atom | pred "(" var cmp term ("," term)* ")" ["STH" (lit | "(" body ")")]
               | "(" body ")" | expression

Bare identifiers are variables unless declared with ``const``; ``_`` is an
anonymous variable.  The first argument of every atom is its time term.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .builtins import FUNCTIONS, evaluate
from .errors import ArityError, BindingError, EvaluationError, ParseError
from .terms import (COMPARISONS, Atom, Builtin, Choose, Collect, Compr, Fn, Let, Match,
                    Not, Op, Rule, Var, vars_of)

KEYWORDS = {"OR", "AND", "FAIL", "NOT", "STH", "LET", "CHOOSE", "MATCH", "COLLECT",
            "true", "false", "const", "pred"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+|//[^\n]*|\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<method>\.(?=[A-Za-z_]))
  | (?P<punct>:-|<=|>=|==|!=|&&|\|\||[<>=+\-*/%!(){}\[\],:@.])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # string, number, ident, method, punct, eof
    value: object
    line: int
    col: int

    def describe(self):
        if self.kind == "eof":
            return "end of input"
        if self.kind == "string":
            return json.dumps(self.value)
        return repr(str(self.value))


def tokenize(text: str):
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        raw = m.group()
        if kind == "ws":
            pass
        elif kind == "string":
            try:
                value = json.loads(raw)
            except ValueError:
                raise ParseError(f"bad string literal {raw}", line, col) from None
            tokens.append(Token("string", value, line, col))
        elif kind == "number":
            tokens.append(Token("number", int(raw), line, col))
        elif kind == "method":
            tokens.append(Token("method", ".", line, col))
        else:
            tokens.append(Token(kind, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            line_start = pos + raw.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", None, line, pos - line_start + 1))
    return tokens


def parse_datetime(text: str) -> int:
    """ISO-8601 date/time to epoch seconds; naive values are taken as UTC."""
    try:
        dt = datetime.fromisoformat(text)
    except ValueError:
        raise ValueError(f"not an ISO-8601 date/time: {text!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


@dataclass
class SourceProgram:
    rules: tuple = ()
    constants: dict = field(default_factory=dict)
    sorts: dict = field(default_factory=dict)
    filename: str = None

    @property
    def arities(self):
        out = {p: len(s) for p, s in self.sorts.items()}
        for rule in self.rules:
            for a in _atoms_in_rule(rule):
                out.setdefault(a[0], a[1])
        return out

    @property
    def predicates(self):
        return sorted(self.arities)

    def __add__(self, other):
        consts = dict(self.constants)
        consts.update(other.constants)
        sorts = dict(self.sorts)
        sorts.update(other.sorts)
        return SourceProgram(tuple(self.rules) + tuple(other.rules), consts, sorts,
                             self.filename or other.filename)

    def __eq__(self, other):
        if not isinstance(other, SourceProgram):
            return NotImplemented
        return (tuple(self.rules) == tuple(other.rules) and self.constants == other.constants
                and self.sorts == other.sorts)


def _atoms_in_body(body):
    for lit in body:
        tp = type(lit)
        if tp is Atom:
            yield lit.pred, lit.arity, lit
        elif tp is Compr:
            yield lit.pred, len(lit.args) + 1, lit
            yield from _atoms_in_body(lit.body)
        elif tp is Collect or tp is Not:
            yield from _atoms_in_body(lit.body)


def _atoms_in_rule(rule):
    for h in rule.head:
        yield h.pred, h.arity, h
    yield from _atoms_in_body(rule.body)


class _Parser:
    def __init__(self, text, constants=None):
        self.tokens = tokenize(text)
        self.i = 0
        self.constants = dict(constants or {})
        self.sorts = {}
        self.fresh = 0

    # -- token helpers ------------------------------------------------------
    @property
    def tok(self):
        return self.tokens[self.i]

    def at(self, value, kind=None):
        t = self.tok
        if kind is not None and t.kind != kind:
            return False
        return t.value == value and t.kind in ("punct", "ident", "method")

    def accept(self, value):
        if self.at(value):
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            self.fail(value)

    def fail(self, *expected):
        t = self.tok
        raise ParseError(f"unexpected {t.describe()}", t.line, t.col,
                         expected=[repr(e) for e in expected])

    def ident(self):
        t = self.tok
        if t.kind != "ident" or t.value in KEYWORDS:
            self.fail("identifier")
        self.i += 1
        return t.value

    # -- program ------------------------------------------------------------
    def program(self):
        rules, errors = [], []
        while self.tok.kind != "eof":
            start = self.i
            try:
                if self.at("const", "ident"):
                    self.const_decl()
                elif self.at("pred", "ident"):
                    self.pred_decl()
                else:
                    rules.extend(self.rule())
            except ParseError as err:
                errors.append(err)
                self.recover(start)
        return rules, errors

    def recover(self, start):
        if self.i == start:
            self.i += 1
        while self.tok.kind != "eof":
            t = self.tok
            self.i += 1
            if t.kind == "punct" and t.value == ".":
                return

    def const_decl(self):
        self.expect("const")
        t = self.tok
        name = self.ident()
        self.expect("=")
        value = self.expr()
        self.expect(".")
        if vars_of(value):
            raise ParseError(f"constant {name} must be ground", t.line, t.col)
        self.constants[name] = value

    def pred_decl(self):
        self.expect("pred")
        name = self.ident()
        self.expect("(")
        sorts = [self.ident()]
        while self.accept(","):
            sorts.append(self.ident())
        self.expect(")")
        self.expect(".")
        self.sorts[name] = tuple(sorts)

    def rule(self):
        self.fresh = 0
        t = self.tok
        pos = (t.line, t.col)
        heads, connective = [], None
        if self.accept("FAIL"):
            pass
        else:
            heads.append(self.head_atom())
            while self.at("OR") or self.at("AND"):
                conn = self.tok.value
                if connective is not None and conn != connective:
                    self.fail(connective)
                connective = conn
                self.i += 1
                heads.append(self.head_atom())
        annotations = []
        if self.accept(":"):
            annotations.append(self.annotation())
            while self.at("@"):
                annotations.append(self.annotation())
        body = []
        if self.accept(":-"):
            if not self.at("."):
                body = self.body()
        self.expect(".")
        body = tuple(body)
        annotations = tuple(annotations)
        if connective == "AND":
            return [Rule((h,), body, annotations, pos) for h in heads]
        return [Rule(tuple(heads), body, annotations, pos)]

    def annotation(self):
        self.expect("@")
        key = self.ident()
        self.expect("(")
        values = [self.string()]
        while self.accept(","):
            values.append(self.string())
        self.expect(")")
        return (key, tuple(values))

    def string(self):
        t = self.tok
        if t.kind != "string":
            self.fail("string")
        self.i += 1
        return t.value

    def head_atom(self):
        t = self.tok
        e = self.expr()
        if type(e) is not Fn:
            raise ParseError("head literal must be an ordinary atom", t.line, t.col)
        return self.to_atom(e, t)

    def to_atom(self, e, t):
        if not e.args:
            raise ParseError(f"atom {e.symbol} needs a time argument", t.line, t.col)
        return Atom(e.symbol, e.args)

    # -- bodies -------------------------------------------------------------
    def body(self):
        lits = self.literal()
        while self.accept(","):
            lits.extend(self.literal())
        return lits

    def literal(self):
        t = self.tok
        if t.kind == "ident":
            v = t.value
            if v == "NOT":
                self.i += 1
                if self.accept("("):
                    inner = self.body()
                    self.expect(")")
                else:
                    inner = self.literal()
                return [Not(tuple(inner))]
            if v in ("LET", "CHOOSE"):
                self.i += 1
                self.expect("(")
                var = self.binder()
                self.expect(",")
                term = self.expr()
                self.expect(")")
                return [Let(var, term) if v == "LET" else Choose(var, term)]
            if v == "MATCH":
                self.i += 1
                self.expect("(")
                pattern = self.expr()
                self.expect(",")
                term = self.expr()
                self.expect(")")
                return [Match(pattern, term)]
            if v == "COLLECT":
                self.i += 1
                self.expect("(")
                var = self.binder()
                self.expect(",")
                template = self.expr()
                self.expect("STH")
                inner = self.body()
                self.expect(")")
                return [Collect(var, template, tuple(inner))]
        if t.kind == "punct" and t.value == "(":
            save = self.i
            try:
                lit = self.expr_literal()
                if self.at(",") or self.at(".") or self.at(")") or self.tok.kind == "eof":
                    return lit
            except ParseError:
                pass
            self.i = save
            self.expect("(")
            inner = self.body()
            self.expect(")")
            return inner
        return self.expr_literal()

    def binder(self):
        name = self.ident()
        if name == "_":
            self.fail("variable name")
        if self.accept(":"):
            self.type_ascription()
        return name

    def type_ascription(self):
        self.ident()
        if self.accept("["):
            self.type_ascription()
            while self.accept(","):
                self.type_ascription()
            self.expect("]")

    def expr_literal(self):
        t = self.tok
        e = self.expr()
        compr = self.comprehension_head(e)
        if self.accept("STH"):
            if compr is None:
                raise ParseError("STH must follow a comprehension atom p(x < t, ...)",
                                 t.line, t.col)
            inner = self.literal()
            var, op, bound, pred, args = compr
            return [Compr(var, op, bound, pred, args, tuple(inner))]
        if compr is not None:
            return [Compr(*compr)]
        if type(e) is Fn:
            return [self.to_atom(e, t)]
        return [Builtin(e)]

    def comprehension_head(self, e):
        if type(e) is not Fn or not e.args:
            return None
        first = e.args[0]
        if type(first) is Op and first.symbol in COMPARISONS and type(first.args[0]) is Var:
            var = first.args[0]
            return (var.name, first.symbol, first.args[1], e.symbol, e.args[1:])
        return None

    # -- expressions --------------------------------------------------------
    def expr(self):
        left = self.and_expr()
        while self.accept("||"):
            left = self.fold(Op("||", (left, self.and_expr())))
        return left

    def and_expr(self):
        left = self.cmp_expr()
        while self.accept("&&"):
            left = self.fold(Op("&&", (left, self.cmp_expr())))
        return left

    def cmp_expr(self):
        left = self.add_expr()
        t = self.tok
        if t.kind == "punct" and t.value in ("<", "<=", ">", ">=", "==", "!=", "="):
            self.i += 1
            op = "==" if t.value == "=" else t.value
            return self.fold(Op(op, (left, self.add_expr())))
        if t.kind == "ident" and t.value in ("in", "contains"):
            self.i += 1
            right = self.add_expr()
            if t.value == "in":
                return self.fold(Op("in", (left, right)))
            return self.fold(Op("contains", (left, right)))
        return left

    def add_expr(self):
        left = self.mul_expr()
        while self.tok.kind == "punct" and self.tok.value in ("+", "-"):
            op = self.tok.value
            self.i += 1
            left = self.fold(Op(op, (left, self.mul_expr())))
        return left

    def mul_expr(self):
        left = self.unary()
        while self.tok.kind == "punct" and self.tok.value in ("*", "/", "%"):
            op = self.tok.value
            self.i += 1
            left = self.fold(Op(op, (left, self.unary())))
        return left

    def unary(self):
        if self.accept("!"):
            return self.fold(Op("!", (self.unary(),)))
        if self.accept("-"):
            return self.fold(Op("neg", (self.unary(),)))
        return self.postfix()

    def postfix(self):
        e = self.primary()
        while self.tok.kind == "method":
            self.i += 1
            t = self.tok
            name = self.ident()
            if name not in FUNCTIONS:
                raise ParseError(f"unknown method {name}", t.line, t.col)
            args = [e]
            if self.accept("("):
                if not self.at(")"):
                    args.extend(self.args())
                self.expect(")")
            e = self.fold(Op(name, tuple(args)))
        return e

    def args(self):
        out = [self.expr()]
        while self.accept(","):
            out.append(self.expr())
        return out

    def primary(self):
        t = self.tok
        if t.kind == "number":
            self.i += 1
            return t.value
        if t.kind == "string":
            self.i += 1
            return t.value
        if t.kind == "ident":
            name = t.value
            if name == "true" or name == "false":
                self.i += 1
                return name == "true"
            if name in KEYWORDS:
                self.fail("term")
            self.i += 1
            if self.accept("("):
                args = [] if self.at(")") else self.args()
                self.expect(")")
                if name == "datetime":
                    if len(args) != 1 or type(args[0]) is not str:
                        raise ParseError("datetime expects one string literal", t.line, t.col)
                    try:
                        return parse_datetime(args[0])
                    except ValueError as err:
                        raise ParseError(str(err), t.line, t.col) from None
                if name in FUNCTIONS:
                    return self.fold(Op(name, tuple(args)), t)
                return Fn(name, tuple(args))
            if name == "_":
                self.fresh += 1
                return Var(f"_{self.fresh}")
            if name in self.constants:
                return self.constants[name]
            return Var(name)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("{"):
            items = [] if self.at("}") else self.args()
            self.expect("}")
            return self.fold(Op("set", tuple(items)), t)
        if self.accept("["):
            items = [] if self.at("]") else self.args()
            self.expect("]")
            return self.fold(Op("seq", tuple(items)), t)
        self.fail("term")

    def fold(self, op, t=None):
        """Evaluate built-in applications over constants at parse time."""
        if vars_of(op):
            return op
        try:
            return evaluate(op)
        except EvaluationError as err:
            t = t or self.tokens[self.i - 1]
            raise ParseError(str(err), t.line, t.col) from None


# ---------------------------------------------------------------------------
# compile-time checks

def _pattern_ops_bound(term, bound, where, pos):
    """Built-in applications inside a pattern cannot be inverted."""
    tp = type(term)
    if tp is Op:
        missing = vars_of(term) - bound
        if missing:
            raise BindingError(
                f"variable {sorted(missing)[0]} used in computed term of {where} before being bound",
                *(pos or (None, None)))
    elif tp is Fn or tp is Atom:
        for a in term.args:
            _pattern_ops_bound(a, bound, where, pos)
    elif tp is tuple or tp is frozenset:
        for a in term:
            _pattern_ops_bound(a, bound, where, pos)


def check_body_bindings(body, bound=frozenset(), pos=None):
    """Left-to-right binding discipline; returns the variables bound after ``body``."""
    from .printing import format_literal

    bound = set(bound)

    def need(vs, lit):
        missing = set(vs) - bound
        if missing:
            raise BindingError(
                f"variable {sorted(missing)[0]} used before being bound in {format_literal(lit)}",
                *(pos or (None, None)))

    def fresh(var, lit):
        if var in bound:
            raise BindingError(f"binder variable {var} already bound before {format_literal(lit)}",
                               *(pos or (None, None)))

    for lit in body:
        tp = type(lit)
        if tp is Atom:
            _pattern_ops_bound(lit, bound, format_literal(lit), pos)
            bound |= vars_of(lit)
        elif tp is Compr:
            need(vars_of(lit.bound), lit)
            fresh(lit.var, lit)
            for a in lit.args:
                _pattern_ops_bound(a, bound, format_literal(lit), pos)
            local = bound | {lit.var} | vars_of(tuple(lit.args))
            check_body_bindings(lit.body, local, pos)
            bound = local
        elif tp is Builtin:
            need(vars_of(lit.expr), lit)
        elif tp is Let or tp is Choose:
            need(vars_of(lit.term), lit)
            fresh(lit.var, lit)
            bound.add(lit.var)
        elif tp is Match:
            need(vars_of(lit.term), lit)
            _pattern_ops_bound(lit.pattern, bound, format_literal(lit), pos)
            bound |= vars_of(lit.pattern)
        elif tp is Collect:
            fresh(lit.var, lit)
            inner = check_body_bindings(lit.body, bound, pos)
            missing = vars_of(lit.template) - inner
            if missing:
                raise BindingError(
                    f"COLLECT template variable {sorted(missing)[0]} is not bound by its body",
                    *(pos or (None, None)))
            bound.add(lit.var)
        elif tp is Not:
            if not lit.body:
                raise BindingError("NOT needs a non-empty body", *(pos or (None, None)))
            check_body_bindings(lit.body, bound, pos)
    return bound


def check_arities(rules, sorts, *, positions=True):
    arity = {p: len(s) for p, s in sorts.items()}
    for rule in rules:
        for pred, n, _ in _atoms_in_rule(rule):
            if pred in arity and arity[pred] != n:
                line, col = rule.pos if (positions and rule.pos) else (None, None)
                raise ArityError(f"predicate {pred} used with arity {n}, expected {arity[pred]}",
                                 line, col)
            arity.setdefault(pred, n)
    return arity


def parse_program(text: str, filename: str = None, *, constants=None) -> SourceProgram:
    """Parse program text.  Raises the first ParseError/BindingError/ArityError;
    all collected diagnostics are available as ``err.diagnostics``."""
    p = _Parser(text, constants)
    try:
        rules, errors = p.program()
    except ParseError as err:  # tokenizer errors
        err.diagnostics = [err]
        raise
    for rule in rules:
        try:
            check_body_bindings(rule.body, pos=rule.pos)
        except BindingError as err:
            errors.append(err)
    if not errors:
        try:
            check_arities(rules, p.sorts)
        except ArityError as err:
            errors.append(err)
    if errors:
        errors.sort(key=lambda e: (e.line or 0, e.col or 0))
        first = errors[0]
        first.diagnostics = errors
        raise first
    return SourceProgram(tuple(rules), p.constants, p.sorts, filename)


def parse_term(text: str, constants=None):
    p = _Parser(text, constants)
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return e


def parse_atom(text: str, constants=None) -> Atom:
    p = _Parser(text, constants)
    t = p.tok
    e = p.expr()
    if p.tok.kind != "eof":
        p.fail("end of input")
    if type(e) is not Fn:
        raise ParseError("expected an atom", t.line, t.col)
    return p.to_atom(e, t)


def parse_body(text: str, constants=None):
    p = _Parser(text, constants)
    lits = p.body()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return tuple(lits)
