"""Term language: variables, constructor terms, built-in applications, atoms,
body literals and rules.

Built-in values are plain Python objects: ``int`` (also used for time
points), ``str``, ``bool``, ``frozenset`` (finite sets) and ``tuple``
(sequences).  Everything here is immutable and hashable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

__all__ = [
    "Var", "Fn", "Op", "Atom", "Compr", "Builtin", "Let", "Choose", "Match",
    "Collect", "Not", "Rule", "Term", "Literal", "COMPARISONS",
    "apply_subst", "vars_of", "bound_vars", "is_ground", "term_key", "atom_key",
    "is_value", "time_of",
]


class Var:
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def __setattr__(self, key, value):
        raise AttributeError("Var is immutable")

    def __eq__(self, other):
        return type(other) is Var and other.name == self.name

    def __hash__(self):
        return hash(("$var", self.name))

    def __repr__(self):
        return f"Var({self.name!r})"

    @property
    def is_wildcard(self):
        return self.name.startswith("_")


class _Node:
    """Symbol applied to a tuple of arguments, with a cached hash."""

    __slots__ = ("symbol", "args", "_hash")

    def __init__(self, symbol: str, args=()):
        object.__setattr__(self, "symbol", symbol)
        object.__setattr__(self, "args", tuple(args))
        object.__setattr__(self, "_hash", hash((type(self).__name__, symbol, self.args)))

    def __setattr__(self, key, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is type(self)
            and other._hash == self._hash
            and other.symbol == self.symbol
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (type(self), (self.symbol, self.args))

    def __repr__(self):
        return f"{type(self).__name__}({self.symbol!r}, {self.args!r})"


class Fn(_Node):
    """Constructor application, e.g. ``Succ(RN("father"), Name("Anne"))``."""

    __slots__ = ()


class Op(_Node):
    """Unevaluated built-in application, e.g. ``t + 1`` or ``size(s)``."""

    __slots__ = ()

    @property
    def name(self):
        return self.symbol


class Atom(_Node):
    """Ordinary atom ``p(t, t1, ..., tn)``; ``args[0]`` is the time term."""

    __slots__ = ()

    @property
    def pred(self):
        return self.symbol

    @property
    def time(self):
        return self.args[0]

    @property
    def arity(self):
        return len(self.args)

    def __str__(self):
        from .printing import format_atom

        return format_atom(self)


Term = Union[Var, Fn, Op, int, str, bool, frozenset, tuple]

COMPARISONS = ("<", "<=", ">", ">=")


# Body literals.  An ordinary literal is an ``Atom``.

@dataclass(frozen=True)
class Compr:
    """Comprehension ``pred(var op bound, args...) STH body``."""

    var: str
    op: str
    bound: Term
    pred: str
    args: tuple
    body: tuple = ()

    @property
    def atom(self) -> Atom:
        return Atom(self.pred, (Var(self.var),) + self.args)


@dataclass(frozen=True)
class Builtin:
    expr: Term


@dataclass(frozen=True)
class Let:
    var: str
    term: Term


@dataclass(frozen=True)
class Choose:
    var: str
    term: Term


@dataclass(frozen=True)
class Match:
    pattern: Term
    term: Term


@dataclass(frozen=True)
class Collect:
    var: str
    template: Term
    body: tuple


@dataclass(frozen=True)
class Not:
    body: tuple


Literal = Union[Atom, Compr, Builtin, Let, Choose, Match, Collect, Not]


@dataclass(frozen=True)
class Rule:
    """``head :- body``.  An empty ``head`` tuple is the FAIL head."""

    head: tuple
    body: tuple = ()
    annotations: tuple = ()
    pos: tuple = field(default=None, compare=False, hash=False)

    @property
    def is_fail(self):
        return not self.head

    def annotation(self, key):
        for k, values in self.annotations:
            if k == key:
                return values
        return None


# ---------------------------------------------------------------------------
# values and ordering

def is_value(t) -> bool:
    return isinstance(t, (bool, int, str, frozenset, tuple)) or (
        type(t) is Fn and all(is_value(a) for a in t.args)
    )


def term_key(t):
    """Total canonical order over terms: kind tag first, then structure."""
    tp = type(t)
    if tp is bool:
        return (0, int(t))
    if tp is int:
        return (1, t)
    if tp is str:
        return (2, t)
    if tp is tuple:
        return (3, tuple(term_key(x) for x in t))
    if tp is frozenset:
        return (4, tuple(sorted(term_key(x) for x in t)))
    if tp is Fn:
        return (5, t.symbol, tuple(term_key(x) for x in t.args))
    if tp is Op:
        return (6, t.symbol, tuple(term_key(x) for x in t.args))
    if tp is Var:
        return (7, t.name)
    raise TypeError(f"not a term: {t!r}")


def atom_key(a: Atom):
    """Sort key: time, then predicate, then remaining arguments."""
    return (term_key(a.args[0]), a.pred, tuple(term_key(x) for x in a.args[1:]))


def time_of(a: Atom):
    return a.args[0]


# ---------------------------------------------------------------------------
# variables

def _term_vars(t, out):
    tp = type(t)
    if tp is Var:
        out.add(t.name)
    elif tp is Fn or tp is Op or tp is Atom:
        for a in t.args:
            _term_vars(a, out)
    elif tp is tuple or tp is frozenset:
        for a in t:
            _term_vars(a, out)


def _lit_vars(lit, out):
    tp = type(lit)
    if tp is Atom:
        _term_vars(lit, out)
    elif tp is Compr:
        out.add(lit.var)
        _term_vars(lit.bound, out)
        for a in lit.args:
            _term_vars(a, out)
        for b in lit.body:
            _lit_vars(b, out)
    elif tp is Builtin:
        _term_vars(lit.expr, out)
    elif tp is Let or tp is Choose:
        out.add(lit.var)
        _term_vars(lit.term, out)
    elif tp is Match:
        _term_vars(lit.pattern, out)
        _term_vars(lit.term, out)
    elif tp is Collect:
        out.add(lit.var)
        _term_vars(lit.template, out)
        for b in lit.body:
            _lit_vars(b, out)
    elif tp is Not:
        for b in lit.body:
            _lit_vars(b, out)
    else:
        raise TypeError(f"not a literal: {lit!r}")


def vars_of(z) -> set:
    """Free variable names of a term, atom, literal, body (tuple/list of
    literals) or rule.  Binder variables of special forms count."""
    out = set()
    if isinstance(z, Rule):
        for h in z.head:
            _term_vars(h, out)
        for b in z.body:
            _lit_vars(b, out)
    elif isinstance(z, list) or (type(z) is tuple and z and _is_literal(z[0])):
        for b in z:
            _lit_vars(b, out)
    elif _is_literal(z) and type(z) is not Atom:
        _lit_vars(z, out)
    else:
        _term_vars(z, out)
    return out


def _is_literal(x):
    return type(x) in (Atom, Compr, Builtin, Let, Choose, Match, Collect, Not)


def bound_vars(lit) -> set:
    """Variables a positive literal binds (or requires) in the positive body."""
    tp = type(lit)
    if tp is Atom:
        return vars_of(lit)
    if tp is Compr:
        out = {lit.var}
        for a in lit.args:
            _term_vars(a, out)
        return out
    if tp is Builtin:
        return vars_of(lit.expr)
    if tp is Let or tp is Choose or tp is Collect:
        return {lit.var}
    if tp is Match:
        return vars_of(lit.pattern)
    return set()


def is_ground(z) -> bool:
    return not vars_of(z)


# ---------------------------------------------------------------------------
# substitution

def _subst_term(t, s):
    tp = type(t)
    if tp is Var:
        return s.get(t.name, t)
    if tp is Fn:
        if not t.args:
            return t
        return Fn(t.symbol, tuple(_subst_term(a, s) for a in t.args))
    if tp is Op:
        new = Op(t.symbol, tuple(_subst_term(a, s) for a in t.args))
        if not vars_of(new):
            from .builtins import evaluate

            return evaluate(new)
        return new
    if tp is tuple:
        return tuple(_subst_term(a, s) for a in t)
    if tp is frozenset:
        return frozenset(_subst_term(a, s) for a in t)
    return t


def _subst_atom(a, s):
    return Atom(a.symbol, tuple(_subst_term(x, s) for x in a.args))


def _subst_lit(lit, s):
    tp = type(lit)
    if tp is Atom:
        return _subst_atom(lit, s)
    if tp is Compr:
        return Compr(lit.var, lit.op, _subst_term(lit.bound, s), lit.pred,
                     tuple(_subst_term(a, s) for a in lit.args),
                     tuple(_subst_lit(b, s) for b in lit.body))
    if tp is Builtin:
        return Builtin(_subst_term(lit.expr, s))
    if tp is Let:
        return Let(lit.var, _subst_term(lit.term, s))
    if tp is Choose:
        return Choose(lit.var, _subst_term(lit.term, s))
    if tp is Match:
        return Match(_subst_term(lit.pattern, s), _subst_term(lit.term, s))
    if tp is Collect:
        return Collect(lit.var, _subst_term(lit.template, s),
                       tuple(_subst_lit(b, s) for b in lit.body))
    if tp is Not:
        return Not(tuple(_subst_lit(b, s) for b in lit.body))
    raise TypeError(f"not a literal: {lit!r}")


def apply_subst(s: Mapping, z):
    """Apply substitution ``s`` (variable name -> ground term) to ``z``.

    Built-in applications whose arguments become ground are evaluated, so
    ``t + 1`` under ``{t: 3}`` yields ``4``.  Binding occurrences of special
    form variables are left in place.
    """
    if not s:
        return z
    if isinstance(z, Rule):
        return Rule(tuple(_subst_atom(h, s) for h in z.head),
                    tuple(_subst_lit(b, s) for b in z.body), z.annotations, z.pos)
    if isinstance(z, list):
        return [_subst_lit(b, s) for b in z]
    if type(z) is tuple and z and _is_literal(z[0]):
        return tuple(_subst_lit(b, s) for b in z)
    if type(z) is Atom:
        return _subst_atom(z, s)
    if _is_literal(z):
        return _subst_lit(z, s)
    return _subst_term(z, s)
