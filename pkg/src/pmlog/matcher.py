"""Body matchers: substitutions that make a rule body true in an interpretation.

Literals are evaluated strictly left to right.  Comprehension atoms keep the
instances whose time is closest to the bound (latest for ``<``/``<=``,
earliest for ``>``/``>=``) among those whose inner body is satisfiable;
instances tied on that time are all returned.
"""
from __future__ import annotations

from .builtins import evaluate
from .errors import NonGroundEvaluation, TypeMismatch
from .interp import as_interpretation
from .terms import (Atom, Builtin, Choose, Collect, Compr, Fn, Let, Match, Not, Op, Var,
                    _subst_term, term_key, vars_of)

__all__ = ["match_body", "holds_not", "match_term"]


def _equal(a, b):
    if (type(a) is bool) != (type(b) is bool):
        return False
    return a == b


def match_term(pattern, value, s):
    """One-way match of ``pattern`` against ground ``value``, extending ``s`` in
    place.  Returns False on mismatch (``s`` may then hold partial bindings)."""
    tp = type(pattern)
    if tp is Var:
        name = pattern.name
        if name in s:
            return _equal(s[name], value)
        s[name] = value
        return True
    if tp is Fn:
        if type(value) is not Fn or value.symbol != pattern.symbol or len(value.args) != len(pattern.args):
            return False
        for p, v in zip(pattern.args, value.args):
            if not match_term(p, v, s):
                return False
        return True
    if tp is tuple:
        if type(value) is not tuple or len(value) != len(pattern):
            return False
        for p, v in zip(pattern, value):
            if not match_term(p, v, s):
                return False
        return True
    if tp is Op:
        raise NonGroundEvaluation(
            f"cannot match computed term with unbound variables {sorted(vars_of(pattern))}")
    return _equal(pattern, value)


def _ground(term, s, what):
    t = _subst_term(term, s)
    if type(t) is Op or vars_of(t):
        missing = sorted(vars_of(t))
        if missing:
            raise NonGroundEvaluation(f"{what}: variable {missing[0]} is unbound")
        t = evaluate(t)
    return t


def _candidates(I, pred, args, s, hint):
    t = args[0]
    if type(t) is Var:
        if t.name in s:
            return I.lookup(pred, s[t.name])
        if hint is not None and hint[0] == t.name:
            return I.lookup(pred, hint[1])
        return I.lookup(pred)
    if type(t) is Op:
        return I.lookup(pred, _ground(t, s, "time term"))
    if vars_of(t):
        return I.lookup(pred)
    return I.lookup(pred, t)


def _match_atom(I, lit, s, hint=None):
    args = tuple(_subst_term(a, s) for a in lit.args)
    n = len(args)
    for atom in _candidates(I, lit.symbol, args, s, hint):
        if len(atom.args) != n:
            continue
        s2 = dict(s)
        ok = True
        for p, v in zip(args, atom.args):
            if not match_term(p, v, s2):
                ok = False
                break
        if ok:
            yield s2


def _compare(op, x, bound):
    if type(x) is not int or type(bound) is not int or type(bound) is bool:
        raise TypeMismatch(f"comprehension bound must compare integers, got {x!r} {op} {bound!r}")
    if op == "<":
        return x < bound
    if op == "<=":
        return x <= bound
    if op == ">":
        return x > bound
    return x >= bound


def _match_compr(I, lit, s):
    bound = _ground(lit.bound, s, "comprehension bound")
    outer = s
    preset = None
    if lit.var in s:
        preset = s[lit.var]
        outer = {k: v for k, v in s.items() if k != lit.var}
    args = (Var(lit.var),) + tuple(_subst_term(a, outer) for a in lit.args)
    best, found = None, []
    for atom in I.lookup(lit.pred):
        if len(atom.args) != len(args):
            continue
        x = atom.args[0]
        if not _compare(lit.op, x, bound):
            continue
        if best is not None and (x < best if lit.op in ("<", "<=") else x > best):
            continue
        s2 = dict(outer)
        if not all(match_term(p, v, s2) for p, v in zip(args, atom.args)):
            continue
        if lit.body and next(_match(I, lit.body, 0, s2, None), None) is None:
            continue
        if best is None or x != best:
            best, found = x, [s2]
        else:
            found.append(s2)
    for s2 in found:
        if preset is None or _equal(s2[lit.var], preset):
            yield s2


def _bind(s, var, value):
    if var in s:
        return s if _equal(s[var], value) else None
    s2 = dict(s)
    s2[var] = value
    return s2


def _match(I, body, i, s, hint):
    if i == len(body):
        yield s
        return
    lit = body[i]
    tp = type(lit)
    if tp is Atom:
        for s2 in _match_atom(I, lit, s, hint):
            yield from _match(I, body, i + 1, s2, hint)
    elif tp is Compr:
        for s2 in _match_compr(I, lit, s):
            yield from _match(I, body, i + 1, s2, hint)
    elif tp is Builtin:
        v = _ground(lit.expr, s, "built-in call")
        if type(v) is not bool:
            raise TypeMismatch(f"built-in literal evaluated to non-boolean {v!r}")
        if v:
            yield from _match(I, body, i + 1, s, hint)
    elif tp is Let:
        s2 = _bind(s, lit.var, _ground(lit.term, s, "LET"))
        if s2 is not None:
            yield from _match(I, body, i + 1, s2, hint)
    elif tp is Choose:
        coll = _ground(lit.term, s, "CHOOSE")
        if type(coll) not in (frozenset, tuple):
            raise TypeMismatch(f"CHOOSE needs a set or sequence, got {coll!r}")
        seen = set()
        for v in sorted(coll, key=term_key):
            k = term_key(v)
            if k in seen:
                continue
            seen.add(k)
            s2 = _bind(s, lit.var, v)
            if s2 is not None:
                yield from _match(I, body, i + 1, s2, hint)
    elif tp is Match:
        value = _ground(lit.term, s, "MATCH")
        pattern = _subst_term(lit.pattern, s)
        s2 = dict(s)
        if match_term(pattern, value, s2):
            yield from _match(I, body, i + 1, s2, hint)
    elif tp is Collect:
        values = frozenset(
            _ground(lit.template, d, "COLLECT template") for d in _match(I, lit.body, 0, s, None)
        )
        s2 = _bind(s, lit.var, values)
        if s2 is not None:
            yield from _match(I, body, i + 1, s2, hint)
    elif tp is Not:
        if next(_match(I, lit.body, 0, s, None), None) is None:
            yield from _match(I, body, i + 1, s, hint)
    else:
        raise TypeError(f"not a body literal: {lit!r}")


def match_body(interp, body, seed=None, hint=None):
    """Enumerate body matchers of ``body`` in ``interp``.

    ``seed`` pre-binds variables.  ``hint = (var, time)`` only narrows the
    lookup of ordinary atoms whose time term is the still-unbound ``var``;
    callers filter on it afterwards.
    """
    I = as_interpretation(interp)
    return _match(I, tuple(body), 0, dict(seed or {}), hint)


def holds_not(interp, body, seed=None):
    """True iff no substitution satisfies the positive body ``body``."""
    return next(match_body(interp, body, seed), None) is None
