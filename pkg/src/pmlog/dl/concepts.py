"""ALCIF concepts, roles and individuals as constructor terms, plus NNF."""
from __future__ import annotations

from ..errors import UnsupportedGCI
from ..terms import Fn, Var

TOP = Fn("Top", ())
BOTTOM = Fn("Bottom", ())

_UNARY = {"Not"}
_BINARY = {"And2", "Or2"}
_QUANT = {"Exists", "Forall"}


def CN(name):
    return Fn("CN", (name,))


def RN(name):
    return Fn("RN", (name,))


def Inv(role):
    if type(role) is Fn and role.symbol == "Inv":
        return role.args[0]
    return Fn("Inv", (role,))


def Name(name):
    return Fn("Name", (name,))


def Not(c):
    return Fn("Not", (c,))


def And2(a, b):
    return Fn("And2", (a, b))


def Or2(a, b):
    return Fn("Or2", (a, b))


def Exists(r, c):
    return Fn("Exists", (r, c))


def Forall(r, c):
    return Fn("Forall", (r, c))


def conj(*cs):
    """Right-nested And2 of one or more concepts."""
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = And2(c, out)
    return out


def disj(*cs):
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = Or2(c, out)
    return out


# -- conversion from loosely written terms -----------------------------------

def to_role(t):
    """``father``, ``RN("father")`` or ``Inv(...)`` to a normalised role term."""
    if type(t) is Var:
        return RN(t.name)
    if type(t) is str:
        return RN(t)
    if type(t) is Fn:
        if t.symbol == "RN" and len(t.args) == 1 and type(t.args[0]) is str:
            return t
        if t.symbol == "Inv" and len(t.args) == 1:
            return Inv(to_role(t.args[0]))
    raise UnsupportedGCI(f"not a role: {t!r}")


def to_concept(t):
    """Normalise a concept term; bare identifiers are concept names."""
    if type(t) is str:
        t = Var(t)
    if type(t) is Var:
        if t.name == "Top":
            return TOP
        if t.name == "Bottom":
            return BOTTOM
        return CN(t.name)
    if type(t) is Fn:
        s, args = t.symbol, t.args
        if s in ("Top", "Bottom") and not args:
            return t
        if s == "CN" and len(args) == 1 and type(args[0]) is str:
            return t
        if s in _UNARY and len(args) == 1:
            return Not(to_concept(args[0]))
        if s in _BINARY and len(args) >= 2:
            parts = [to_concept(a) for a in args]
            return conj(*parts) if s == "And2" else disj(*parts)
        if s in _QUANT and len(args) == 2:
            return Fn(s, (to_role(args[0]), to_concept(args[1])))
    raise UnsupportedGCI(f"not an ALCIF concept: {t!r}")


def to_individual(t):
    if type(t) is Var:
        return Name(t.name)
    if type(t) is str:
        return Name(t)
    if type(t) is Fn and t.symbol == "Name" and len(t.args) == 1 and type(t.args[0]) is str:
        return t
    raise UnsupportedGCI(f"not a named individual: {t!r}")


# -- negation normal form ------------------------------------------------------

def nnf(c):
    """Push negation onto concept names and simplify Top/Bottom."""
    return _nnf(c, False)


def _nnf(c, neg):
    s = c.symbol
    if s == "Top":
        return BOTTOM if neg else TOP
    if s == "Bottom":
        return TOP if neg else BOTTOM
    if s == "CN":
        return Not(c) if neg else c
    if s == "Not":
        return _nnf(c.args[0], not neg)
    if s in _BINARY:
        a, b = _nnf(c.args[0], neg), _nnf(c.args[1], neg)
        is_and = (s == "And2") != neg
        return _and(a, b) if is_and else _or(a, b)
    if s in _QUANT:
        r, d = c.args
        body = _nnf(d, neg)
        exists = (s == "Exists") != neg
        if exists:
            return BOTTOM if body == BOTTOM else Exists(r, body)
        return TOP if body == TOP else Forall(r, body)
    raise UnsupportedGCI(f"not an ALCIF concept: {c!r}")


def _and(a, b):
    if a == BOTTOM or b == BOTTOM:
        return BOTTOM
    if a == TOP:
        return b
    if b == TOP:
        return a
    return And2(a, b)


def _or(a, b):
    if a == TOP or b == TOP:
        return TOP
    if a == BOTTOM:
        return b
    if b == BOTTOM:
        return a
    return Or2(a, b)


def is_nnf(c) -> bool:
    s = c.symbol
    if s == "Not":
        return c.args[0].symbol == "CN"
    if s in _BINARY:
        return is_nnf(c.args[0]) and is_nnf(c.args[1])
    if s in _QUANT:
        return is_nnf(c.args[1])
    return True


def subconcepts(c):
    yield c
    for a in c.args:
        if type(a) is Fn and a.symbol not in ("RN", "Inv"):
            yield from subconcepts(a)
