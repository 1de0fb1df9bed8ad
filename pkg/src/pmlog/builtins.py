"""Evaluation of the fixed built-in function set over ground terms."""
from __future__ import annotations

from .errors import NonGroundEvaluation, TypeMismatch
from .terms import Fn, Op, Var, term_key

# name -> (min args, max args)
ARITY = {
    "+": (2, 2), "-": (2, 2), "*": (2, 2), "/": (2, 2), "%": (2, 2), "neg": (1, 1),
    "<": (2, 2), "<=": (2, 2), ">": (2, 2), ">=": (2, 2), "==": (2, 2), "!=": (2, 2),
    "&&": (2, 2), "||": (2, 2), "!": (1, 1),
    "size": (1, 1), "contains": (2, 2), "in": (2, 2),
    "union": (2, 2), "intersect": (2, 2), "diff": (2, 2),
    "toSet": (1, 1), "toList": (1, 1),
    "min": (1, 2), "max": (1, 2), "abs": (1, 1),
    "interval": (2, 2), "set": (0, None), "seq": (0, None),
}

# user-facing function-call names (the rest are operator spellings)
FUNCTIONS = frozenset({
    "size", "contains", "union", "intersect", "diff", "toSet", "toList",
    "min", "max", "abs", "interval",
})


def _kind(v):
    if type(v) is bool:
        return "boolean"
    if type(v) is int:
        return "integer"
    if type(v) is str:
        return "string"
    if type(v) is frozenset:
        return "set"
    if type(v) is tuple:
        return "sequence"
    if type(v) is Fn:
        return "constructor term"
    return type(v).__name__


def _need(name, v, *kinds):
    if _kind(v) not in kinds:
        raise TypeMismatch(f"{name}: expected {' or '.join(kinds)}, got {_kind(v)} {v!r}")
    return v


def _int(name, v):
    return _need(name, v, "integer")


def _collection(name, v):
    return _need(name, v, "set", "sequence")


def _canonical(xs):
    return tuple(sorted(xs, key=term_key))


def _order(name, a, b):
    ka, kb = _kind(a), _kind(b)
    if ka != kb or ka not in ("integer", "string"):
        raise TypeMismatch(f"{name}: cannot order {ka} against {kb}")


def apply_builtin(name, args):
    """Apply built-in ``name`` to already evaluated ``args``."""
    n = len(args)
    lo, hi = ARITY.get(name, (None, None))
    if lo is None:
        raise TypeMismatch(f"unknown built-in {name!r}")
    if n < lo or (hi is not None and n > hi):
        raise TypeMismatch(f"{name}: wrong number of arguments ({n})")

    if name in ("+", "-", "*", "/", "%"):
        a, b = args
        if name == "+" and type(a) is str and type(b) is str:
            return a + b
        if name == "+" and type(a) is tuple and type(b) is tuple:
            return a + b
        _int(name, a), _int(name, b)
        if name == "+":
            return a + b
        if name == "-":
            return a - b
        if name == "*":
            return a * b
        if b == 0:
            raise TypeMismatch(f"{name}: division by zero")
        return a // b if name == "/" else a % b
    if name == "neg":
        return -_int(name, args[0])
    if name in ("<", "<=", ">", ">="):
        a, b = args
        _order(name, a, b)
        if name == "<":
            return a < b
        if name == "<=":
            return a <= b
        if name == ">":
            return a > b
        return a >= b
    if name == "==":
        return _same(args[0], args[1])
    if name == "!=":
        return not _same(args[0], args[1])
    if name in ("&&", "||"):
        a, b = args
        _need(name, a, "boolean"), _need(name, b, "boolean")
        return (a and b) if name == "&&" else (a or b)
    if name == "!":
        return not _need(name, args[0], "boolean")
    if name == "size":
        v = _need(name, args[0], "set", "sequence", "string")
        return len(v)
    if name == "contains":
        coll, x = args
        if type(coll) is str:
            return _need(name, x, "string") in coll
        return any(_same(x, y) for y in _collection(name, coll))
    if name == "in":
        x, coll = args
        return apply_builtin("contains", (coll, x))
    if name in ("union", "intersect", "diff"):
        a, b = args
        if type(a) is tuple and type(b) is tuple and name == "union":
            return a + b
        sa = frozenset(_collection(name, a))
        sb = frozenset(_collection(name, b))
        if name == "union":
            return sa | sb
        if name == "intersect":
            return sa & sb
        return sa - sb
    if name == "toSet":
        return frozenset(_collection(name, args[0]))
    if name == "toList":
        v = _collection(name, args[0])
        return _canonical(v) if type(v) is frozenset else v
    if name in ("min", "max"):
        if n == 1:
            xs = _collection(name, args[0])
            if not xs:
                raise TypeMismatch(f"{name}: empty collection")
        else:
            xs = args
        xs = list(xs)
        for x in xs[1:]:
            _order(name, xs[0], x)
        return min(xs) if name == "min" else max(xs)
    if name == "abs":
        return abs(_int(name, args[0]))
    if name == "interval":
        lo_, hi_ = _int(name, args[0]), _int(name, args[1])
        return tuple(range(lo_, hi_ + 1))
    if name == "set":
        return frozenset(args)
    if name == "seq":
        return tuple(args)
    raise TypeMismatch(f"unknown built-in {name!r}")  # pragma: no cover


def _same(a, b):
    # keep booleans distinct from the integers 0 and 1
    if (type(a) is bool) != (type(b) is bool):
        return False
    return a == b


def evaluate(t):
    """Reduce a ground term to a value (evalGround)."""
    tp = type(t)
    if tp is Op:
        if t.symbol in ("&&", "||") and len(t.args) == 2:
            left = _need(t.symbol, evaluate(t.args[0]), "boolean")
            if t.symbol == "&&" and not left:
                _ground_or_raise(t.args[1])
                return False
            if t.symbol == "||" and left:
                _ground_or_raise(t.args[1])
                return True
            return _need(t.symbol, evaluate(t.args[1]), "boolean")
        return apply_builtin(t.symbol, tuple(evaluate(a) for a in t.args))
    if tp is Var:
        raise NonGroundEvaluation(f"cannot evaluate unbound variable {t.name}")
    if tp is Fn:
        if not t.args:
            return t
        return Fn(t.symbol, tuple(evaluate(a) for a in t.args))
    if tp is tuple:
        return tuple(evaluate(a) for a in t)
    if tp is frozenset:
        return frozenset(evaluate(a) for a in t)
    if tp in (int, str, bool):
        return t
    raise TypeMismatch(f"not a term: {t!r}")


def _ground_or_raise(t):
    from .terms import vars_of

    vs = vars_of(t)
    if vs:
        raise NonGroundEvaluation(f"cannot evaluate unbound variable {sorted(vs)[0]}")


def eval_ground(t):
    """Public alias matching the operation name used in the docs."""
    return evaluate(t)
