"""Canonical, re-parseable text for terms, atoms, rules and programs."""
from __future__ import annotations

import json

from .builtins import FUNCTIONS
from .terms import (Atom, Builtin, Choose, Collect, Compr, Fn, Let, Match, Not, Op,
                    Rule, Var, term_key)

_INFIX = {"+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=", "&&", "||", "in"}


def format_term(t) -> str:
    tp = type(t)
    if tp is bool:
        return "true" if t else "false"
    if tp is int:
        return str(t)
    if tp is str:
        return json.dumps(t, ensure_ascii=False)
    if tp is Var:
        return t.name
    if tp is Fn:
        return f"{t.symbol}({', '.join(format_term(a) for a in t.args)})"
    if tp is frozenset:
        return "{" + ", ".join(format_term(x) for x in sorted(t, key=term_key)) + "}"
    if tp is tuple:
        return "[" + ", ".join(format_term(x) for x in t) + "]"
    if tp is Op:
        name, args = t.symbol, t.args
        if name in _INFIX and len(args) == 2:
            return f"({format_term(args[0])} {name} {format_term(args[1])})"
        if name == "neg":
            return f"(-{format_term(args[0])})"
        if name == "!":
            return f"!{format_term(args[0])}"
        if name == "set":
            return "{" + ", ".join(format_term(a) for a in args) + "}"
        if name == "seq":
            return "[" + ", ".join(format_term(a) for a in args) + "]"
        if name in FUNCTIONS:
            return f"{name}({', '.join(format_term(a) for a in args)})"
    raise TypeError(f"cannot format {t!r}")


def format_atom(a: Atom) -> str:
    return f"{a.pred}({', '.join(format_term(x) for x in a.args)})"


def format_body(body) -> str:
    return ", ".join(format_literal(b) for b in body)


def format_literal(lit) -> str:
    tp = type(lit)
    if tp is Atom:
        return format_atom(lit)
    if tp is Compr:
        args = "".join(", " + format_term(a) for a in lit.args)
        text = f"{lit.pred}({lit.var} {lit.op} {format_term(lit.bound)}{args})"
        if lit.body:
            text += f" STH ({format_body(lit.body)})"
        return text
    if tp is Builtin:
        return format_term(lit.expr)
    if tp is Let:
        return f"LET({lit.var}, {format_term(lit.term)})"
    if tp is Choose:
        return f"CHOOSE({lit.var}, {format_term(lit.term)})"
    if tp is Match:
        return f"MATCH({format_term(lit.pattern)}, {format_term(lit.term)})"
    if tp is Collect:
        return f"COLLECT({lit.var}, {format_term(lit.template)} STH ({format_body(lit.body)}))"
    if tp is Not:
        return f"NOT({format_body(lit.body)})"
    raise TypeError(f"cannot format {lit!r}")


def format_head(rule: Rule) -> str:
    if rule.is_fail:
        text = "FAIL"
    else:
        text = " OR ".join(format_atom(h) for h in rule.head)
    if rule.annotations:
        anns = " ".join(
            f"@{k}({', '.join(json.dumps(v) for v in vals)})" for k, vals in rule.annotations
        )
        text += f" : {anns}"
    return text


def format_rule(rule: Rule) -> str:
    if rule.body:
        return f"{format_head(rule)} :- {format_body(rule.body)}."
    return f"{format_head(rule)}."


def format_program(program) -> str:
    lines = []
    for name, value in program.constants.items():
        lines.append(f"const {name} = {format_term(value)}.")
    for pred, sorts in program.sorts.items():
        lines.append(f"pred {pred}({', '.join(sorts)}).")
    lines.extend(format_rule(r) for r in program.rules)
    return "\n".join(lines) + ("\n" if lines else "")
