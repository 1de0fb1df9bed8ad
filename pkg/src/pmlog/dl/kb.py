"""Knowledge bases and their line-oriented file format.

One declaration per line::

    gci: Person SUBSUMED Or2(Rich, Poor)
    abox: Anne : And2(Person, Poor)
    abox: (Anne, Fred) : father
    functional: father

Concepts use the constructor syntax (``CN("Person")``, ``Exists(RN("father"),
CN("Person"))``) with bare identifiers as shorthand for names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import ParseError, PmlogError, UnsupportedGCI
from ..parser import parse_term
from .concepts import to_concept, to_individual, to_role


class KBSyntaxError(PmlogError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass
class KnowledgeBase:
    tbox: list = field(default_factory=list)  # (sub, sup) concept pairs
    concept_assertions: list = field(default_factory=list)  # (individual, concept)
    role_assertions: list = field(default_factory=list)  # (a, b, role)
    functional: set = field(default_factory=set)  # role terms

    def individuals(self):
        seen = []
        for a, _ in self.concept_assertions:
            if a not in seen:
                seen.append(a)
        for a, b, _ in self.role_assertions:
            for x in (a, b):
                if x not in seen:
                    seen.append(x)
        return seen

    def with_assertion(self, individual, concept):
        return KnowledgeBase(list(self.tbox),
                             self.concept_assertions + [(individual, concept)],
                             list(self.role_assertions), set(self.functional))


_ROLE_ASSERTION = re.compile(r"\(\s*(.+?)\s*,\s*(.+?)\s*\)\s*:\s*(.+)\Z")


def _term(text, line):
    try:
        return parse_term(text)
    except ParseError as e:
        raise KBSyntaxError(line, f"{e}") from None


def parse_assertion(text, line=1):
    """``a : C`` to (individual, concept)."""
    left, sep, right = text.partition(":")
    if not sep:
        raise KBSyntaxError(line, f"expected '<individual> : <concept>', got {text!r}")
    try:
        return to_individual(_term(left.strip(), line)), to_concept(_term(right.strip(), line))
    except UnsupportedGCI as e:
        raise KBSyntaxError(line, str(e)) from None


def parse_kb(text) -> KnowledgeBase:
    kb = KnowledgeBase()
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split("//", 1)[0].strip()
        if not line:
            continue
        kind, sep, rest = line.partition(":")
        kind, rest = kind.strip(), rest.strip()
        if not sep or kind not in ("gci", "abox", "functional"):
            raise KBSyntaxError(n, f"expected gci:, abox: or functional:, got {raw.strip()!r}")
        try:
            if kind == "gci":
                sub, sep2, sup = rest.partition(" SUBSUMED ")
                if not sep2:
                    raise KBSyntaxError(n, "expected '<concept> SUBSUMED <concept>'")
                kb.tbox.append((to_concept(_term(sub.strip(), n)),
                                to_concept(_term(sup.strip(), n))))
            elif kind == "functional":
                role = to_role(_term(rest, n))
                if role.symbol != "RN":
                    raise KBSyntaxError(n, "functional roles must be role names")
                kb.functional.add(role)
            else:
                m = _ROLE_ASSERTION.match(rest)
                if m:
                    a, b, r = (_term(g, n) for g in m.groups())
                    role = to_role(r)
                    if role.symbol != "RN":
                        raise KBSyntaxError(n, "role assertions take role names")
                    kb.role_assertions.append((to_individual(a), to_individual(b), role))
                else:
                    kb.concept_assertions.append(parse_assertion(rest, n))
        except UnsupportedGCI as e:
            raise KBSyntaxError(n, str(e)) from None
    return kb


def load_kb(path) -> KnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read())
