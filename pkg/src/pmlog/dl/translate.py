"""Compiling ALCIF knowledge bases into rule programs plus time-0 facts.

Atoms (time first):
    IsA(t, x, c)          individual x is an instance of concept c
    HasA(t, x, r, y)      role edge, as asserted or created by expansion
    Neighbour(t, x, r, y) HasA closed under role inversion
    Label(t, x, cs)       all concepts of x
    Anc(t, x, y)          x is a tree ancestor of the Skolem individual y
    Blocked(t, y, x)      y is blocked by its ancestor x
    NewLayer(t)           some existential was expanded into layer t

Existential expansion writes into layer t + 1 and is annotated into the top
stratum, so it only runs after blocking is settled for layer t.
"""
from __future__ import annotations

from itertools import count, product

from ..errors import UnsupportedGCI
from ..parser import parse_program, SourceProgram
from ..printing import format_term
from ..terms import Atom, Rule, Var
from .concepts import BOTTOM, TOP, Not, Or2, is_nnf, nnf

LIBRARY = """
// Boolean connectives
IsA(t, x, c1) AND IsA(t, x, c2) :- IsA(t, x, And2(c1, c2)).
IsA(t, x, c1) OR IsA(t, x, c2) :- IsA(t, x, Or2(c1, c2)).

// every individual is an instance of Top; clashes close the path
IsA(t, x, Top()) :- IsA(t, x, c).
FAIL :- IsA(t, x, Not(c)), IsA(t, x, c).
FAIL :- IsA(t, x, Bottom()).

// neighbours in both directions
Neighbour(t, x, r, y) :- HasA(t, x, r, y).
Neighbour(t, y, Inv(r), x) :- HasA(t, x, r, y), MATCH(RN(n), r).
Neighbour(t, y, r, x) :- HasA(t, x, Inv(r), y).

// universal restrictions
IsA(t, y, c) :- IsA(t, x, Forall(r, c)), Neighbour(t, x, r, y).

// existentials over non-functional roles get one successor per filler
HasA(t + 1, x, r, s) AND IsA(t + 1, s, c) AND NewLayer(t + 1) : @preds("TimePlus1") :-
    IsA(t, x, Exists(r, c)), !(functionalRoles contains r),
    NOT(Neighbour(t, x, r, y), IsA(t, y, c)), NOT(Blocked(t, x, _)),
    LET(s, Succ(r, x, c)).

// functional roles: create the single successor, or reuse the existing one
HasA(t + 1, x, r, s) AND IsA(t + 1, s, c) AND NewLayer(t + 1) : @preds("TimePlus1") :-
    IsA(t, x, Exists(r, c)), functionalRoles contains r,
    NOT(Neighbour(t, x, r, y)), NOT(Blocked(t, x, _)),
    LET(s, Succ(r, x)).
IsA(t, y, c) :- IsA(t, x, Exists(r, c)), functionalRoles contains r, Neighbour(t, x, r, y).

// carry the previous layers forward into a new one
IsA(t, x, c) :- NewLayer(t), IsA(p, x, c), p < t.
HasA(t, x, r, y) :- NewLayer(t), HasA(p, x, r, y), p < t.

// blocking
Label(t, x, cs) :- IsA(t, x, Top()), COLLECT(cs, c STH IsA(t, x, c)).
Anc(t, x, y) :- HasA(t, x, r, y), MATCH(Succ(r, x), y).
Anc(t, x, y) :- HasA(t, x, r, y), MATCH(Succ(r, x, c), y).
Anc(t, x, y) :- Anc(t, x, z), HasA(t, z, r, y), MATCH(Succ(r, z), y).
Anc(t, x, y) :- Anc(t, x, z), HasA(t, z, r, y), MATCH(Succ(r, z, c), y).
Blocked(t, y, x) :- Anc(t, x, y), Label(t, y, ly), Label(t, x, lx), ly == lx,
    HasA(t, y1, r, y), HasA(t, x1, r, x), Label(t, y1, ly1), Label(t, x1, lx1), ly1 == lx1.
Blocked(t, y, x) :- Anc(t, x, y), Blocked(t, x, _).
"""


def library_rules(functional=()):
    """The calculus rules, parameterised by the set of functional role names."""
    return parse_program(LIBRARY, "<library>",
                         constants={"functionalRoles": frozenset(functional)})


# -- GCIs ----------------------------------------------------------------------

def _positive_premise(c):
    s = c.symbol
    if s in ("Top", "CN"):
        return True
    if s in ("And2", "Or2"):
        return _positive_premise(c.args[0]) and _positive_premise(c.args[1])
    if s == "Exists":
        return _positive_premise(c.args[1])
    return False


def _premise_bodies(x, c, t, fresh):
    """Alternative bodies (lists of atoms) expressing ``x`` is a ``c`` at ``t``."""
    s = c.symbol
    if s in ("Top", "CN"):
        return [[Atom("IsA", (t, x, c))]]
    if s == "And2":
        left = _premise_bodies(x, c.args[0], t, fresh)
        right = _premise_bodies(x, c.args[1], t, fresh)
        return [a + b for a, b in product(left, right)]
    if s == "Or2":
        return _premise_bodies(x, c.args[0], t, fresh) + _premise_bodies(x, c.args[1], t, fresh)
    if s == "Exists":
        r, d = c.args
        y = Var(f"y{next(fresh)}")
        return [[Atom("Neighbour", (t, x, r, y))] + b for b in _premise_bodies(y, d, t, fresh)]
    raise UnsupportedGCI(f"unexpected premise {format_term(c)}")


def _flatten(c, symbol):
    if c.symbol == symbol:
        return _flatten(c.args[0], symbol) + _flatten(c.args[1], symbol)
    return [c]


def gci_rules(sub, sup):
    """Rules for ``sub`` SUBSUMED ``sup``."""
    sub, sup = nnf(sub), nnf(sup)
    if sub == BOTTOM or sup == TOP:
        return []
    if not _positive_premise(sub):
        # negation or universals in the premise: move everything to the head
        sub, sup = TOP, nnf(Or2(Not(sub), sup))
        if sup == TOP:
            return []
    x, t = Var("x"), Var("t")
    bodies = _premise_bodies(x, sub, t, count(1))
    if sup == BOTTOM:
        heads = [()]
    elif sup.symbol == "Or2":
        heads = [tuple(Atom("IsA", (t, x, d)) for d in _flatten(sup, "Or2"))]
    elif sup.symbol == "And2":
        heads = [(Atom("IsA", (t, x, d)),) for d in _flatten(sup, "And2")]
    else:
        heads = [(Atom("IsA", (t, x, sup)),)]
    return [Rule(h, tuple(b)) for b in bodies for h in heads]


def translate_kb(kb):
    """Program and time-0 facts for ``kb``; satisfiable iff it has a model."""
    functional = sorted(kb.functional, key=format_term)
    lib = library_rules(functional)
    rules = []
    for sub, sup in kb.tbox:
        rules.extend(gci_rules(sub, sup))
    program = SourceProgram(tuple(rules) + tuple(lib.rules), dict(lib.constants), {}, "<kb>")
    facts = []

    def add(a):
        if a not in facts:
            facts.append(a)

    for a in kb.individuals():
        add(Atom("IsA", (0, a, TOP)))
    for a, c in kb.concept_assertions:
        c = nnf(c)
        assert is_nnf(c)
        add(Atom("IsA", (0, a, c)))
    for a, b, r in kb.role_assertions:
        add(Atom("HasA", (0, a, r, b)))
    return program, facts


__all__ = ["LIBRARY", "library_rules", "gci_rules", "translate_kb"]
