"""Satisfiability and instance checking on top of the engine."""
from __future__ import annotations

from dataclasses import dataclass

from ..engine import Engine, Limits, ModelSet
from .concepts import nnf
from .translate import translate_kb


@dataclass
class DLResult:
    satisfiable: bool
    models: ModelSet
    witness: frozenset = None


def is_satisfiable(kb, limits=None) -> DLResult:
    """Saturate the translated KB; LimitExceeded propagates as "undecided"."""
    program, facts = translate_kb(kb)
    models = Engine(program, limits=limits or Limits(), incremental=False).saturate(facts)
    return DLResult(len(models) > 0, models, models[0] if len(models) else None)


class ModelView:
    """The final time layer of one model, read as a DL interpretation."""

    def __init__(self, model):
        self.time = max((a.time for a in model), default=0)
        self.concepts = {}
        self.neighbours = {}
        self.blocker = {}
        self.edges = {}
        for a in model:
            if a.time != self.time:
                continue
            if a.pred == "IsA":
                self.concepts.setdefault(a.args[1], set()).add(a.args[2])
            elif a.pred == "Neighbour":
                _, x, r, y = a.args
                self.neighbours.setdefault((x, r), set()).add(y)
            elif a.pred == "HasA":
                _, x, r, y = a.args
                self.edges.setdefault((x, r), set()).add(y)
            elif a.pred == "Blocked":
                _, y, x = a.args
                self.blocker.setdefault(y, x)

    def individuals(self):
        return set(self.concepts)

    def successors(self, x, r):
        out = set(self.neighbours.get((x, r), ()))
        w = self.blocker.get(x)
        if w is not None:
            # a blocked individual borrows the successors of its blocker
            out |= self.edges.get((w, r), set())
        return out

    def holds(self, x, c) -> bool:
        s = c.symbol
        if s == "Top":
            return True
        if s == "Bottom":
            return False
        if s == "CN":
            return c in self.concepts.get(x, ())
        if s == "Not":
            return not self.holds(x, c.args[0])
        if s == "And2":
            return self.holds(x, c.args[0]) and self.holds(x, c.args[1])
        if s == "Or2":
            return self.holds(x, c.args[0]) or self.holds(x, c.args[1])
        r, d = c.args
        succ = self.successors(x, r)
        if s == "Exists":
            return any(self.holds(y, d) for y in succ)
        return all(self.holds(y, d) for y in succ)


def entailed_instance(kb, individual, concept, limits=None, result=None) -> bool:
    """True iff ``individual`` is a ``concept`` in the last layer of every model.

    An unsatisfiable KB entails everything.
    """
    if result is None:
        result = is_satisfiable(kb, limits)
    c = nnf(concept)
    return all(ModelView(m).holds(individual, c) for m in result.models)


def entailed_by_refutation(kb, individual, concept, limits=None) -> bool:
    """Entailment as unsatisfiability of the KB plus ``individual : not concept``."""
    from .concepts import Not
    return not is_satisfiable(kb.with_assertion(individual, Not(concept)), limits).satisfiable


def functional_violations(model, functional):
    """(time, individual, role) triples where a functional role has two fillers."""
    seen = {}
    for a in model:
        if a.pred == "Neighbour" and a.args[2] in functional:
            seen.setdefault((a.args[0], a.args[1], a.args[2]), set()).add(a.args[3])
    return sorted((k for k, v in seen.items() if len(v) > 1), key=repr)
