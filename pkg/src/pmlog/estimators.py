"""scikit-learn style front ends: fit on facts or a knowledge base, predict entailment."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .dl import KnowledgeBase, entailed_instance, is_satisfiable, parse_assertion, parse_kb
from .dl.concepts import to_concept, to_individual
from .engine import Engine, Limits
from .parser import SourceProgram, parse_atom, parse_program
from .terms import Atom, is_ground


def check_facts(X):
    """Ground atoms from atoms or atom strings; raises ValueError otherwise."""
    if isinstance(X, (str, Atom)):
        raise ValueError("expected a sequence of facts, got a single fact")
    out = []
    for i, x in enumerate(X):
        a = parse_atom(x) if isinstance(x, str) else x
        if type(a) is not Atom or not is_ground(a):
            raise ValueError(f"fact #{i} is not a ground atom: {x!r}")
        out.append(a)
    return out


def check_program(program):
    if isinstance(program, SourceProgram):
        return program
    if isinstance(program, str):
        return parse_program(program)
    raise ValueError(f"program must be source text or a SourceProgram, got {type(program).__name__}")


class PossibleModels(BaseEstimator):
    """Possible models of a fixed program over a growing fact stream.

    ``fit`` saturates from scratch, ``partial_fit`` adds facts at the current
    or a later time, and ``predict`` reports for each query atom whether it
    holds in every model.
    """

    def __init__(self, program=None, max_models=None, max_time=10_000, max_steps=None,
                 sbt_only=False):
        self.program = program
        self.max_models = max_models
        self.max_time = max_time
        self.max_steps = max_steps
        self.sbt_only = sbt_only

    def _limits(self):
        return Limits(self.max_models, self.max_time, self.max_steps)

    def fit(self, X, y=None):
        facts = check_facts(X)
        self.engine_ = Engine(check_program(self.program), limits=self._limits(),
                              sbt_only=self.sbt_only)
        self.models_ = self.engine_.saturate(facts)
        self.n_models_ = len(self.models_)
        return self

    def partial_fit(self, X, y=None):
        if not hasattr(self, "engine_"):
            return self.fit(X, y)
        self.models_ = self.engine_.add_facts(check_facts(X))
        self.n_models_ = len(self.models_)
        return self

    def predict(self, X):
        check_is_fitted(self, "models_")
        queries = check_facts(X)
        return np.array([bool(self.models_) and all(q in m for m in self.models_)
                         for q in queries], dtype=bool)

    def predict_any(self, X):
        """Per query, whether some model contains it."""
        check_is_fitted(self, "models_")
        return np.array([any(q in m for m in self.models_) for q in check_facts(X)], dtype=bool)


def check_kb(kb):
    if isinstance(kb, KnowledgeBase):
        return kb
    if isinstance(kb, str):
        return parse_kb(kb)
    raise ValueError(f"expected a KnowledgeBase or KB text, got {type(kb).__name__}")


def check_queries(X):
    out = []
    for q in X:
        if isinstance(q, str):
            out.append(parse_assertion(q))
        else:
            a, c = q
            out.append((to_individual(a), to_concept(c)))
    return out


class KBReasoner(BaseEstimator):
    """Satisfiability of a knowledge base and instance checks against it."""

    def __init__(self, max_models=None, max_time=10_000, max_steps=None):
        self.max_models = max_models
        self.max_time = max_time
        self.max_steps = max_steps

    def fit(self, X, y=None):
        self.kb_ = check_kb(X)
        self.result_ = is_satisfiable(self.kb_, Limits(self.max_models, self.max_time,
                                                       self.max_steps))
        self.satisfiable_ = self.result_.satisfiable
        self.models_ = self.result_.models
        return self

    def predict(self, X):
        """Per ``"a : C"`` query, whether the KB entails it."""
        check_is_fitted(self, "result_")
        return np.array([entailed_instance(self.kb_, a, c, result=self.result_)
                         for a, c in check_queries(X)], dtype=bool)
