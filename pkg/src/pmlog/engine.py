"""Bottom-up saturation of programs to their possible models.

A path is one partial model candidate.  Each path is driven through time
layers in ascending order and, inside a layer, through the predicate strata in
ascending order.  Rule instances are remembered by fingerprint so the same
(rule, matcher) pair never fires twice on a path.  Disjunctive heads split
the path, and paths are explored depth first, leftmost child first.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

from .errors import LimitExceeded, ProgramRejected, StaleFact
from .interp import Interpretation
from .matcher import match_body
from .printing import format_atom
from .stratify import analyze, is_initial_rule, rule_stratum
from .terms import Atom, apply_subst, atom_key, is_ground

log = logging.getLogger(__name__)

OPEN, EXHAUSTED, CLOSED = "open", "exhausted", "closed"


@dataclass
class Limits:
    max_models: int = None
    max_time: int = 10_000  # time layers per path
    max_steps: int = None  # rule firings over all paths


@dataclass(frozen=True)
class CompiledRule:
    index: int
    rule: object
    stratum: int
    time: object  # variable name, ground int, or None
    initial: bool


class CompiledProgram:
    """A checked program with its rules grouped by stratum."""

    def __init__(self, source, *, check=True, sbt_only=False):
        self.source = source
        self.analysis = analyze(source, sbt_only=sbt_only)
        if check and self.analysis.violations:
            raise ProgramRejected(self.analysis.violations)
        strata = self.analysis.strata
        self.strata = strata
        self.rules = []
        self.initial = []
        by_stratum = {}
        self.ground_times = set()
        for i, rule in enumerate(source.rules):
            initial = is_initial_rule(rule)
            cr = CompiledRule(i, rule, rule_stratum(rule, strata), self.analysis.time_vars.get(i),
                              initial)
            self.rules.append(cr)
            if initial:
                self.initial.append(cr)
                continue
            by_stratum.setdefault(cr.stratum, []).append(cr)
            if type(cr.time) is int:
                self.ground_times.add(cr.time)
        self.order = sorted(by_stratum)
        self.by_stratum = [by_stratum[s] for s in self.order]

    def position_of_pred(self, pred):
        """Index into ``order`` of the first stratum that may use ``pred``."""
        s = self.strata.stratum_of.get(pred)
        if s is None:
            return 0
        for i, o in enumerate(self.order):
            if o >= s:
                return i
        return len(self.order)


class Path:
    __slots__ = ("interp", "applied", "layer", "spos", "status", "clock", "base", "pid",
                 "layers", "started")

    def __init__(self, interp, pid="0"):
        self.interp = interp
        self.applied = set()
        self.layer = None  # current time layer
        self.spos = 0  # position in the stratum order within the layer
        self.status = OPEN
        self.clock = None  # highest layer entered
        self.base = None  # snapshot at the start of the current layer
        self.pid = pid
        self.layers = 0
        self.started = False  # initial rules done

    def copy(self, pid=None):
        new = Path.__new__(Path)
        new.interp = self.interp.copy()
        new.applied = set(self.applied)
        new.layer, new.spos, new.status = self.layer, self.spos, self.status
        new.clock, new.base, new.pid = self.clock, self.base, pid or self.pid
        new.layers, new.started = self.layers, self.started
        return new

    def __repr__(self):
        return f"Path({self.pid}, {self.status}, clock={self.clock}, {len(self.interp)} atoms)"


def model_key(model):
    return tuple(atom_key(a) for a in sorted(model, key=atom_key))


class ModelSet:
    """Duplicate-free set of models, iterated in canonical order."""

    def __init__(self, models=()):
        uniq = {frozenset(m) for m in models}
        self._models = tuple(sorted(uniq, key=model_key))

    def __iter__(self):
        return iter(self._models)

    def __len__(self):
        return len(self._models)

    def __getitem__(self, i):
        return self._models[i]

    def __contains__(self, model):
        return frozenset(model) in set(self._models)

    def __eq__(self, other):
        if isinstance(other, ModelSet):
            return set(self._models) == set(other._models)
        try:
            return set(self._models) == {frozenset(m) for m in other}
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._models))

    def __repr__(self):
        return f"ModelSet({len(self._models)} models)"

    def sorted_atoms(self):
        return [sorted(m, key=atom_key) for m in self._models]


def split_head(head, gamma):
    """Non-empty subsets of the ground head, smallest first; None stands for FAIL."""
    if not head:
        return None
    atoms = []
    for h in head:
        g = apply_subst(gamma, h)
        if g not in atoms:
            atoms.append(g)
    return [list(c) for k in range(1, len(atoms) + 1) for c in combinations(atoms, k)]


def format_trace(event) -> str:
    def show(v):
        return "-" if v is None else v  # initial rules run before any time layer
    return (f"[time {show(event['time'])} / stratum {show(event['stratum'])}] "
            f"rule#{event['rule']} fired: {event['head']}")


def _check_facts(facts):
    out = []
    for f in facts:
        if type(f) is not Atom or not is_ground(f):
            raise ValueError(f"facts must be ground atoms, got {f!r}")
        out.append(f)
    return out


class Engine:
    """Saturates one program; keeps path state for incremental fact addition."""

    def __init__(self, program, *, limits=None, trace=None, check=True, sbt_only=False,
                 incremental=True):
        if not isinstance(program, CompiledProgram):
            program = CompiledProgram(program, check=check, sbt_only=sbt_only)
        self.program = program
        self.limits = limits or Limits()
        self.trace = trace
        self.incremental = incremental
        self.paths = []  # finished paths (exhausted or closed)
        self.steps = 0
        self._found = []
        self._models = ModelSet()

    @property
    def models(self) -> ModelSet:
        return self._models

    def saturate(self, facts=()) -> ModelSet:
        interp = Interpretation()
        for f in _check_facts(facts):
            interp.add(f)
        self.paths = []
        self.steps = 0
        return self._run([Path(interp)])

    def add_facts(self, facts) -> ModelSet:
        """Insert facts at the current or a later time and resume all paths."""
        facts = _check_facts(facts)
        if not facts:
            return self._models
        if not self.incremental:
            raise RuntimeError("engine was created with incremental=False")
        first = min(facts, key=lambda a: a.time)
        tn = first.time
        clocks = [p.clock for p in self.paths if p.clock is not None]
        if clocks and tn < max(clocks):
            raise StaleFact(first, max(clocks))
        stack, restarted = [], set()
        for p in self.paths:
            if p.clock is None or tn > p.clock:
                if p.status == CLOSED:
                    continue
                q = p
            else:
                if p.base is None or id(p.base) in restarted:
                    continue
                restarted.add(id(p.base))
                q = p.base.copy(pid=p.pid)
            for f in facts:
                q.interp.add(f)
            q.status = OPEN
            if q is not p:
                q.base = q.copy()
            stack.append(q)
        self.paths = []
        return self._run(stack)

    # -- driver ---------------------------------------------------------------

    def _run(self, stack):
        stack = list(reversed(stack))
        self._found = []
        limits = self.limits
        while stack:
            path = stack.pop()
            children = self._advance(path)
            if children:
                stack.extend(reversed(children))
                continue
            self.paths.append(path)
            if path.status == EXHAUSTED:
                self._found.append(path.interp.freeze())
                if limits.max_models is not None and stack:
                    if len({m for m in self._found}) >= limits.max_models:
                        self.paths.extend(stack)
                        self._models = ModelSet(self._found)
                        raise LimitExceeded(f"max_models={limits.max_models}", self._models,
                                            stack[-1].pid)
        self._models = ModelSet(self._found)
        return self._models

    def _limit(self, reason, path):
        self._models = ModelSet(self._found)
        raise LimitExceeded(reason, self._models, path.pid)

    def _advance(self, path):
        """Run ``path`` until it is exhausted, closed, or splits (children returned)."""
        prog = self.program
        if not path.started:
            res = self._stratum(path, prog.initial, None, None)
            if res is not None:
                return res
            path.started = True
        while path.status == OPEN:
            if path.layer is not None:
                while path.spos < len(prog.order):
                    pos = path.spos
                    res = self._stratum(path, prog.by_stratum[pos], path.layer, prog.order[pos])
                    if res is not None:
                        return res
                    if path.spos == pos:
                        path.spos += 1
            nxt = self._next_layer(path)
            if nxt is None:
                path.status = EXHAUSTED
                return None
            path.layers += 1
            if path.layers > self.limits.max_time:
                self._limit(f"max_time={self.limits.max_time}", path)
            path.layer, path.spos, path.clock = nxt, 0, nxt
            if self.incremental:
                path.base = None
                path.base = path.copy()
        return None

    def _next_layer(self, path):
        times = path.interp.times | self.program.ground_times
        if path.layer is None:
            return min(times, default=None)
        later = [t for t in times if t > path.layer]
        return min(later, default=None)

    def _instances(self, path, crule, layer):
        tv = crule.time
        if layer is None or tv is None:
            return list(match_body(path.interp, crule.rule.body))
        if type(tv) is int:
            if tv != layer:
                return []
            return list(match_body(path.interp, crule.rule.body))
        return [g for g in match_body(path.interp, crule.rule.body, hint=(tv, layer))
                if g.get(tv) == layer]

    def _stratum(self, path, rules, layer, stratum):
        """Saturate one stratum of one layer.  Returns children on a split, else None."""
        while True:
            progress = False
            disjunctive = None
            for cr in rules:
                for gamma in self._instances(path, cr, layer):
                    fp = (cr.index, frozenset(gamma.items()))
                    if fp in path.applied:
                        continue
                    choices = split_head(cr.rule.head, gamma)
                    if choices is None:
                        self._fire(path, cr, layer, stratum, [], "FAIL")
                        path.status = CLOSED
                        return []
                    if len(choices) == 1:
                        path.applied.add(fp)
                        if self._add(path, cr, layer, stratum, choices[0]):
                            progress = True
                    elif disjunctive is None:
                        disjunctive = (cr, fp, choices)
            if path.status != OPEN:
                return []
            if progress:
                continue
            if disjunctive is None:
                return None
            return self._split(path, layer, stratum, *disjunctive)

    def _split(self, path, layer, stratum, cr, fp, choices):
        seen, children = set(), []
        for choice in choices:
            new = frozenset(a for a in choice if a not in path.interp)
            if new in seen:
                continue
            seen.add(new)
            children.append(choice)
        if len(children) == 1:
            path.applied.add(fp)
            self._add(path, cr, layer, stratum, children[0])
            return [path]  # resume in place
        out = []
        for i, choice in enumerate(children):
            child = path.copy(pid=f"{path.pid}.{i}")
            child.applied.add(fp)
            self._add(child, cr, layer, stratum, choice)
            out.append(child)
        return out

    def _add(self, path, cr, layer, stratum, atoms):
        self.steps += 1
        if self.limits.max_steps is not None and self.steps > self.limits.max_steps:
            self._limit(f"max_steps={self.limits.max_steps}", path)
        added = [a for a in atoms if path.interp.add(a)]
        if self.trace is not None:
            self._fire(path, cr, layer, stratum, atoms, None)
        if layer is not None and added:
            low = min((self.program.position_of_pred(a.pred) for a in added if a.time == layer),
                      default=path.spos)
            if low < path.spos:
                path.spos = low
        return bool(added)

    def _fire(self, path, cr, layer, stratum, atoms, text):
        if self.trace is None:
            return
        self.trace({
            "path": path.pid, "time": layer, "stratum": stratum, "rule": cr.index + 1,
            "head": text or ", ".join(format_atom(a) for a in atoms),
        })


def saturate(program, facts=(), *, limits=None, trace=None, check=True, sbt_only=False):
    """Possible models of ``program`` together with ``facts``."""
    engine = Engine(program, limits=limits, trace=trace, check=check, sbt_only=sbt_only,
                    incremental=False)
    return engine.saturate(facts)


def verify_model(program, model):
    """Rule instances violated by ``model``: (rule index, matcher) pairs.

    A FAIL rule is violated by any matcher; an ordinary rule when no head
    atom of the instance is in the model.
    """
    rules = program.rules if not isinstance(program, CompiledProgram) else program.source.rules
    interp = Interpretation(model)
    bad = []
    for i, rule in enumerate(rules):
        for gamma in match_body(interp, rule.body):
            if rule.is_fail or not any(apply_subst(gamma, h) in interp for h in rule.head):
                bad.append((i, gamma))
    return bad
