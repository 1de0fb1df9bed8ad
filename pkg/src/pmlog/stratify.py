"""Call graph, predicate strata and the time/predicate stratification check.

A program is accepted when every rule is range-restricted and, for some
variable ``time`` that is the time term of a positive ordinary body literal,

* every head atom's time is constrained ``>= time``,
* every ordinary or comprehension literal, in every (sub)body, is ``<= time``,
* every such literal under NOT, inside a comprehension or inside a COLLECT is
  either ``< time``, or ``<= time`` with its predicate in a lower stratum than
  the head.

Time-ordering constraints are read syntactically from comparisons between
time terms (variables, integers, ``v + k``, ``v - k``), comprehension bounds,
``LET(v, t + k)`` bindings and equalities; the closure over them is computed
as a small system of difference constraints.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .printing import format_literal, format_rule
from .terms import (Atom, Builtin, Collect, Compr, Let, Not, Op, Var, bound_vars, vars_of)

FAIL_NODE = "FAIL"
POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass
class CallGraph:
    nodes: set = field(default_factory=set)
    edges: set = field(default_factory=set)  # (from, to, polarity)

    def successors(self, node):
        return sorted({t for f, t, _ in self.edges if f == node})

    def adjacency(self):
        adj = {n: set() for n in self.nodes}
        for f, t, _ in self.edges:
            adj[f].add(t)
        return {n: sorted(vs) for n, vs in adj.items()}


@dataclass
class Stratification:
    stratum_of: dict
    sccs: list  # topologically ordered, lowest first

    def __getitem__(self, pred):
        return self.stratum_of[pred]

    def table(self):
        return [(i, scc) for i, scc in enumerate(self.sccs)]


@dataclass(frozen=True)
class Violation:
    rule_index: int  # 0-based; rendered 1-based
    condition: str  # RANGE, SBTP-a, SBTP-b, SBTP-c.i, SBTP-c.ii, SBT
    message: str
    literal: str = None
    pos: tuple = None
    rule_text: str = ""

    def render(self, filename=None):
        where = ""
        if self.pos:
            where = f"{self.pos[0]}:{self.pos[1]}: "
        if filename:
            where = f"{filename}:{where}" if where else f"{filename}: "
        return f"{where}[{self.condition}] rule#{self.rule_index + 1}: {self.message}"

    def as_dict(self, filename=None):
        return {
            "file": filename, "line": self.pos[0] if self.pos else None,
            "col": self.pos[1] if self.pos else None, "condition": self.condition,
            "rule": self.rule_index + 1, "literal": self.literal, "message": self.message,
        }


def head_nodes(rule):
    """Call-graph nodes standing for a rule's head.

    ``@preds("P", ...)`` replaces the head predicates by the named nodes, which
    lets a rule be scheduled after everything its body depends on.
    """
    preds = rule.annotation("preds")
    if preds:
        return tuple(preds)
    if rule.is_fail:
        return (FAIL_NODE,)
    return tuple(dict.fromkeys(h.pred for h in rule.head))


def _body_edges(body, polarity, out):
    for lit in body:
        tp = type(lit)
        if tp is Atom:
            out.append((lit.pred, polarity))
        elif tp is Compr:
            out.append((lit.pred, polarity))
            out.append((lit.pred, NEGATIVE))
            _body_edges(lit.body, polarity, out)
            _body_edges(lit.body, NEGATIVE, out)
        elif tp is Collect:
            _body_edges(lit.body, polarity, out)
            _body_edges(lit.body, NEGATIVE, out)
        elif tp is Not:
            _body_edges(lit.body, NEGATIVE, out)


def build_call_graph(program) -> CallGraph:
    g = CallGraph()
    for rule in program.rules:
        heads = head_nodes(rule)
        g.nodes.update(heads)
        for h in rule.head:
            g.nodes.add(h.pred)
        deps = []
        _body_edges(rule.body, POSITIVE, deps)
        for h in heads:
            for pred, pol in deps:
                g.nodes.add(pred)
                g.edges.add((h, pred, pol))
            for other in heads:
                if other != h:
                    g.edges.add((h, other, POSITIVE))
    for pred in getattr(program, "sorts", {}):
        g.nodes.add(pred)
    return g


def tarjan(nodes, successors):
    """Strongly connected components, each emitted after every component it
    reaches.  Iterative; visits ``nodes`` and successor lists in given order."""
    index, low, on_stack = {}, {}, set()
    stack, out = [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == v:
                        break
                out.append(sorted(scc))
    return out


def compute_strata(graph: CallGraph) -> Stratification:
    adj = graph.adjacency()
    sccs = tarjan(sorted(graph.nodes), lambda n: adj.get(n, ()))
    stratum_of = {}
    for i, scc in enumerate(sccs):
        for n in scc:
            stratum_of[n] = i
    return Stratification(stratum_of, sccs)


def rule_stratum(rule, strata: Stratification) -> int:
    return max(strata[h] for h in head_nodes(rule))


# ---------------------------------------------------------------------------
# range restriction

def positive_body_vars(body) -> set:
    out = set()
    for lit in body:
        out |= bound_vars(lit)
    return out


def check_range_restricted(rule, index=0):
    """Head variables must occur in the positive body; NOT may add extra ones."""
    head_vars = set()
    for h in rule.head:
        head_vars |= vars_of(h)
    missing = head_vars - positive_body_vars(rule.body)
    return [
        Violation(index, "RANGE",
                  f"head variable {v} does not occur in the positive body of {format_rule(rule)}",
                  None, rule.pos, format_rule(rule))
        for v in sorted(missing)
    ]


# ---------------------------------------------------------------------------
# time-ordering constraints

_ZERO = "$0"
_INF = float("inf")


def time_term(t):
    """Normalize a time term to ``(variable or None, offset)``; None if unknown."""
    if type(t) is Var:
        return (t.name, 0)
    if type(t) is int and type(t) is not bool:
        return (None, t)
    if type(t) is Op and len(t.args) == 2 and t.symbol in ("+", "-"):
        left, right = t.args
        if type(right) is int and type(right) is not bool:
            base = time_term(left)
            if base is not None:
                k = right if t.symbol == "+" else -right
                return (base[0], base[1] + k)
        if t.symbol == "+" and type(left) is int and type(left) is not bool:
            base = time_term(right)
            if base is not None:
                return (base[0], base[1] + left)
    return None


def _node(tt):
    return tt[0] if tt[0] is not None else _ZERO


class Constraints:
    """Difference constraints ``x - y <= c`` closed under shortest paths."""

    def __init__(self, facts=()):
        self.facts = list(facts)  # (left tt, op, right tt)
        self._dist = None

    def extend(self, facts):
        return Constraints(self.facts + list(facts))

    def _close(self):
        if self._dist is not None:
            return self._dist
        dist = {}
        nodes = {_ZERO}

        def add(x, y, c):  # x - y <= c, as edge y -> x
            nodes.add(x)
            nodes.add(y)
            if c < dist.get((y, x), _INF):
                dist[(y, x)] = c

        for left, op, right in self.facts:
            # (u + a) op (v + b)
            u, a = _node(left), left[1]
            v, b = _node(right), right[1]
            if op in ("<", "<="):
                add(u, v, b - a - (1 if op == "<" else 0))
            elif op in (">", ">="):
                add(v, u, a - b - (1 if op == ">" else 0))
            elif op == "==":
                add(u, v, b - a)
                add(v, u, a - b)
        for n in nodes:
            dist[(n, n)] = min(dist.get((n, n), 0), 0)
        nodes = sorted(nodes)
        for k in nodes:
            for i in nodes:
                dik = dist.get((i, k), _INF)
                if dik == _INF:
                    continue
                for j in nodes:
                    dkj = dist.get((k, j), _INF)
                    if dik + dkj < dist.get((i, j), _INF):
                        dist[(i, j)] = dik + dkj
        self._dist = dist
        return dist

    def upper(self, tt, time_var):
        """Tightest known bound c with ``tt - time <= c`` (inf if unknown)."""
        x, a = _node(tt), tt[1]
        if x == time_var:
            return a
        d = self._close().get((time_var, x), _INF)
        return d + a

    def lower(self, tt, time_var):
        """Tightest known bound c with ``time - tt <= c``."""
        x, a = _node(tt), tt[1]
        if x == time_var:
            return -a
        d = self._close().get((x, time_var), _INF)
        return d - a


def _comparisons(expr, out):
    if type(expr) is not Op:
        return
    if expr.symbol == "&&":
        for a in expr.args:
            _comparisons(a, out)
        return
    if expr.symbol in ("<", "<=", ">", ">=", "==") and len(expr.args) == 2:
        left, right = (time_term(a) for a in expr.args)
        if left is not None and right is not None:
            out.append((left, expr.symbol, right))


def body_constraints(body):
    out = []
    for lit in body:
        tp = type(lit)
        if tp is Builtin:
            _comparisons(lit.expr, out)
        elif tp is Compr:
            bound = time_term(lit.bound)
            if bound is not None:
                out.append(((lit.var, 0), lit.op, bound))
        elif tp is Let:
            tt = time_term(lit.term)
            if tt is not None:
                out.append(((lit.var, 0), "==", tt))
    return out


def _has_ordinary(body):
    for lit in body:
        tp = type(lit)
        if tp is Atom or tp is Compr:
            return True
        if (tp is Not or tp is Collect) and _has_ordinary(lit.body):
            return True
    return False


def is_initial_rule(rule) -> bool:
    """Rules without ordinary/comprehension literals fire once, before any time."""
    return not _has_ordinary(rule.body)


def time_var_candidates(rule):
    """Time variables of positive ordinary body atoms, in body order.

    Rules whose positive atoms all carry ground integer times fall back to
    those constants as the rule's time.
    """
    seen = []
    for lit in rule.body:
        if type(lit) is Atom and type(lit.args[0]) is Var and lit.args[0].name not in seen:
            seen.append(lit.args[0].name)
    if not seen:
        for lit in rule.body:
            t = lit.args[0] if type(lit) is Atom else None
            if type(t) is int and type(t) is not bool and t not in seen:
                seen.append(t)
    return seen


_PINNED = "$time"


def _check_with_time(rule, index, time_var, strata, sbt_only):
    out = []
    text = format_rule(rule)
    head_stratum = rule_stratum(rule, strata) if strata is not None else None
    base, shown = [], time_var
    if type(time_var) is int:
        base = [((_PINNED, 0), "==", (None, time_var))]
        time_var = _PINNED

    def violation(cond, msg, lit=None):
        out.append(Violation(index, cond, msg, format_literal(lit) if lit is not None else None,
                             rule.pos, text))

    top = Constraints(base + body_constraints(rule.body))
    for h in rule.head:
        tt = time_term(h.args[0])
        if tt is None or top.lower(tt, time_var) > 0:
            violation("SBTP-b", f"head time of {format_literal(h)} is not constrained >= {shown}", h)

    def le(tt, cons):
        return tt is not None and cons.upper(tt, time_var) <= 0

    def lt(tt, cons):
        return tt is not None and cons.upper(tt, time_var) <= -1

    def visit(body, cons, guarded, context):
        cons = cons.extend(body_constraints(body))
        for lit in body:
            tp = type(lit)
            if tp is Atom or tp is Compr:
                tt = time_term(lit.args[0]) if tp is Atom else (lit.var, 0)
                pred = lit.pred
                if not le(tt, cons):
                    violation("SBTP-c.i",
                              f"time of {format_literal(lit)} is not constrained <= {shown}", lit)
                elif guarded or tp is Compr:
                    if lt(tt, cons):
                        pass
                    elif sbt_only:
                        violation("SBT", f"{format_literal(lit)} in {context or 'comprehension'} "
                                         f"is not strictly earlier than {shown}", lit)
                    elif strata is not None and not strata[pred] < head_stratum:
                        violation("SBTP-c.ii",
                                  f"{format_literal(lit)} in {context or 'comprehension'} uses "
                                  f"time <= {shown} but {pred} is not in a lower stratum than the head",
                                  lit)
                if tp is Compr:
                    if sbt_only:
                        violation("SBT", f"comprehension {format_literal(lit)} requires "
                                         "stratification by time and predicates", lit)
                    visit(lit.body, cons, True, "comprehension body")
            elif tp is Collect:
                if sbt_only:
                    violation("SBT", f"{format_literal(lit)} requires stratification by "
                                     "time and predicates", lit)
                visit(lit.body, cons, True, "COLLECT body")
            elif tp is Not:
                visit(lit.body, cons, True, "NOT")

    visit(rule.body, Constraints(base), False, None)
    return out


def check_rule_sbtp(rule, index, strata, sbt_only=False):
    if is_initial_rule(rule):
        out = []
        for h in rule.head:
            if vars_of(h.args[0]):
                out.append(Violation(index, "SBTP-a",
                                     f"rule has no ordinary body literal to fix the time of {format_literal(h)}",
                                     format_literal(h), rule.pos, format_rule(rule)))
        return out, None
    candidates = time_var_candidates(rule)
    if not candidates:
        return [Violation(index, "SBTP-a",
                          "no variable is the time term of a positive ordinary body literal",
                          None, rule.pos, format_rule(rule))], None
    best = None
    for tv in candidates:
        found = _check_with_time(rule, index, tv, strata, sbt_only)
        if not found:
            return [], tv
        if best is None or len(found) < len(best):
            best = found
    return best, None


@dataclass
class Analysis:
    strata: Stratification
    graph: CallGraph
    violations: list
    time_vars: dict  # rule index -> time variable (None for initial rules)

    @property
    def ok(self):
        return not self.violations


def check_sbtp(program, strata=None, sbt_only=False):
    if strata is None:
        strata = compute_strata(build_call_graph(program))
    out = []
    for i, rule in enumerate(program.rules):
        found, _ = check_rule_sbtp(rule, i, strata, sbt_only)
        out.extend(found)
    return out


def analyze(program, sbt_only=False) -> Analysis:
    graph = build_call_graph(program)
    strata = compute_strata(graph)
    violations, time_vars = [], {}
    for i, rule in enumerate(program.rules):
        violations.extend(check_range_restricted(rule, i))
        found, tv = check_rule_sbtp(rule, i, strata, sbt_only)
        violations.extend(found)
        time_vars[i] = tv
    return Analysis(strata, graph, violations, time_vars)


def render_diagnostics(violations, filename=None, as_json=False):
    if as_json:
        return json.dumps([v.as_dict(filename) for v in violations], indent=2)
    return "\n".join(v.render(filename) for v in violations)
