import os

import pytest
from hypothesis import given, strategies as st

from conftest import SAMPLES
from pmlog import Atom, analyze, compute_strata, build_call_graph, parse_atom, parse_program, saturate
from pmlog.dl import (BOTTOM, CN, RN, TOP, And2, Exists, Forall, Inv, KBSyntaxError, ModelView,
                      Name, Not, Or2, entailed_by_refutation, entailed_instance,
                      functional_violations, gci_rules, is_satisfiable, load_kb, nnf,
                      parse_assertion, parse_kb, translate_kb)
from pmlog.dl.concepts import is_nnf
from pmlog.engine import Limits
from pmlog.errors import LimitExceeded

C, D = CN("C"), CN("D")
r = RN("r")


def test_nnf_examples():
    assert nnf(Not(And2(C, D))) == Or2(Not(C), Not(D))
    assert nnf(Not(Exists(r, C))) == Forall(r, Not(C))
    assert nnf(Not(Not(C))) == C
    assert nnf(Not(Forall(Inv(r), Or2(C, TOP)))) == BOTTOM


concepts = st.recursive(
    st.sampled_from([C, D, CN("E"), TOP, BOTTOM]),
    lambda inner: st.one_of(
        inner.map(Not),
        st.tuples(inner, inner).map(lambda p: And2(*p)),
        st.tuples(inner, inner).map(lambda p: Or2(*p)),
        st.tuples(st.sampled_from([r, Inv(r)]), inner).map(lambda p: Exists(*p)),
        st.tuples(st.sampled_from([r, Inv(r)]), inner).map(lambda p: Forall(*p)),
    ),
    max_leaves=8,
)


@given(concepts)
def test_nnf_is_idempotent(c):
    once = nnf(c)
    assert is_nnf(once)
    assert nnf(once) == once


@pytest.mark.parametrize("c", [
    Not(And2(C, Exists(r, D))),
    Not(Forall(r, Or2(C, Not(D)))),
    And2(Exists(Inv(r), Not(Not(C))), Not(Or2(D, BOTTOM))),
    Not(Exists(r, Forall(Inv(r), C))),
])
def test_nnf_is_equivalent(c):
    # a : c and not nnf(c) has no model
    kb = parse_kb("abox: a : Top").with_assertion(Name("a"), And2(c, Not(nnf(c))))
    assert not is_satisfiable(kb).satisfiable
    kb = parse_kb("abox: a : Top").with_assertion(Name("a"), c)
    assert is_satisfiable(kb).satisfiable == \
        is_satisfiable(parse_kb("abox: a : Top").with_assertion(Name("a"), nnf(c))).satisfiable


def bodies(rules):
    return [(r.head, frozenset(r.body)) for r in rules]


def test_gci_translation():
    person, rich, poor = CN("Person"), CN("Rich"), CN("Poor")
    expected = parse_program(
        'IsA(t, x, CN("Rich")) OR IsA(t, x, CN("Poor")) :- IsA(t, x, CN("Person")).\n'
        'FAIL :- IsA(t, x, CN("Poor")), IsA(t, x, CN("Rich")).\n'
        'IsA(t, x, Forall(Inv(RN("father")), CN("Rich"))) :- IsA(t, x, CN("Rich")).').rules
    got = (gci_rules(person, Or2(rich, poor)) + gci_rules(And2(rich, poor), BOTTOM)
           + gci_rules(rich, Forall(Inv(RN("father")), rich)))
    assert bodies(got) == bodies(expected)


def test_negative_premise_moves_to_the_head():
    (rule,) = gci_rules(Not(C), D)
    assert rule.body == (parse_atom("IsA(t, x, Top())"),)
    assert len(rule.head) == 2


def run_kb(text, limits=None):
    program, facts = translate_kb(parse_kb(text))
    return saturate(program, facts, limits=limits)


def test_and_rule_decomposes():
    (model,) = run_kb("abox: a : And2(C, D)")
    assert Atom("IsA", (0, Name("a"), C)) in model
    assert Atom("IsA", (0, Name("a"), D)) in model


def test_or_rule_splits():
    models = run_kb("abox: a : Or2(C, D)")
    assert len(models) == 3
    assert {frozenset(c for c in ModelView(m).concepts[Name("a")] if c in (C, D))
            for m in models} == {frozenset({C}), frozenset({D}), frozenset({C, D})}


def test_neighbours_in_both_directions():
    (model,) = run_kb("abox: (a, b) : f")
    a, b, f = Name("a"), Name("b"), RN("f")
    assert Atom("Neighbour", (0, a, f, b)) in model
    assert Atom("Neighbour", (0, b, Inv(f), a)) in model


def test_translated_program_is_accepted_and_layered():
    program, _ = translate_kb(load_kb(os.path.join(SAMPLES, "family.kb")))
    assert analyze(program).ok
    strata = compute_strata(build_call_graph(program))
    for pred in ("Label", "Anc", "Blocked"):
        assert strata[pred] < strata["TimePlus1"]


@pytest.fixture(scope="module")
def family():
    kb = load_kb(os.path.join(SAMPLES, "family.kb"))
    return kb, is_satisfiable(kb)


def test_family_kb(family):
    kb, result = family
    assert result.satisfiable and len(result.models) >= 2
    bob = {ModelView(m).holds(Name("Bob"), CN("Rich")) for m in result.models}
    assert bob == {True, False}
    for m in result.models:
        assert functional_violations(m, kb.functional) == []


@pytest.mark.parametrize("query, expected", [
    ("Fred : Poor", True), ("Bob : Rich", False), ("Bob : Poor", False), ("Anne : Person", True),
    ("Anne : Exists(father, Poor)", True),
])
def test_family_entailment(family, query, expected):
    kb, result = family
    assert entailed_instance(kb, *parse_assertion(query), result=result) is expected


def test_entailment_by_refutation_agrees(family):
    kb, _ = family
    assert entailed_by_refutation(kb, *parse_assertion("Fred : Poor"))
    assert not entailed_by_refutation(kb, *parse_assertion("Bob : Rich"))


def test_fred_rich_is_unsatisfiable(family):
    kb, _ = family
    assert not is_satisfiable(kb.with_assertion(*parse_assertion("Fred : Rich"))).satisfiable


def test_immediate_clash():
    assert not is_satisfiable(parse_kb("abox: a : And2(C, Not(C))")).satisfiable
    assert not is_satisfiable(parse_kb("abox: a : Bottom")).satisfiable


def test_functional_role_reuses_its_filler():
    kb = parse_kb("functional: f\nabox: a : And2(Exists(f, C), Exists(f, D))")
    result = is_satisfiable(kb)
    assert result.satisfiable
    for m in result.models:
        assert functional_violations(m, kb.functional) == []
        view = ModelView(m)
        (filler,) = view.successors(Name("a"), RN("f"))
        assert view.holds(filler, And2(C, D))


def test_functional_role_against_named_filler_and_clash():
    kb = parse_kb("functional: f\nabox: (a, b) : f\nabox: a : Exists(f, Not(C))\nabox: b : C")
    assert not is_satisfiable(kb).satisfiable


def test_blocking_terminates():
    kb = load_kb(os.path.join(SAMPLES, "loop.kb"))
    result = is_satisfiable(kb, Limits(max_time=100))
    assert result.satisfiable
    assert any(a.pred == "Blocked" for m in result.models for a in m)
    assert entailed_instance(kb, Name("a"), Exists(r, Exists(r, TOP)), result=result)


def test_cyclic_kb_with_inverse_and_functional():
    kb = parse_kb("functional: r\ngci: Top SUBSUMED Exists(r, C)\n"
                  "gci: C SUBSUMED Forall(Inv(r), D)\nabox: a : Top")
    result = is_satisfiable(kb, Limits(max_time=100))
    assert result.satisfiable
    for m in result.models:
        assert functional_violations(m, kb.functional) == []
    assert entailed_instance(kb, Name("a"), D, result=result)


def test_tight_time_limit_is_reported():
    with pytest.raises(LimitExceeded):
        is_satisfiable(load_kb(os.path.join(SAMPLES, "loop.kb")), Limits(max_time=1))


def test_kb_syntax_errors():
    with pytest.raises(KBSyntaxError) as info:
        parse_kb("abox: a : C\ngci: C\n")
    assert info.value.line == 2
    with pytest.raises(KBSyntaxError):
        parse_kb("nonsense")
