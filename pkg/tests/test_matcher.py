import pytest
from hypothesis import given, settings, strategies as st

from oracles import oracle_matchers, random_matcher_case
from pmlog import Atom, Interpretation, holds_not, match_body, parse_atom, parse_body
from pmlog.errors import NonGroundEvaluation, TypeMismatch
from pmlog.matcher import match_term


def I(*texts):
    return Interpretation([parse_atom(t) for t in texts])


CHANGES = ('Change(1, 1, "green")', 'Change(3, 1, "red")', 'Change(5, 1, "green")')


def matches(interp, body, seed=None):
    return list(match_body(interp, parse_body(body) if isinstance(body, str) else body, seed))


def test_comprehension_picks_latest_at_or_before_bound():
    assert matches(I(*CHANGES), "Change(t <= 4, 1, c)") == [{"t": 3, "c": "red"}]


def test_collect_over_all_instances():
    assert matches(I(*CHANGES), 'COLLECT(cs, id STH Change(t <= 9, id, "green"))') == \
        [{"cs": frozenset({1})}]


def test_empty_body_has_one_matcher():
    assert matches(I(*CHANGES), ()) == [{}]


FAULTY = ('State(time, id, "red"), Change(since < time, id, "green"), '
          'NOT(Change(t, id, "yellow"), since < t, t < time)')


def test_faulty_body():
    facts = ('State(9, 1, "red")', 'Change(2, 1, "green")')
    assert matches(I(*facts, 'Change(6, 1, "yellow")'), FAULTY) == []
    assert matches(I(*facts), FAULTY) == [{"time": 9, "id": 1, "since": 2}]


def test_holds_not():
    assert holds_not(Interpretation(), parse_body("r(s, y), q(s)"))
    assert not holds_not(I('r(1, "a")'), parse_body("r(s, y), s < 3"))
    assert matches(I('q(5, "a")'), "q(t, x), NOT(r(s, x, y), s < t)") == [{"t": 5, "x": "a"}]


def test_greater_than_picks_earliest_after_bound():
    assert matches(I(*CHANGES), "Change(t > 1, 1, c)") == [{"t": 3, "c": "red"}]
    assert matches(I(*CHANGES), "Change(t >= 5, 1, c)") == [{"t": 5, "c": "green"}]
    assert matches(I(*CHANGES), "Change(t < 1, 1, c)") == []


def test_ties_at_the_best_time_are_all_kept():
    got = matches(I("p(4, 1)", "p(4, 2)", "p(2, 3)"), "p(t <= 5, x)")
    assert sorted(g["x"] for g in got) == [1, 2]


def test_inner_condition_filters_candidates():
    got = matches(I("p(4, 1)", "p(2, 3)", "ok(2)"), "p(t <= 5, x) STH ok(t)")
    assert got == [{"t": 2, "x": 3}]


def test_special_forms():
    assert matches(I("p(0, 2)"), "p(t, x), LET(y, x * 10)") == [{"t": 0, "x": 2, "y": 20}]
    assert [g["v"] for g in matches(I(), "CHOOSE(v, {3, 1, 2})")] == [1, 2, 3]
    assert matches(I(), "MATCH(pair(a, b), pair(1, 2))") == [{"a": 1, "b": 2}]
    assert matches(I(), "MATCH(pair(a, a), pair(1, 2))") == []


def test_seed_restricts_matchers():
    assert matches(I("p(0, 1)", "p(0, 2)"), "p(t, x)", {"x": 2}) == [{"t": 0, "x": 2}]


def test_bool_and_int_are_distinct():
    assert matches(I("p(0, true)"), "p(t, 1)") == []


def test_comparing_a_string_time_is_a_type_error():
    with pytest.raises(TypeMismatch):
        matches(I('p("x", 1)'), "p(t <= 3, v)")


def test_match_term_is_one_way():
    s = {}
    assert match_term(parse_body("p(x, 2)")[0].args[0], 7, s) and s == {"x": 7}
    with pytest.raises(NonGroundEvaluation):
        match_term(parse_body("p(x + 1)")[0].args[0], 7, {})


def test_collect_independent_of_insertion_order():
    atoms = [Atom("p", (i % 3, i)) for i in range(10)]
    body = parse_body("COLLECT(s, x STH p(t, x))")
    a = matches(Interpretation(atoms), body)
    b = matches(Interpretation(list(reversed(atoms))), body)
    assert a == b and a[0]["s"] == frozenset(range(10))


def test_no_duplicate_matchers():
    got = matches(I("p(0, 1)", "q(0, 1, 1)", "q(0, 1, 2)"), "p(t, x), NOT(r(t))")
    assert got == [{"t": 0, "x": 1}]


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_matcher_agrees_with_oracle(rng):
    case = random_matcher_case(rng)
    got = [frozenset(g.items()) for g in match_body(Interpretation(case.interp), case.body)]
    assert len(got) == len(set(got))
    assert set(got) == oracle_matchers(case.interp, case.body)


@settings(max_examples=100, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 8), st.integers(1, 3)), max_size=12),
       st.integers(0, 8), st.sampled_from(["<", "<="]))
def test_comprehension_maximality(pairs, bound, op):
    interp = Interpretation([Atom("p", pt) for pt in pairs])
    for g in match_body(interp, parse_body(f"p(t {op} {bound}, x)")):
        t = g["t"]
        later = [u for u, x in pairs if x == g["x"] and u > t]
        assert not [u for u in later if (u < bound if op == "<" else u <= bound)]


@settings(max_examples=100, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(1, 3)), max_size=10),
       st.sets(st.tuples(st.integers(6, 9), st.integers(1, 3)), max_size=6))
def test_results_stable_when_later_atoms_arrive(early, late):
    # NOT, COLLECT and comprehension read only times at or before 5 here
    body = parse_body("now(t), p(s <= t, x), NOT(p(u, 3), u < t), "
                      "COLLECT(c, y STH (p(v, y), v <= t))")
    base = [Atom("now", (5,))] + [Atom("p", e) for e in early]
    before = matches(Interpretation(base), body)
    after = matches(Interpretation(base + [Atom("p", e) for e in late]), body)
    assert before == after
