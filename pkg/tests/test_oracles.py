"""The oracles themselves, checked on hand-worked cases."""
from oracles import oracle_matchers, oracle_possible_models, traffic_oracle
from pmlog import Atom, parse_atom, parse_body, parse_program


def test_matcher_oracle_hand_cases():
    interp = {parse_atom("p(1, 1)"), parse_atom("p(3, 2)"), parse_atom("p(5, 1)")}
    assert oracle_matchers(interp, parse_body("p(T1 <= 4, V1)")) == {frozenset({("T1", 3), ("V1", 2)})}
    assert oracle_matchers(interp, parse_body("p(T1 > 3, V1)")) == {frozenset({("T1", 5), ("V1", 1)})}
    assert oracle_matchers(interp, parse_body("COLLECT(C1, V1 STH p(T1, V1))")) == \
        {frozenset({("C1", frozenset({1, 2}))})}
    assert oracle_matchers(interp, parse_body("p(T1, V1), NOT(p(T2, V1), T2 < T1)")) == \
        {frozenset({("T1", 1), ("V1", 1)}), frozenset({("T1", 3), ("V1", 2)})}


def test_model_oracle_hand_cases():
    program = parse_program("a(0) :- b(0).\na(0) OR c(0) :- b(0).")
    a, b, c = (Atom(p, (0,)) for p in "abc")
    assert oracle_possible_models(program, {b}) == {frozenset({a, b}), frozenset({a, b, c})}
    program = parse_program("a(t) OR b(t) :- d(t).\nFAIL :- a(t), e(t).\nc(t) :- d(t), NOT(b(t)).")
    d, e = Atom("d", (0,)), Atom("e", (0,))
    assert oracle_possible_models(program, {d, e}) == {frozenset({b, d, e})}
    assert oracle_possible_models(program, {d}) == {frozenset({a, c, d}), frozenset({b, d}),
                                                    frozenset({a, b, d})}


def test_traffic_oracle_hand_case():
    events = [(1, 1, "green"), (3, 1, "yellow"), (5, 1, "red"), (6, 2, "green"), (8, 2, "red")]
    out = traffic_oracle(events)
    assert Atom("State", (5, 1, "red")) in out
    assert Atom("FullState", (6, frozenset({2}), frozenset({1}))) in out
    assert Atom("Faulty", (8, 2, 6)) in out
    assert not any(a.pred == "Faulty" and a.args[1] == 1 for a in out)
    assert Atom("MovingState", (1,)) in out and Atom("MovingState", (6,)) not in out
