import os
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SAMPLES
from oracles import random_program, random_stream
from pmlog import Atom, Engine, Limits, parse_atom, parse_program, saturate, split_head, verify_model
from pmlog.engine import format_trace
from pmlog.errors import LimitExceeded, ProgramRejected, StaleFact


def atoms(*texts):
    return frozenset(parse_atom(t) for t in texts)


def models_of(text, facts=(), **kw):
    return set(saturate(parse_program(text), [parse_atom(f) for f in facts], **kw))


def test_split_head():
    rule = parse_program("a(0) OR c(0) :- b(0).").rules[0]
    a, c = parse_atom("a(0)"), parse_atom("c(0)")
    assert split_head(rule.head, {}) == [[a], [c], [a, c]]
    single = parse_program("a(t) :- b(t).").rules[0]
    assert split_head(single.head, {"t": 0}) == [[parse_atom("a(0)")]]
    fail = parse_program("FAIL :- b(t).").rules[0]
    assert split_head(fail.head, {"t": 0}) is None


def test_split_example():
    with open(os.path.join(SAMPLES, "split.pml"), encoding="utf-8") as fh:
        assert models_of(fh.read()) == {atoms("a(0)", "b(0)"), atoms("a(0)", "b(0)", "c(0)")}


def test_trivial_programs():
    assert models_of("", ["p(0)"]) == {atoms("p(0)")}
    assert models_of("FAIL :- p(t).", ["p(0)"]) == set()


def test_later_time_layers_are_saturated_in_order():
    text = "q(t + 1) :- p(t), t < 3.\np(t) :- q(t).\nlast(t) :- p(t), NOT(p(s), s > t)."
    # the NOT looks forward in time, so the program is rejected
    with pytest.raises(ProgramRejected):
        saturate(parse_program(text))
    text = "q(t + 1) :- p(t), t < 3.\np(t) :- q(t)."
    assert models_of(text, ["p(0)"]) == {atoms("p(0)", "q(1)", "p(1)", "q(2)", "p(2)",
                                             "q(3)", "p(3)")}


def test_negation_sees_earlier_layers():
    text = "seen(t) :- p(t), NOT(p(s), s < t)."
    assert models_of(text, ["p(1)", "p(4)"]) == {atoms("p(1)", "p(4)", "seen(1)")}


TRAFFIC = None


def traffic():
    global TRAFFIC
    if TRAFFIC is None:
        with open(os.path.join(SAMPLES, "traffic.pml"), encoding="utf-8") as fh:
            TRAFFIC = parse_program(fh.read())
    return TRAFFIC


def changes(events):
    return [Atom("Change", e) for e in events]


def test_traffic_snapshot():
    (model,) = saturate(traffic(), changes([(1, 1, "green"), (3, 1, "red"), (3, 2, "green")]))
    assert Atom("State", (3, 1, "red")) in model
    assert Atom("State", (3, 2, "green")) in model
    assert Atom("FullState", (3, frozenset({2}), frozenset({1}))) in model
    assert Atom("Faulty", (3, 1, 1)) in model
    assert Atom("State", (1, 2, "green")) not in model


RICH_POOR = """
Rich(t, x) OR Poor(t, x) :- Person(t, x).
FAIL :- Rich(t, x), Poor(t, x).
FAIL :- Rich(t, x), Broke(t, x).
"""


def test_add_facts_can_close_a_model():
    engine = Engine(parse_program(RICH_POOR))
    first = engine.saturate([parse_atom('Person(0, "bob")')])
    assert len(first) == 2
    assert engine.add_facts([]) == first
    after = engine.add_facts([parse_atom('Broke(0, "bob")')])
    assert list(after) == [atoms('Person(0, "bob")', 'Poor(0, "bob")', 'Broke(0, "bob")')]


def test_add_facts_rejects_the_past():
    engine = Engine(traffic())
    engine.saturate(changes([(1, 1, "green"), (5, 2, "red")]))
    with pytest.raises(StaleFact):
        engine.add_facts(changes([(2, 1, "red")]))


def test_add_facts_at_the_current_time_restarts_the_layer():
    engine = Engine(traffic())
    engine.saturate(changes([(1, 1, "green"), (5, 2, "red")]))
    got = engine.add_facts(changes([(5, 1, "red")]))
    expected = saturate(traffic(), changes([(1, 1, "green"), (5, 2, "red"), (5, 1, "red")]))
    assert got == expected


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(1, 3))
def test_incremental_batches_equal_batch_run(rng, parts):
    events = random_stream(rng, 12)
    times = sorted({t for t, _, _ in events})
    cuts = sorted(rng.sample(times, min(parts, len(times))))
    engine = Engine(traffic())
    engine.saturate([])
    lo = None
    for cut in cuts + [None]:
        batch = [e for e in events if (lo is None or e[0] >= lo) and (cut is None or e[0] < cut)]
        engine.add_facts(changes(batch))
        lo = cut
    assert engine.models == saturate(traffic(), changes(events))


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_models_are_sound(rng):
    text, program, facts = random_program(rng)
    for model in saturate(program, facts):
        assert facts <= model
        assert verify_model(program, model) == []


def test_traffic_models_are_sound():
    rng = random.Random(4)
    for _ in range(10):
        for model in saturate(traffic(), changes(random_stream(rng))):
            assert verify_model(traffic(), model) == []


LINEAGE = """
r(t, x, y) :- p(t, x), q(t, y).
a(t, x) OR b(t, x) :- p(t, x).
c(t, x, y) OR d(t, x, y) :- r(t, x, y), a(t, x).
e(t, x) :- b(t, x), NOT(q(t, x)).
p(t + 1, x) :- c(t, x, y), t < 2.
"""


def test_no_instance_fires_twice_on_a_path():
    events = []
    facts = [parse_atom(f) for f in ("p(0, 1)", "p(0, 2)", "q(0, 1)")]
    models = saturate(parse_program(LINEAGE), facts, trace=events.append)
    assert len(models) > 2
    pids = {e["path"] for e in events}
    leaves = [p for p in pids if not any(q.startswith(p + ".") for q in pids)]
    for leaf in leaves:
        fired = [(e["rule"], e["head"]) for e in events
                 if e["path"] == leaf or leaf.startswith(e["path"] + ".")]
        assert len(fired) == len(set(fired)), leaf


def test_determinism():
    rng = random.Random(9)
    for _ in range(20):
        text, program, facts = random_program(rng)
        a = saturate(program, sorted(facts, key=repr))
        b = saturate(parse_program(text), sorted(facts, key=repr, reverse=True))
        assert list(a) == list(b)


def test_limits():
    program = parse_program("q(t + 1) :- p(t).\np(t) :- q(t).")
    with pytest.raises(LimitExceeded) as info:
        saturate(program, [parse_atom("p(0)")], limits=Limits(max_time=5))
    assert "max_time" in info.value.reason
    with pytest.raises(LimitExceeded):
        saturate(program, [parse_atom("p(0)")], limits=Limits(max_steps=10))
    split = parse_program("a(t) OR b(t) :- p(t).")
    with pytest.raises(LimitExceeded) as info:
        saturate(split, [parse_atom("p(0)")], limits=Limits(max_models=1))
    assert len(info.value.partial) == 1
    # reaching the bound with nothing left to explore is not an error
    assert len(saturate(split, [parse_atom("p(0)")], limits=Limits(max_models=3))) == 3


def test_rejected_program():
    with pytest.raises(ProgramRejected) as info:
        saturate(parse_program("p(t, x) :- q(t, y)."))
    assert info.value.violations[0].condition == "RANGE"


def test_format_trace():
    event = {"path": "0", "time": 3, "stratum": 1, "rule": 2, "head": "a(3)"}
    assert format_trace(event) == "[time 3 / stratum 1] rule#2 fired: a(3)"
