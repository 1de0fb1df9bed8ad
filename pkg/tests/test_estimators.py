import os

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import SAMPLES
from pmlog import KBReasoner, PossibleModels

RICH_POOR = """
Rich(t, x) OR Poor(t, x) :- Person(t, x).
FAIL :- Rich(t, x), Broke(t, x).
"""


def test_params_and_clone():
    est = PossibleModels(program=RICH_POOR, max_models=5)
    assert est.get_params()["max_models"] == 5
    copy = clone(est).set_params(max_time=7)
    assert copy.max_time == 7 and copy.program == RICH_POOR


def test_fit_predict_and_partial_fit():
    est = PossibleModels(program=RICH_POOR).fit(['Person(0, "bob")'])
    assert est.n_models_ == 3
    queries = ['Person(0, "bob")', 'Poor(0, "bob")']
    assert est.predict(queries).tolist() == [True, False]
    assert est.predict_any(queries).tolist() == [True, True]
    est.partial_fit(['Broke(0, "bob")'])
    assert est.n_models_ == 1
    assert est.predict(queries).dtype == np.bool_
    assert est.predict(queries).tolist() == [True, True]


def test_validation():
    with pytest.raises(NotFittedError):
        PossibleModels(program=RICH_POOR).predict(["p(0)"])
    with pytest.raises(ValueError):
        PossibleModels(program=RICH_POOR).fit(["p(t)"])
    with pytest.raises(ValueError):
        PossibleModels(program=RICH_POOR).fit("p(0)")
    with pytest.raises(ValueError):
        PossibleModels(program=42).fit([])


def test_kb_reasoner():
    with open(os.path.join(SAMPLES, "family.kb"), encoding="utf-8") as fh:
        est = KBReasoner().fit(fh.read())
    assert est.satisfiable_
    assert est.predict(["Fred : Poor", "Bob : Rich", ("Anne", "Person")]).tolist() == \
        [True, False, True]
    with pytest.raises(NotFittedError):
        KBReasoner().predict(["a : C"])
