"""Possible-model logic programming over time-stamped atoms."""
from .errors import (ArityError, BindingError, EvaluationError, LimitExceeded, NonGroundEvaluation,
                     ParseError, PmlogError, ProgramError, ProgramRejected, RowError, StaleFact,
                     TypeMismatch, UnsupportedGCI)
from .terms import Atom, Fn, Var, Rule
from .parser import SourceProgram, parse_program, parse_atom, parse_term, parse_body
from .printing import format_atom, format_program, format_rule, format_term
from .stratify import analyze, check_sbtp, compute_strata, build_call_graph
from .matcher import match_body, holds_not
from .interp import Interpretation
from .engine import Engine, Limits, ModelSet, saturate, split_head, verify_model

__version__ = "0.1.0"


def __getattr__(name):
    # sklearn is only needed by the estimator facade
    if name in ("PossibleModels", "KBReasoner"):
        from . import estimators
        return getattr(estimators, name)
    raise AttributeError(name)
