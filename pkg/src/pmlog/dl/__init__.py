"""ALCIF knowledge bases compiled to rule programs."""
from .concepts import (BOTTOM, CN, RN, TOP, And2, Exists, Forall, Inv, Name, Not, Or2, nnf,
                       to_concept, to_individual, to_role)
from .kb import KBSyntaxError, KnowledgeBase, load_kb, parse_assertion, parse_kb
from .reasoning import (DLResult, ModelView, entailed_by_refutation, entailed_instance,
                        functional_violations, is_satisfiable)
from .translate import gci_rules, library_rules, translate_kb
