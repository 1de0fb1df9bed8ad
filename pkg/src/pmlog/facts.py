"""Loading ground facts from CSV files."""
from __future__ import annotations

import csv
import io
import re

from .errors import ParseError, RowError
from .parser import parse_datetime, parse_term
from .terms import Atom, is_ground

_INT = re.compile(r"[+-]?\d+\Z")


def _time(cell):
    cell = cell.strip()
    if _INT.match(cell):
        return int(cell)
    return parse_datetime(cell)


def _guess(cell):
    s = cell.strip()
    if _INT.match(s):
        return int(s)
    if s in ("true", "false"):
        return s == "true"
    return cell


def _convert(cell, sort):
    s = cell.strip()
    if sort in ("int", "time"):
        if _INT.match(s):
            return int(s)
        if sort == "time":
            return parse_datetime(s)
        raise ValueError(f"expected an integer, got {cell!r}")
    if sort in ("str", "string"):
        return cell
    if sort == "bool":
        if s not in ("true", "false"):
            raise ValueError(f"expected true or false, got {cell!r}")
        return s == "true"
    # structured sorts (sets, sequences, constructors) use term syntax
    try:
        value = parse_term(s)
    except ParseError as e:
        raise ValueError(str(e)) from None
    if not is_ground(value):
        raise ValueError(f"cell is not a ground term: {cell!r}")
    return value


def _is_header(row):
    if not row:
        return False
    try:
        _time(row[0])
        return False
    except ValueError:
        return True


def parse_facts_csv(text, pred, sorts=None, header=None):
    """Rows of ``text`` as ground ``pred`` atoms; the first column is the time.

    ``sorts`` (one per column, as in a ``pred`` declaration) drives cell
    conversion; without it integers and booleans are recognised and
    everything else stays a string.  ``header=None`` skips a first row whose
    time cell is not a time.
    """
    rows = list(csv.reader(io.StringIO(text)))
    start = 0
    if header or (header is None and rows and _is_header(rows[0])):
        start = 1
    facts = []
    for n, row in enumerate(rows[start:], start=start + 1):
        if not row or all(not c.strip() for c in row):
            continue
        if sorts is not None and len(row) != len(sorts):
            raise RowError(n, f"expected {len(sorts)} columns for {pred}, got {len(row)}")
        try:
            t = _time(row[0])
            if sorts is None:
                rest = [_guess(c) for c in row[1:]]
            else:
                rest = [_convert(c, s) for c, s in zip(row[1:], sorts[1:])]
        except ValueError as e:
            raise RowError(n, str(e)) from None
        facts.append(Atom(pred, (t, *rest)))
    return facts


def load_facts_csv(path, pred, sorts=None, header=None):
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_facts_csv(fh.read(), pred, sorts, header)
