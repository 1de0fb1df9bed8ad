"""Interpretations: finite sets of ground atoms, bucketed by predicate and time."""
from __future__ import annotations

from itertools import chain

from .terms import Atom, atom_key


class Interpretation:
    """Mutable set of ground atoms with a predicate/time index.

    Iteration follows insertion order, so identical inputs give identical
    enumeration orders.
    """

    __slots__ = ("atoms", "by_pred", "times")

    def __init__(self, atoms=()):
        self.atoms = set()
        self.by_pred = {}
        self.times = set()
        if isinstance(atoms, (set, frozenset)):
            atoms = sorted(atoms, key=atom_key)
        for a in atoms:
            self.add(a)

    def add(self, atom: Atom) -> bool:
        if atom in self.atoms:
            return False
        self.atoms.add(atom)
        buckets = self.by_pred.get(atom.pred)
        if buckets is None:
            buckets = self.by_pred[atom.pred] = {}
        t = atom.args[0]
        bucket = buckets.get(t)
        if bucket is None:
            bucket = buckets[t] = []
        bucket.append(atom)
        self.times.add(t)
        return True

    def lookup(self, pred, time=None):
        buckets = self.by_pred.get(pred)
        if not buckets:
            return ()
        if time is None:
            return chain.from_iterable(buckets.values())
        return buckets.get(time, ())

    def copy(self):
        new = Interpretation.__new__(Interpretation)
        new.atoms = set(self.atoms)
        new.by_pred = {p: {t: list(b) for t, b in bs.items()} for p, bs in self.by_pred.items()}
        new.times = set(self.times)
        return new

    def freeze(self) -> frozenset:
        return frozenset(self.atoms)

    def __contains__(self, atom):
        return atom in self.atoms

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __repr__(self):
        return f"Interpretation({len(self.atoms)} atoms)"


def as_interpretation(obj) -> Interpretation:
    if isinstance(obj, Interpretation):
        return obj
    return Interpretation(obj)
