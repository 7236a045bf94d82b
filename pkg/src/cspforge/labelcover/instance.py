"""Label cover instances: variables typed by finite label sets, constraints π(u) = v."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping

from ..structures import Signature, SignatureError, Structure, sort_key, sorted_names


def label_set(labels: Iterable) -> tuple:
    """Canonical form of a finite label set (a type of the label cover signature)."""
    return tuple(sorted_names(set(labels)))


@dataclass(frozen=True)
class Constraint:
    """``(source, target)`` is related by the total map ``pairs`` on source labels."""

    source: Hashable
    target: Hashable
    pairs: tuple

    @cached_property
    def mapping(self) -> dict:
        return dict(self.pairs)

    def restricted(self, labels: Iterable) -> "Constraint":
        m = self.mapping
        return Constraint(self.source, self.target, tuple((x, m[x]) for x in labels))


def constraint(u: Hashable, v: Hashable, pi: Mapping) -> Constraint:
    return Constraint(u, v, tuple(sorted(pi.items(), key=lambda kv: sort_key(kv[0]))))


class LabelCoverInstance:
    """Variables with their label sets, plus function-labelled binary constraints."""

    __slots__ = ("variables", "constraints", "_labels")

    def __init__(self, variables: Iterable, constraints: Iterable[Constraint] = ()):
        self.variables = tuple((v, label_set(ls)) for v, ls in variables)
        self._labels = dict(self.variables)
        if len(self._labels) != len(self.variables):
            raise SignatureError("duplicate label cover variable")
        self.constraints = tuple(constraints)
        for c in self.constraints:
            if c.source not in self._labels or c.target not in self._labels:
                raise SignatureError(f"constraint {c.source!r} -> {c.target!r} uses unknown variables")
            m = c.mapping
            if set(m) != set(self._labels[c.source]) or len(m) != len(c.pairs):
                raise SignatureError(f"map of constraint {c.source!r} -> {c.target!r} is not total")
            target = set(self._labels[c.target])
            if not set(m.values()) <= target:
                raise SignatureError(f"map of constraint {c.source!r} -> {c.target!r} leaves the target type")

    def labels(self, v: Hashable) -> tuple:
        return self._labels[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelCoverInstance):
            return NotImplemented
        return self.variables == other.variables and self.constraints == other.constraints

    def __hash__(self) -> int:
        return hash((self.variables, self.constraints))

    def __repr__(self) -> str:
        return f"LabelCoverInstance({len(self.variables)} variables, {len(self.constraints)} constraints)"

    def empty_types(self) -> list:
        return [v for v, ls in self.variables if not ls]

    def signature(self) -> Signature:
        """The finite reduct of the label cover signature this instance lives in."""
        types, symbols = {}, {}
        for _, ls in self.variables:
            types.setdefault(ls, None)
        for c in self.constraints:
            symbols.setdefault(self.symbol(c), None)
        return Signature(tuple(types), tuple((s, (s[1], s[2])) for s in symbols))

    def symbol(self, c: Constraint) -> tuple:
        """Name ``("E", X, Y, images)`` of the relation E_π with π: X → Y."""
        x, y = self._labels[c.source], self._labels[c.target]
        m = c.mapping
        return ("E", x, y, tuple(m[a] for a in x))

    def to_structure(self, signature: Signature | None = None) -> Structure:
        sig = signature or self.signature()
        domains = {t: [] for t in sig.types}
        for v, ls in self.variables:
            domains[ls].append(v)
        relations = {s: set() for s in sig.symbol_names}
        for c in self.constraints:
            relations[self.symbol(c)].add((c.source, c.target))
        return Structure(sig, domains, relations)


def pi_of_symbol(symbol: tuple) -> dict:
    _, x, _, images = symbol
    return dict(zip(x, images))


def label_cover_template(sig: Signature) -> Structure:
    """Finite reduct of the template P: each type X is the set X and E_π is the graph of π."""
    domains = {t: list(t) for t in sig.types}
    relations = {}
    for name, _ in sig.symbols:
        pi = pi_of_symbol(name)
        relations[name] = {(x, pi[x]) for x in name[1]}
    return Structure(sig, domains, relations)
