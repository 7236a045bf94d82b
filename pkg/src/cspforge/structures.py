"""Multisorted relational structures and the structure algebra.

Elements are identified by ``(type, name)``; names are arbitrary hashables, so
equal names in different types are different elements.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

import networkx as nx
from networkx.algorithms import isomorphism as nx_iso
from scipy.cluster.hierarchy import DisjointSet


class SignatureError(ValueError):
    """Raised when structures or maps do not fit a signature."""


def sort_key(x: Any) -> tuple:
    """Total order on the hashables used as names (ints < strings < tuples < sets)."""
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, (int, Fraction)):
        return (1, x)
    if isinstance(x, str):
        return (2, x)
    if isinstance(x, tuple):
        return (3, tuple(sort_key(e) for e in x))
    if isinstance(x, frozenset):
        return (4, tuple(sorted(sort_key(e) for e in x)))
    if x is None:
        return (0,)
    return (5, repr(x))


def sorted_names(xs: Iterable[Any]) -> list:
    return sorted(xs, key=sort_key)


@dataclass(frozen=True)
class Signature:
    """Ordered type names plus ordered ``(symbol, arity)`` pairs."""

    types: tuple = ()
    symbols: tuple = ()
    _arity: Mapping = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        types = tuple(self.types)
        symbols = tuple((name, tuple(ar)) for name, ar in self.symbols)
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "symbols", symbols)
        if len(set(types)) != len(types):
            raise SignatureError(f"duplicate type names in {types}")
        names = [name for name, _ in symbols]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate symbol names in {names}")
        known = set(types)
        for name, ar in symbols:
            for t in ar:
                if t not in known:
                    raise SignatureError(f"symbol {name!r} uses undeclared type {t!r}")
        object.__setattr__(self, "_arity", MappingProxyType(dict(symbols)))

    @classmethod
    def make(cls, types: Iterable, symbols: Mapping | Iterable = ()) -> "Signature":
        items = symbols.items() if isinstance(symbols, Mapping) else symbols
        return cls(tuple(types), tuple(items))

    def arity(self, symbol: Hashable) -> tuple:
        try:
            return self._arity[symbol]
        except KeyError:
            raise SignatureError(f"unknown symbol {symbol!r}") from None

    def has_symbol(self, symbol: Hashable) -> bool:
        return symbol in self._arity

    @property
    def symbol_names(self) -> tuple:
        return tuple(name for name, _ in self.symbols)


def check_same_signature(*structures: "Structure") -> Signature:
    sig = structures[0].signature
    for s in structures[1:]:
        if s.signature != sig:
            raise SignatureError("structures have different signatures")
    return sig


class Structure:
    """A finite structure: an ordered domain per type and a relation per symbol.

    Instances are treated as immutable; mappings are exposed read-only.
    """

    __slots__ = ("signature", "domains", "relations", "_index")

    def __init__(self, signature: Signature, domains: Mapping | None = None,
                 relations: Mapping | None = None, *, check: bool = True):
        domains = dict(domains or {})
        relations = dict(relations or {})
        doms = {}
        for t in signature.types:
            elems = tuple(domains.pop(t, ()))
            doms[t] = elems
        if domains:
            raise SignatureError(f"domains given for unknown types {list(domains)}")
        rels = {}
        for name, _ in signature.symbols:
            rels[name] = frozenset(tuple(tup) for tup in relations.pop(name, ()))
        if relations:
            raise SignatureError(f"relations given for unknown symbols {list(relations)}")
        self.signature = signature
        self.domains = MappingProxyType(doms)
        self.relations = MappingProxyType(rels)
        self._index = {t: {a: i for i, a in enumerate(doms[t])} for t in signature.types}
        if check:
            self._validate()

    def _validate(self) -> None:
        for t, elems in self.domains.items():
            if len(self._index[t]) != len(elems):
                raise SignatureError(f"duplicate elements in domain {t!r}")
        for name, ar in self.signature.symbols:
            for tup in self.relations[name]:
                if len(tup) != len(ar):
                    raise SignatureError(f"tuple {tup} has wrong length for {name!r}")
                for a, t in zip(tup, ar):
                    if a not in self._index[t]:
                        raise SignatureError(f"{a!r} is not an element of type {t!r} (in {name!r})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.signature == other.signature and dict(self.domains) == dict(other.domains)
                and dict(self.relations) == dict(other.relations))

    def __hash__(self) -> int:
        return hash((self.signature, tuple(self.domains.items()),
                     tuple((k, v) for k, v in self.relations.items())))

    def __repr__(self) -> str:
        sizes = ", ".join(f"{t}:{len(d)}" for t, d in self.domains.items())
        rels = ", ".join(f"{r}:{len(v)}" for r, v in self.relations.items())
        return f"Structure({sizes}; {rels})"

    def contains(self, t: Hashable, a: Hashable) -> bool:
        return a in self._index[t]

    def position(self, t: Hashable, a: Hashable) -> int:
        return self._index[t][a]

    def elements(self) -> Iterator[tuple]:
        """Type-tagged elements ``(t, a)`` in signature/domain order."""
        for t in self.signature.types:
            for a in self.domains[t]:
                yield (t, a)

    def size(self) -> int:
        return sum(len(d) for d in self.domains.values())

    def holds(self, symbol: Hashable) -> bool:
        """Truth value of a nullary symbol."""
        return () in self.relations[symbol]


@dataclass(frozen=True)
class Homomorphism:
    """Per-type maps ``maps[t][a] = b``."""

    maps: Mapping

    def __call__(self, t: Hashable, a: Hashable) -> Hashable:
        return self.maps[t][a]

    def image(self, symbol_arity: Sequence, tup: Sequence) -> tuple:
        return tuple(self.maps[t][a] for t, a in zip(symbol_arity, tup))

    def compose(self, after: "Homomorphism") -> "Homomorphism":
        """``after ∘ self``."""
        return Homomorphism({t: {a: after.maps[t][b] for a, b in m.items()}
                             for t, m in self.maps.items()})

    def is_valid(self, source: Structure, target: Structure) -> bool:
        sig = check_same_signature(source, target)
        for t in sig.types:
            m = self.maps.get(t, {})
            for a in source.domains[t]:
                if a not in m or not target.contains(t, m[a]):
                    return False
        for name, ar in sig.symbols:
            rel = target.relations[name]
            for tup in source.relations[name]:
                if self.image(ar, tup) not in rel:
                    return False
        return True


# --------------------------------------------------------------------------
# homomorphism search


class _Search:
    """Backtracking over source elements with generalized arc consistency.

    Variables are source elements in signature/domain order; values are target
    positions, tried in domain order unless ``value_order`` reshuffles them.
    """

    def __init__(self, X: Structure, A: Structure, value_order=None):
        self.X, self.A = X, A
        sig = X.signature
        self.var_type = []
        self.var_name = []
        var_id = {}
        for t in sig.types:
            for a in X.domains[t]:
                var_id[(t, a)] = len(self.var_type)
                self.var_type.append(t)
                self.var_name.append(a)
        self.ok = True
        self.domains = []
        for t in self.var_type:
            vals = list(range(len(A.domains[t])))
            if value_order is not None:
                vals = value_order(t, vals)
            self.domains.append(tuple(vals))
        # constraints: (scope of var ids, list of target tuples as positions)
        target_rel = {}
        for name, ar in sig.symbols:
            target_rel[name] = [tuple(A.position(t, b) for t, b in zip(ar, tup))
                                for tup in sorted(A.relations[name], key=sort_key)]
        self.constraints = []
        self.watch = [[] for _ in self.var_type]
        seen = set()
        for name, ar in sig.symbols:
            for tup in X.relations[name]:
                scope = tuple(var_id[(t, a)] for t, a in zip(ar, tup))
                if not scope:
                    if () not in A.relations[name]:
                        self.ok = False
                    continue
                if (name, scope) in seen:
                    continue
                seen.add((name, scope))
                ci = len(self.constraints)
                self.constraints.append((scope, target_rel[name]))
                for v in set(scope):
                    self.watch[v].append(ci)

    def _revise(self, ci: int, doms: list) -> list | None:
        """Return list of (var, new_domain) changes, or None on wipe-out."""
        scope, rel = self.constraints[ci]
        sets = [doms[v] for v in scope]
        support = {v: set() for v in scope}
        for tup in rel:
            good = True
            for i, v in enumerate(scope):
                if tup[i] not in sets[i]:
                    good = False
                    break
            if not good:
                continue
            # repeated variables must take equal values
            assigned = {}
            for i, v in enumerate(scope):
                if assigned.setdefault(v, tup[i]) != tup[i]:
                    good = False
                    break
            if not good:
                continue
            for v, val in assigned.items():
                support[v].add(val)
        changes = []
        for v, sup in support.items():
            if len(sup) < len(doms[v]):
                if not sup:
                    return None
                changes.append((v, sup))
        return changes

    def _propagate(self, doms: list, queue: list) -> bool:
        queue = deque(queue)
        pending = set(queue)
        while queue:
            ci = queue.popleft()
            pending.discard(ci)
            changes = self._revise(ci, doms)
            if changes is None:
                return False
            for v, sup in changes:
                doms[v] = frozenset(sup)
                for cj in self.watch[v]:
                    if cj != ci and cj not in pending:
                        pending.add(cj)
                        queue.append(cj)
        return True

    def solutions(self) -> Iterator[dict]:
        if not self.ok:
            return
        doms = [frozenset(d) for d in self.domains]
        if any(not d for d in doms):
            return
        if not self._propagate(doms, range(len(self.constraints))):
            return
        n = len(self.var_type)
        stack = [(0, doms, None)]
        while stack:
            i, doms, values = stack.pop()
            if values is None:
                while i < n and len(doms[i]) == 1:
                    i += 1
                if i == n:
                    yield self._extract(doms)
                    continue
                values = iter([v for v in self.domains[i] if v in doms[i]])
            for val in values:
                child = list(doms)
                child[i] = frozenset((val,))
                if self._propagate(child, self.watch[i]):
                    stack.append((i, doms, values))
                    stack.append((i + 1, child, None))
                    break

    def _extract(self, doms: list) -> dict:
        maps = {t: {} for t in self.X.signature.types}
        for v, d in enumerate(doms):
            (val,) = d
            t = self.var_type[v]
            maps[t][self.var_name[v]] = self.A.domains[t][val]
        return maps


def iter_homomorphisms(X: Structure, A: Structure, *, value_order=None) -> Iterator[Homomorphism]:
    """All homomorphisms X → A, in lexicographic order of the assignment."""
    check_same_signature(X, A)
    for maps in _Search(X, A, value_order).solutions():
        yield Homomorphism(maps)


def find_homomorphism(X: Structure, A: Structure, *, value_order=None) -> Homomorphism | None:
    return next(iter_homomorphisms(X, A, value_order=value_order), None)


def hom_exists(X: Structure, A: Structure) -> bool:
    return find_homomorphism(X, A) is not None


def is_hom_equivalent(A: Structure, B: Structure) -> bool:
    return hom_exists(A, B) and hom_exists(B, A)


# --------------------------------------------------------------------------
# isomorphism via coloured incidence graphs


def _incidence_graph(A: Structure) -> nx.Graph:
    g = nx.Graph()
    for t, a in A.elements():
        g.add_node(("e", t, a), colour=("e", t))
    for name, ar in A.signature.symbols:
        for tup in A.relations[name]:
            node = ("r", name, tup)
            g.add_node(node, colour=("r", name))
            positions = {}
            for i, (t, a) in enumerate(zip(ar, tup)):
                positions.setdefault(("e", t, a), []).append(i)
            for elem, pos in positions.items():
                g.add_edge(node, elem, pos=tuple(pos))
    return g


def find_isomorphism(A: Structure, B: Structure) -> Homomorphism | None:
    sig = check_same_signature(A, B)
    for t in sig.types:
        if len(A.domains[t]) != len(B.domains[t]):
            return None
    for name in sig.symbol_names:
        if len(A.relations[name]) != len(B.relations[name]):
            return None
    ga, gb = _incidence_graph(A), _incidence_graph(B)
    matcher = nx_iso.GraphMatcher(
        ga, gb,
        node_match=lambda x, y: x["colour"] == y["colour"],
        edge_match=lambda x, y: x["pos"] == y["pos"])
    for mapping in matcher.isomorphisms_iter():
        maps = {t: {} for t in sig.types}
        for node, image in mapping.items():
            if node[0] == "e":
                maps[node[1]][node[2]] = image[2]
        return Homomorphism(maps)
    return None


def is_isomorphic(A: Structure, B: Structure) -> bool:
    return find_isomorphism(A, B) is not None


# --------------------------------------------------------------------------
# constructions


def power(B: Structure, X: Sequence) -> Structure:
    """The power B^X. Elements are tuples indexed by the positions of ``X``."""
    n = len(tuple(X))
    domains = {t: list(itertools.product(B.domains[t], repeat=n)) for t in B.signature.types}
    relations = {}
    for name, ar in B.signature.symbols:
        if not ar:
            relations[name] = {()} if (n == 0 or () in B.relations[name]) else set()
        elif n == 0:
            relations[name] = {tuple(() for _ in ar)}
        else:
            rel = sorted_names(B.relations[name])
            relations[name] = {tuple(zip(*row)) for row in itertools.product(rel, repeat=n)}
    return Structure(B.signature, domains, relations, check=False)


class Partition:
    """Union-find over type-tagged elements; only same-type elements may be merged."""

    def __init__(self, elements: Iterable[tuple] = ()):
        self._ds = DisjointSet(list(elements))

    def add(self, elem: tuple) -> None:
        self._ds.add(elem)

    def union(self, x: tuple, y: tuple) -> None:
        if x[0] != y[0]:
            raise SignatureError(f"cannot equate elements of different types: {x!r}, {y!r}")
        self._ds.merge(x, y)

    def classes(self) -> list[set]:
        return self._ds.subsets()

    def representatives(self) -> dict:
        """Map each element to the lexicographic minimum of its class."""
        rep = {}
        for cls in self._ds.subsets():
            r = min(cls, key=sort_key)
            for e in cls:
                rep[e] = r
        return rep


def quotient(A: Structure, eqs: Iterable[tuple]) -> Structure:
    """Collapse the equations ``((t, a), (t, b))``; classes are named by their minima."""
    part = Partition(A.elements())
    for x, y in eqs:
        part.union(x, y)
    rep = part.representatives()
    domains = {t: sorted_names({rep[(t, a)][1] for a in A.domains[t]}) for t in A.signature.types}
    relations = {}
    for name, ar in A.signature.symbols:
        relations[name] = {tuple(rep[(t, a)][1] for t, a in zip(ar, tup)) for tup in A.relations[name]}
    return Structure(A.signature, domains, relations, check=False)


def disjoint_union(structures: Sequence[Structure]) -> Structure:
    """Tagged disjoint union; element ``a`` of the i-th structure becomes ``(i, a)``."""
    if not structures:
        raise SignatureError("disjoint_union needs at least one structure")
    sig = check_same_signature(*structures)
    domains = {t: [(i, a) for i, S in enumerate(structures) for a in S.domains[t]] for t in sig.types}
    relations = {}
    for name, ar in sig.symbols:
        rel = set()
        for i, S in enumerate(structures):
            rel.update(tuple((i, a) for a in tup) for tup in S.relations[name])
        relations[name] = rel
    return Structure(sig, domains, relations, check=False)


def rename(A: Structure, f) -> Structure:
    """Apply an injective renaming ``f(t, a)`` to every element."""
    domains = {t: [f(t, a) for a in A.domains[t]] for t in A.signature.types}
    relations = {name: {tuple(f(t, a) for t, a in zip(ar, tup)) for tup in A.relations[name]}
                 for name, ar in A.signature.symbols}
    return Structure(A.signature, domains, relations)
