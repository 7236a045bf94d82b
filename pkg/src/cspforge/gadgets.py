"""Gadget replacements, projective gadgets, reification and the universal gadget.

Also compiles gadgets to Datalog∪ reductions: equality of gadget copies is
tracked by binary IDBs ``("I", h1, h2)`` closed under reflexivity, symmetry
and transitivity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import networkx as nx

from .datalog import (Atom, DatalogInterpretation, DatalogProgram, DDatalogReduction, Rule,
                      UnionGadget, Var, compose_ddatalog, eq, identity_union)
from .labelcover.instance import Constraint, LabelCoverInstance, label_set
from .structures import (Partition, Signature, SignatureError, Structure,
                         power, sorted_names)


class GadgetError(ValueError):
    pass


@dataclass(frozen=True)
class Gadget:
    """``nodes[t]`` replaces elements of type t, ``edges[R]`` replaces R-tuples,
    ``glue[(R, i)]`` (i from 1) embeds ``nodes[ar_R(i)]`` into ``edges[R]``."""

    source: Signature
    target: Signature
    nodes: Mapping
    edges: Mapping
    glue: Mapping

    def __post_init__(self) -> None:
        for name in ("nodes", "edges", "glue"):
            object.__setattr__(self, name, MappingProxyType(dict(getattr(self, name))))
        if set(self.nodes) != set(self.source.types):
            raise GadgetError("need one node structure per input type")
        if set(self.edges) != set(self.source.symbol_names):
            raise GadgetError("need one edge structure per input symbol")
        for S in list(self.nodes.values()) + list(self.edges.values()):
            if S.signature != self.target:
                raise GadgetError("gadget structures must use the output signature")
        for name, ar in self.source.symbols:
            for i, t in enumerate(ar, start=1):
                p = self.glue.get((name, i))
                if p is None:
                    raise GadgetError(f"missing gluing map for ({name!r}, {i})")
                if not p.is_valid(self.nodes[t], self.edges[name]):
                    raise GadgetError(f"gluing map for ({name!r}, {i}) is not a homomorphism")


@dataclass(frozen=True)
class ProjectiveGadget:
    """``glue[R]`` maps ``nodes[s]`` into ``nodes[t]`` for ar_R = (t, s)."""

    source: Signature
    target: Signature
    nodes: Mapping
    glue: Mapping

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", MappingProxyType(dict(self.nodes)))
        object.__setattr__(self, "glue", MappingProxyType(dict(self.glue)))
        if set(self.nodes) != set(self.source.types):
            raise GadgetError("need one node structure per input type")
        for S in self.nodes.values():
            if S.signature != self.target:
                raise GadgetError("gadget structures must use the output signature")
        for name, ar in self.source.symbols:
            if len(ar) != 2:
                raise GadgetError(f"projective gadgets need binary symbols; {name!r} has arity {len(ar)}")
            t, s = ar
            p = self.glue.get(name)
            if p is None or not p.is_valid(self.nodes[s], self.nodes[t]):
                raise GadgetError(f"gluing map for {name!r} must be a homomorphism D_{s} -> D_{t}")


def _copy_relations(target: Signature, tag, S: Structure, relations: dict) -> None:
    for name, ar in target.symbols:
        relations[name].update(tuple((tag, a) for a in tup) for tup in S.relations[name])


def _collapse(target: Signature, domains: dict, relations: dict, eqs) -> Structure:
    part = Partition((t, a) for t in target.types for a in domains[t])
    for x, y in eqs:
        part.union(x, y)
    rep = part.representatives()
    out_domains = {t: sorted_names({rep[(t, a)][1] for a in domains[t]}) for t in target.types}
    out_rel = {name: {tuple(rep[(t, a)][1] for t, a in zip(ar, tup)) for tup in relations[name]}
               for name, ar in target.symbols}
    return Structure(target, out_domains, out_rel, check=False)


def apply_gadget(g: Gadget, X: Structure) -> Structure:
    """Element copies ``(("v", t, a), d)``, constraint copies ``(("c", R, tup), e)``, collapsed."""
    if X.signature != g.source:
        raise SignatureError("structure does not match the gadget's input signature")
    sig = g.target
    domains = {t: [] for t in sig.types}
    relations = {name: set() for name in sig.symbol_names}
    for t in g.source.types:
        D = g.nodes[t]
        for a in X.domains[t]:
            tag = ("v", t, a)
            for s in sig.types:
                domains[s].extend((tag, d) for d in D.domains[s])
            _copy_relations(sig, tag, D, relations)
    eqs = []
    for name, ar in g.source.symbols:
        S = g.edges[name]
        for tup in sorted_names(X.relations[name]):
            tag = ("c", name, tup)
            for s in sig.types:
                domains[s].extend((tag, e) for e in S.domains[s])
            _copy_relations(sig, tag, S, relations)
            for i, (t, a) in enumerate(zip(ar, tup), start=1):
                p = g.glue[(name, i)]
                for s in sig.types:
                    for e in g.nodes[t].domains[s]:
                        eqs.append(((s, (tag, p(s, e))), (s, (("v", t, a), e))))
    return _collapse(sig, domains, relations, eqs)


def apply_projective_gadget(g: ProjectiveGadget, X: Structure) -> Structure:
    if X.signature != g.source:
        raise SignatureError("structure does not match the gadget's input signature")
    sig = g.target
    domains = {t: [] for t in sig.types}
    relations = {name: set() for name in sig.symbol_names}
    for t in g.source.types:
        for a in X.domains[t]:
            for s in sig.types:
                domains[s].extend(((t, a), d) for d in g.nodes[t].domains[s])
            _copy_relations(sig, (t, a), g.nodes[t], relations)
    eqs = []
    for name, (t, s_) in g.source.symbols:
        p = g.glue[name]
        for a, b in sorted_names(X.relations[name]):
            for s in sig.types:
                for d in g.nodes[s_].domains[s]:
                    eqs.append(((s, ((t, a), p(s, d))), (s, ((s_, b), d))))
    return _collapse(sig, domains, relations, eqs)


# --------------------------------------------------------------------------
# reification


def reification_names(sig: Signature) -> tuple[dict, dict]:
    """Names of the new type for each symbol and of the symbols P_{R,i}."""
    taken = set(sig.types)
    rtype, psym = {}, {}
    for name, ar in sig.symbols:
        t = name if name not in taken else ("rel", name)
        taken.add(t)
        rtype[name] = t
    sym_taken = set()
    for name, ar in sig.symbols:
        for i in range(1, len(ar) + 1):
            cand = f"P_{name}_{i}" if isinstance(name, str) else ("P", name, i)
            if cand in sym_taken:
                cand = ("P", name, i)
            sym_taken.add(cand)
            psym[(name, i)] = cand
    return rtype, psym


def reification_signature(sig: Signature) -> Signature:
    rtype, psym = reification_names(sig)
    types = sig.types + tuple(rtype[name] for name in sig.symbol_names)
    symbols = tuple((psym[(name, i)], (rtype[name], t))
                    for name, ar in sig.symbols for i, t in enumerate(ar, start=1))
    return Signature(types, symbols)


def reify(X: Structure) -> Structure:
    """Constraint tuples become elements; P_{R,i} links a tuple to its i-th entry."""
    sig = X.signature
    rtype, psym = reification_names(sig)
    rsig = reification_signature(sig)
    domains = {t: list(X.domains[t]) for t in sig.types}
    relations = {}
    for name, ar in sig.symbols:
        tuples = sorted_names(X.relations[name])
        domains[rtype[name]] = tuples
        for i in range(1, len(ar) + 1):
            relations[psym[(name, i)]] = {(tup, tup[i - 1]) for tup in tuples}
    return Structure(rsig, domains, relations, check=False)


def reification_interpretation(sig: Signature) -> DatalogInterpretation:
    rtype, psym = reification_names(sig)
    rsig = reification_signature(sig)
    dom, rel = {}, {}
    for t in sig.types:
        x = Var("x", t)
        dom[t] = DatalogProgram(sig, (("D", (t,)),), (Rule(Atom("D", (x,)), (eq(x, x),)),), "D")
    for name, ar in sig.symbols:
        xs = tuple(Var(f"x{i}", t) for i, t in enumerate(ar, start=1))
        dom[rtype[name]] = DatalogProgram(sig, (("D", ar),), (Rule(Atom("D", xs), (Atom(name, xs),)),), "D")
        for i, t in enumerate(ar, start=1):
            head = Atom("P", xs + (xs[i - 1],))
            rel[psym[(name, i)]] = DatalogProgram(sig, (("P", ar + (t,)),), (Rule(head, (Atom(name, xs),)),), "P")
    return DatalogInterpretation(sig, rsig, dom, rel)


def reification_reduction(sig: Signature) -> DDatalogReduction:
    phi = reification_interpretation(sig)
    return DDatalogReduction(phi, identity_union(phi.target))


def reify_to_label_cover(A: Structure, X: Structure) -> LabelCoverInstance:
    """ρ^A(X): elements typed by A_t, tuples typed by R^A, projections as constraints."""
    if A.signature != X.signature:
        raise SignatureError("template and instance have different signatures")
    sig = X.signature
    variables, constraints = [], []
    for t in sig.types:
        variables.extend(((t, a), A.domains[t]) for a in X.domains[t])
    for name, ar in sig.symbols:
        rel = label_set(A.relations[name])
        for tup in sorted_names(X.relations[name]):
            v = (name, tup)
            variables.append((v, rel))
            for i, t in enumerate(ar):
                constraints.append(Constraint(v, (t, tup[i]), tuple((r, r[i]) for r in rel)))
    return LabelCoverInstance(variables, constraints)


def to_projective(g: Gadget) -> ProjectiveGadget:
    """The projective gadget γ' with γ(X) ≅ γ'(ρ(X))."""
    rtype, psym = reification_names(g.source)
    rsig = reification_signature(g.source)
    nodes = dict(g.nodes)
    glue = {}
    for name, ar in g.source.symbols:
        nodes[rtype[name]] = g.edges[name]
        for i in range(1, len(ar) + 1):
            glue[psym[(name, i)]] = g.glue[(name, i)]
    return ProjectiveGadget(rsig, g.target, nodes, glue)


# --------------------------------------------------------------------------
# the universal gadget


def apply_universal_gadget(B: Structure, S: LabelCoverInstance) -> Structure:
    """π_B(S): a copy of B^X for every variable of type X, glued along b ↦ b∘π."""
    sig = B.signature
    powers: dict = {}
    domains = {t: [] for t in sig.types}
    relations = {name: set() for name in sig.symbol_names}
    for v, labels in S.variables:
        n = len(labels)
        if n not in powers:
            powers[n] = power(B, range(n))
        P = powers[n]
        for t in sig.types:
            domains[t].extend((v, b) for b in P.domains[t])
        _copy_relations(sig, v, P, relations)
    eqs = []
    for c in S.constraints:
        xs, ys = S.labels(c.source), S.labels(c.target)
        pos = {y: j for j, y in enumerate(ys)}
        idx = [pos[c.mapping[x]] for x in xs]
        P = powers[len(ys)]
        for t in sig.types:
            for b in P.domains[t]:
                eqs.append(((t, (c.source, tuple(b[j] for j in idx))), (t, (c.target, b))))
    return _collapse(sig, domains, relations, eqs)


# --------------------------------------------------------------------------
# compiling gadgets to Datalog∪ reductions


def _gadget_points(g: ProjectiveGadget) -> list:
    """The disjoint union of the node structures: points ``(t, σ, d)``."""
    return [(t, s, d) for t in g.source.types for s in g.target.types for d in g.nodes[t].domains[s]]


def compile_projective_gadget(g: ProjectiveGadget) -> DDatalogReduction:
    """A Datalog∪ reduction homomorphically equivalent to ``g``.

    ``("I", h1, h2)(x, y)`` holds iff the copies [x; h1] and [y; h2] are identified.
    """
    pi, sigma = g.source, g.target
    pts = _gadget_points(g)

    def I(h1, h2):
        return ("I", h1, h2)

    idbs = [(I(h1, h2), (h1[0], h2[0])) for h1 in pts for h2 in pts]
    rules = []
    for name, (t, s) in pi.symbols:
        p = g.glue[name]
        x, y = Var("x", t), Var("y", s)
        for h in pts:
            if h[0] == s:
                rules.append(Rule(Atom(I((t, h[1], p(h[1], h[2])), h), (x, y)), (Atom(name, (x, y)),)))
    for h1 in pts:
        x = Var("x", h1[0])
        rules.append(Rule(Atom(I(h1, h1), (x, x)), (eq(x, x),)))
    for h1, h2 in itertools.product(pts, repeat=2):
        x, y = Var("x", h1[0]), Var("y", h2[0])
        rules.append(Rule(Atom(I(h1, h2), (x, y)), (Atom(I(h2, h1), (y, x)),)))
    for h1, h2, h3 in itertools.product(pts, repeat=3):
        x, y, z = Var("x", h1[0]), Var("y", h2[0]), Var("z", h3[0])
        rules.append(Rule(Atom(I(h1, h3), (x, z)), (Atom(I(h1, h2), (x, y)), Atom(I(h2, h3), (y, z)))))
    closure = tuple(rules)

    dom = {}
    for h in pts:
        x = Var("x", h[0])
        dom[h] = DatalogProgram(pi, (("D", (h[0],)),), (Rule(Atom("D", (x,)), (eq(x, x),)),), "D")
    symbols, rel, rmap = [], {}, {}
    for name, ar in sigma.symbols:
        choices = [[h for h in pts if h[1] == s] for s in ar]
        for gtuple in itertools.product(*choices):
            sym = (name, gtuple)
            symbols.append((sym, gtuple))
            rmap[sym] = name
            out = ("R", name, gtuple)
            xs = tuple(Var(f"x{i}", h[0]) for i, h in enumerate(gtuple, start=1))
            out_rules = []
            for s in pi.types:
                D = g.nodes[s]
                y = Var("y", s)
                for tup in sorted_names(D.relations[name]):
                    hs = [(s, sigma_t, d) for sigma_t, d in zip(ar, tup)]
                    body = tuple(Atom(I(gi, hi), (xi, y)) for gi, hi, xi in zip(gtuple, hs, xs))
                    if not body:
                        body = (eq(y, y),)
                    out_rules.append(Rule(Atom(out, xs), body))
            rel[sym] = DatalogProgram(pi, tuple(idbs) + ((out, tuple(h[0] for h in gtuple)),),
                                      closure + tuple(out_rules), out)
    mid = Signature(tuple(pts), tuple(symbols))
    phi = DatalogInterpretation(pi, mid, dom, rel)
    u = UnionGadget(mid, sigma, {h: h[1] for h in pts}, rmap)
    return DDatalogReduction(phi, u)


def compile_gadget(g: Gadget | ProjectiveGadget) -> DDatalogReduction:
    """Datalog∪ reduction for a gadget: reification followed by the projective compilation.

    Projective gadgets are compiled directly, without reification.
    """
    if isinstance(g, ProjectiveGadget):
        return compile_projective_gadget(g)
    return compose_ddatalog(reification_reduction(g.source), compile_projective_gadget(to_projective(g)))


def recursive_predicates(program: DatalogProgram) -> set:
    """IDBs that lie on a cycle of the dependency graph."""
    graph = nx.DiGraph()
    idb = set(program.idb_names)
    for rule in program.rules:
        for atom in rule.body:
            if atom.pred in idb:
                graph.add_edge(atom.pred, rule.head.pred)
    out = set()
    for comp in nx.strongly_connected_components(graph):
        if len(comp) > 1 or any(graph.has_edge(c, c) for c in comp):
            out |= comp
    return out
