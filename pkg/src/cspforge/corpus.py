"""Standard structures, gadgets and reductions, plus seeded random generators.

Everything random takes an explicit ``random.Random`` so corpora are
reproducible from a seed.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable

from .datalog import (Atom, DatalogInterpretation, DatalogProgram, DDatalogReduction, Rule, UnionGadget, Var,
                      domain_program, identity_reduction, identity_union)
from .gadgets import Gadget, ProjectiveGadget
from .labelcover.instance import LabelCoverInstance, constraint
from .relax.sherali import group_template
from .structures import Homomorphism, Signature, Structure

DIGRAPH = Signature.make(["v"], {"E": ("v", "v")})
OMEGA = Signature.make([], {"C": ()})


def digraph(vertices: Iterable, edges: Iterable[tuple]) -> Structure:
    return Structure(DIGRAPH, {"v": list(vertices)}, {"E": set(map(tuple, edges))})


def graph(vertices: Iterable, edges: Iterable[tuple]) -> Structure:
    """Symmetric digraph: each edge in both directions."""
    es = {tuple(e) for e in edges}
    return digraph(vertices, es | {(b, a) for a, b in es})


def complete_graph(n: int) -> Structure:
    return graph(range(n), [(a, b) for a in range(n) for b in range(a + 1, n)])


def cycle(n: int) -> Structure:
    return graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def directed_cycle(n: int) -> Structure:
    return digraph(range(n), [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Structure:
    """The undirected path with n edges (n + 1 vertices)."""
    return graph(range(n + 1), [(i, i + 1) for i in range(n)])


def single_edge() -> Structure:
    """The undirected edge: two vertices joined in both directions."""
    return graph("uv", [("u", "v")])


def bottom() -> Structure:
    return Structure(OMEGA, {}, {"C": set()})


def top() -> Structure:
    return Structure(OMEGA, {}, {"C": {()}})


def falsity_name(sig: Signature) -> str:
    name = "F"
    while sig.has_symbol(name) or name in sig.types:
        name += "'"
    return name


def with_falsity(A: Structure, asserted: bool = False) -> Structure:
    """A with an extra nullary symbol; false in templates, ``asserted`` for instances that must be rejected."""
    name = falsity_name(A.signature)
    sig = Signature(A.signature.types, A.signature.symbols + ((name, ()),))
    rel = dict(A.relations)
    rel[name] = {()} if asserted else set()
    return Structure(sig, A.domains, rel)


def lift_to(X: Structure, sig: Signature) -> Structure:
    """X over a larger signature, with every new symbol empty."""
    rel = {name: X.relations.get(name, set()) if X.signature.has_symbol(name) else set()
           for name in sig.symbol_names}
    return Structure(sig, {t: X.domains.get(t, ()) for t in sig.types}, rel)


def z2_template() -> Structure:
    return group_template(2, (1,))


def standard_templates() -> dict:
    """Templates used for completeness and bounded-width corpora."""
    return {
        "K2": complete_graph(2),
        "K3": complete_graph(3),
        "Z2": z2_template(),
        "K2+F": with_falsity(complete_graph(2)),
        "K3+F": with_falsity(complete_graph(3)),
    }


# --------------------------------------------------------------------------
# standard gadgets


def _identity(S: Structure) -> Homomorphism:
    return Homomorphism({t: {a: a for a in S.domains[t]} for t in S.signature.types})


def k2_gadget() -> Gadget:
    """Replace each vertex by an edge and each arc by an edge glued crosswise: K2 → K∞ style."""
    K2 = complete_graph(2)
    swap = Homomorphism({"v": {0: 1, 1: 0}})
    return Gadget(DIGRAPH, DIGRAPH, {"v": K2}, {"E": K2}, {("E", 1): _identity(K2), ("E", 2): swap})


def k2_projective_gadget() -> ProjectiveGadget:
    return ProjectiveGadget(DIGRAPH, DIGRAPH, {"v": complete_graph(2)}, {"E": Homomorphism({"v": {0: 1, 1: 0}})})


def path_gadget(length: int = 3) -> Gadget:
    """Replace each arc by a path with ``length`` edges (K5 → C5 for length 3)."""
    star = digraph(["*"], [])
    P = digraph(range(length + 1), [(i, i + 1) for i in range(length)])
    return Gadget(DIGRAPH, DIGRAPH, {"v": star}, {"E": P},
                  {("E", 1): Homomorphism({"v": {"*": 0}}), ("E", 2): Homomorphism({"v": {"*": length}})})


# --------------------------------------------------------------------------
# standard reductions on digraphs


def _vars(t, names: str) -> list:
    return [Var(c, t) for c in names]


def two_colouring_program() -> DatalogProgram:
    """C is derived iff the input digraph has an odd cycle (ignoring directions)."""
    x, y, z, w = _vars("v", "xyzw")
    P = lambda *a: Atom("P", a)
    E = lambda *a: Atom("E", a)
    rules = (Rule(P(x, y), (E(x, y),)), Rule(P(x, y), (E(y, x),)),
             Rule(P(x, y), (P(x, z), P(z, w), P(w, y))), Rule(Atom("C", ()), (P(x, x),)))
    return DatalogProgram(DIGRAPH, (("P", ("v", "v")), ("C", ())), rules, "C")


def _reduction(target: Signature, domains: dict, relations: dict, source: Signature = DIGRAPH,
               union: UnionGadget | None = None) -> DDatalogReduction:
    phi = DatalogInterpretation(source, target, domains, relations)
    return DDatalogReduction(phi, union or identity_union(target))


def _single_rule(out: str, head: tuple, body: tuple, source: Signature = DIGRAPH) -> DatalogProgram:
    return DatalogProgram(source, ((out, tuple(v.type for v in head)),), (Rule(Atom(out, head), body),), out)


def two_colouring_reduction() -> DDatalogReduction:
    return _reduction(OMEGA, {}, {"C": two_colouring_program()})


def loop_reduction() -> DDatalogReduction:
    x = Var("x", "v")
    return _reduction(OMEGA, {}, {"C": _single_rule("L", (), (Atom("E", (x, x)),))})


def line_digraph_reduction() -> DDatalogReduction:
    """Vertices are arcs; (x,y) → (y,z)."""
    x, y, z = _vars("v", "xyz")
    dom = _single_rule("D", (x, y), (Atom("E", (x, y)),))
    rel = _single_rule("F", (x, y, y, z), (Atom("E", (x, y)), Atom("E", (y, z))))
    return _reduction(DIGRAPH, {"v": dom}, {"E": rel})


def symmetrize_reduction() -> DDatalogReduction:
    x, y = _vars("v", "xy")
    rules = (Rule(Atom("S", (x, y)), (Atom("E", (x, y)),)), Rule(Atom("S", (x, y)), (Atom("E", (y, x)),)))
    rel = DatalogProgram(DIGRAPH, (("S", ("v", "v")),), rules, "S")
    return _reduction(DIGRAPH, {"v": domain_program(DIGRAPH, "v")}, {"E": rel})


def transitive_closure_reduction() -> DDatalogReduction:
    x, y, z = _vars("v", "xyz")
    rules = (Rule(Atom("T", (x, y)), (Atom("E", (x, y)),)),
             Rule(Atom("T", (x, z)), (Atom("T", (x, y)), Atom("E", (y, z)))))
    rel = DatalogProgram(DIGRAPH, (("T", ("v", "v")),), rules, "T")
    return _reduction(DIGRAPH, {"v": domain_program(DIGRAPH, "v")}, {"E": rel})


def square_reduction() -> DDatalogReduction:
    x, y, z = _vars("v", "xyz")
    rel = _single_rule("Q", (x, z), (Atom("E", (x, y)), Atom("E", (y, z))))
    return _reduction(DIGRAPH, {"v": domain_program(DIGRAPH, "v")}, {"E": rel})


INCIDENCE = Signature.make(["V", "A"], {"S": ("A", "V"), "T": ("A", "V")})


def subdivision_reduction() -> DDatalogReduction:
    """Each arc (x,y) becomes a new vertex with arcs to x and to y; a two-type interpretation merged by a union."""
    x, y = _vars("v", "xy")
    dom_v = domain_program(DIGRAPH, "v")
    dom_a = _single_rule("D", (x, y), (Atom("E", (x, y)),))
    s = _single_rule("Sr", (x, y, x), (Atom("E", (x, y)),))
    t = _single_rule("Tr", (x, y, y), (Atom("E", (x, y)),))
    phi = DatalogInterpretation(DIGRAPH, INCIDENCE, {"V": dom_v, "A": dom_a}, {"S": s, "T": t})
    return DDatalogReduction(phi, UnionGadget(INCIDENCE, DIGRAPH, {"V": "v", "A": "v"}, {"S": "E", "T": "E"}))


def flag_to_loop_reduction() -> DDatalogReduction:
    """Ω → digraphs: ⊤ becomes a single loop, ⊥ the empty digraph."""
    dom = DatalogProgram(OMEGA, (("D", ()),), (Rule(Atom("D", ()), (Atom("C", ()),)),), "D")
    rel = DatalogProgram(OMEGA, (("L", ()),), (Rule(Atom("L", ()), (Atom("C", ()),)),), "L")
    return _reduction(DIGRAPH, {"v": dom}, {"E": rel}, source=OMEGA)


def reduction_pool() -> dict:
    """Named Datalog∪ reductions over digraphs and Ω, used by the composition and monotonicity suites."""
    return {
        "identity": identity_reduction(DIGRAPH),
        "line": line_digraph_reduction(),
        "symmetrize": symmetrize_reduction(),
        "closure": transitive_closure_reduction(),
        "square": square_reduction(),
        "subdivide": subdivision_reduction(),
        "odd-cycle": two_colouring_reduction(),
        "loop": loop_reduction(),
        "flag": flag_to_loop_reduction(),
        "omega-identity": identity_reduction(OMEGA),
    }


# --------------------------------------------------------------------------
# random generators


def random_structure(sig: Signature, rng: random.Random, max_size: int = 4, density: float = 0.3,
                     min_size: int = 1) -> Structure:
    """Each type gets between min_size and max_size elements; each tuple is kept with probability ``density``."""
    domains = {t: list(range(rng.randint(min_size, max_size))) for t in sig.types}
    relations = {}
    for name, ar in sig.symbols:
        tuples = itertools.product(*(domains[t] for t in ar))
        relations[name] = {tup for tup in tuples if rng.random() < density}
    return Structure(sig, domains, relations)


def random_digraph(rng: random.Random, max_vertices: int = 6, density: float | None = None) -> Structure:
    n = rng.randint(1, max_vertices)
    p = rng.uniform(0.1, 0.5) if density is None else density
    return digraph(range(n), [(a, b) for a in range(n) for b in range(n) if rng.random() < p])


def random_source(sig: Signature, rng: random.Random, max_size: int = 5) -> Structure:
    if sig == OMEGA:
        return top() if rng.random() < 0.5 else bottom()
    return random_structure(sig, rng, max_size=max_size, density=rng.uniform(0.1, 0.45))


def planted_instance(A: Structure, rng: random.Random, size: int = 4, density: float = 0.5) -> tuple:
    """(X, h): X has ``size`` elements per type and only tuples whose h-image lies in A."""
    sig = A.signature
    domains, h = {}, {}
    for t in sig.types:
        if not A.domains[t]:
            domains[t], h[t] = [], {}
            continue
        domains[t] = list(range(size))
        h[t] = {x: rng.choice(A.domains[t]) for x in domains[t]}
    relations = {}
    for name, ar in sig.symbols:
        rel = set()
        if not ar:
            if A.holds(name) and rng.random() < 0.5:
                rel.add(())
        else:
            for tup in itertools.product(*(domains[t] for t in ar)):
                image = tuple(h[t][x] for t, x in zip(ar, tup))
                if image in A.relations[name] and rng.random() < density:
                    rel.add(tup)
        relations[name] = rel
    return Structure(sig, domains, relations), Homomorphism(h)


def homomorphic_pair(rng: random.Random, max_vertices: int = 5) -> tuple:
    """(A, B, h) over digraphs with h: A → B, B a random image of A plus extra arcs."""
    A = random_digraph(rng, max_vertices)
    n = len(A.domains["v"])
    m = rng.randint(1, n)
    h = {a: rng.randrange(m) for a in A.domains["v"]}
    arcs = {(h[a], h[b]) for a, b in A.relations["E"]}
    arcs |= {(a, b) for a in range(m) for b in range(m) if rng.random() < 0.15}
    return A, digraph(range(m), arcs), Homomorphism({"v": h})


def random_label_cover(rng: random.Random, max_variables: int = 3, max_labels: int = 3,
                       max_constraints: int = 3) -> LabelCoverInstance:
    n = rng.randint(1, max_variables)
    variables = [(f"x{i}", list(range(rng.randint(1, max_labels)))) for i in range(n)]
    labels = dict(variables)
    cons = []
    for _ in range(rng.randint(0, max_constraints)):
        u, v = rng.choice(variables)[0], rng.choice(variables)[0]
        cons.append(constraint(u, v, {a: rng.choice(labels[v]) for a in labels[u]}))
    return LabelCoverInstance(variables, cons)


def random_gadget(rng: random.Random) -> Gadget:
    """A digraph gadget whose edge structure contains the two glued images of the node structure."""
    D = random_digraph(rng, max_vertices=2, density=0.3)
    n = rng.randint(1, 4)
    p1 = {d: rng.randrange(n) for d in D.domains["v"]}
    p2 = {d: rng.randrange(n) for d in D.domains["v"]}
    arcs = {(p[a], p[b]) for p in (p1, p2) for a, b in D.relations["E"]}
    arcs |= {(a, b) for a in range(n) for b in range(n) if rng.random() < 0.25}
    S = digraph(range(n), arcs)
    return Gadget(DIGRAPH, DIGRAPH, {"v": D}, {"E": S},
                  {("E", 1): Homomorphism({"v": p1}), ("E", 2): Homomorphism({"v": p2})})


def random_union(rng: random.Random) -> UnionGadget:
    """A union gadget onto digraphs from a random signature with one or two vertex types."""
    types = [f"t{i}" for i in range(rng.randint(1, 2))]
    symbols = {f"E{j}": (rng.choice(types), rng.choice(types)) for j in range(rng.randint(1, 3))}
    sig = Signature.make(types, symbols)
    return UnionGadget(sig, DIGRAPH, {t: "v" for t in types}, {name: "E" for name in symbols})


def universal_output_size(B: Structure, S: LabelCoverInstance) -> int:
    """Elements plus relation tuples of π_B(S) before gluing: Σ_v (Σ_t |B_t|^n + Σ_R |R^B|^n), n = |labels(v)|."""
    bases = [len(B.domains[t]) for t in B.signature.types] + [len(B.relations[r]) for r in B.signature.symbol_names]
    return sum(b ** len(ls) for _, ls in S.variables for b in bases)


def within_size_guard(B: Structure, S: LabelCoverInstance, limit: int = 20000) -> bool:
    return universal_output_size(B, S) <= limit


def tiny_instances(sig: Signature, max_size: int = 2) -> Iterable[Structure]:
    """Every structure over ``sig`` with at most ``max_size`` elements per type (for exhaustive checks)."""
    types = sig.types
    for sizes in itertools.product(range(max_size + 1), repeat=len(types)):
        domains = {t: list(range(s)) for t, s in zip(types, sizes)}
        spaces = []
        for name, ar in sig.symbols:
            spaces.append((name, list(itertools.product(*(domains[t] for t in ar)))))
        choices = [list(itertools.product((0, 1), repeat=len(tuples))) for _, tuples in spaces]
        for pick in itertools.product(*choices):
            rel = {name: {tup for tup, b in zip(tuples, bits) if b} for (name, tuples), bits in zip(spaces, pick)}
            yield Structure(sig, domains, rel)
