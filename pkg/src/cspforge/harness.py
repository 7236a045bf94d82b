"""Seeded property suites over random corpora.

Every case draws from its own generator ``Random(f"{suite}:{seed}:{index}")``,
so a single case reruns in isolation with ``--case``.
"""

from __future__ import annotations

import functools
import itertools
import random
import time
import traceback
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import corpus
from .datalog import apply_interpretation, apply_union_gadget, compose_ddatalog, swap_union_interpretation
from .gadgets import (apply_gadget, apply_projective_gadget, apply_universal_gadget, compile_gadget,
                      ProjectiveGadget)
from .labelcover import (LabelCoverInstance, constraint, enforce_arc_consistency, k_consistency_test, pi_of_symbol,
                         sigma_k)
from .minions import (MinionError, adjunction_sides, cokleisli_compose, counit, find_minion_homomorphism, omega,
                      polymorphism_minion, projections_minion)
from .relax import (LinearSystem, affine_system, brute_force_group_system, group_template, lp_feasible,
                    sa_via_label_cover, sherali_adams_system, solve_group_system, structure_to_group_system,
                    tensor_test, tseitin_instance, uniform_witness)
from .relax.intlin import GroupSystem
from .structures import Homomorphism, Structure, find_homomorphism, is_hom_equivalent, is_isomorphic, power
from .textfmt import dumps


@dataclass
class CaseResult:
    index: int
    label: str
    passed: bool
    detail: str = ""
    repro: str = ""


@dataclass
class SuiteReport:
    name: str
    header: str
    seed: int
    cases: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list:
        return [c for c in self.cases if not c.passed]

    def text(self, verbose: bool = False) -> str:
        lines = [f"suite {self.name}: {self.header}",
                 f"seed {self.seed}, {len(self.cases)} cases, {len(self.failures)} failed, {self.runtime:.2f}s"]
        for c in self.cases:
            if verbose or not c.passed:
                lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] #{c.index} {c.label}")
            if not c.passed:
                lines.append(f"    rerun: {c.repro}")
                lines += ["    " + line for line in c.detail.splitlines()]
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"suite": self.name, "header": self.header, "seed": self.seed, "runtime": self.runtime,
                "passed": self.passed,
                "cases": [{"index": c.index, "label": c.label, "passed": c.passed, "detail": c.detail,
                           "repro": c.repro} for c in self.cases]}


class Outcome:
    """What a case returns: a label, a verdict, and objects to print on failure."""

    __slots__ = ("label", "passed", "note", "objects")

    def __init__(self, label: str, passed: bool, note: str = "", **objects):
        self.label, self.passed, self.note, self.objects = label, passed, note, objects


class Redraw(Exception):
    """The drawn case is out of scope; draw again from the same generator."""


@dataclass(frozen=True)
class Suite:
    name: str
    header: str
    cases: int
    run: Callable


SUITES: dict = {}


def suite(name: str, header: str, cases: int):
    def deco(fn):
        SUITES[name] = Suite(name, header, cases, fn)
        return fn
    return deco


def case_rng(name: str, seed: int, index: int) -> random.Random:
    return random.Random(f"{name}:{seed}:{index}")


def _render_failure(out: Outcome) -> str:
    parts = [out.note] if out.note else []
    for key, obj in out.objects.items():
        try:
            parts.append(dumps(obj, key).rstrip())
        except TypeError:
            parts.append(f"{key} = {obj!r}")
    return "\n".join(parts)


def run_case(name: str, seed: int, index: int, max_redraws: int = 200) -> CaseResult:
    s = SUITES[name]
    rng = case_rng(name, seed, index)
    repro = f"cspforge verify {name} --seed {seed} --case {index}"
    try:
        for _ in range(max_redraws):
            try:
                out = s.run(rng, index)
                break
            except Redraw:
                continue
        else:
            return CaseResult(index, "no in-scope draw", False, "every draw was out of scope", repro)
    except Exception:
        return CaseResult(index, "exception", False, traceback.format_exc(), repro)
    detail = "" if out.passed else _render_failure(out)
    return CaseResult(index, out.label, bool(out.passed), detail, repro)


def verify(name: str, seed: int = 0, cases: int | None = None, only: int | None = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    s = SUITES[name]
    report = SuiteReport(name, s.header, seed)
    start = time.perf_counter()
    indices = [only] if only is not None else range(s.cases if cases is None else cases)
    for i in indices:
        report.cases.append(run_case(name, seed, i))
    report.runtime = time.perf_counter() - start
    return report


# --------------------------------------------------------------------------
# shared corpora


@functools.lru_cache(maxsize=None)
def _pool() -> dict:
    return corpus.reduction_pool()


@functools.lru_cache(maxsize=None)
def _composable_pairs() -> list:
    pool = _pool()
    return [(a, b) for a, b in itertools.product(pool, repeat=2) if pool[a].target == pool[b].source]


@functools.lru_cache(maxsize=None)
def _composed(a: str, b: str):
    pool = _pool()
    return compose_ddatalog(pool[a], pool[b])


@functools.lru_cache(maxsize=None)
def _pol(template: str, max_arity: int):
    A = {"K2": corpus.complete_graph(2), "K3": corpus.complete_graph(3), "bottom": corpus.bottom()}[template]
    return polymorphism_minion(A, A, max_arity)


@functools.lru_cache(maxsize=None)
def _projections(max_arity: int):
    return projections_minion(max_arity)


@functools.lru_cache(maxsize=None)
def _compiled(key: str):
    return compile_gadget(_gadgets()[key])


@functools.lru_cache(maxsize=None)
def _gadgets() -> dict:
    return {"K2-projective": corpus.k2_projective_gadget(), "K2": corpus.k2_gadget(), "path3": corpus.path_gadget(3)}


def _omega_pair(rng: random.Random) -> tuple:
    A = corpus.bottom() if rng.random() < 0.5 else corpus.top()
    B = corpus.top() if A == corpus.top() or rng.random() < 0.5 else corpus.bottom()
    return A, B


def _shrink(A: Structure, m: int) -> Structure:
    """The substructure induced on the first m elements of every type."""
    doms = {t: A.domains[t][:m] for t in A.signature.types}
    keep = {t: set(d) for t, d in doms.items()}
    rel = {name: {tup for tup in A.relations[name] if all(a in keep[t] for t, a in zip(ar, tup))}
           for name, ar in A.signature.symbols}
    return Structure(A.signature, doms, rel)


# --------------------------------------------------------------------------
# suites


@suite("monotone", "homomorphisms are preserved by pool reductions, union gadgets and gadgets: "
       "A -> B implies F(A) -> F(B)", 100)
def _monotone(rng: random.Random, index: int) -> Outcome:
    A, B, h = corpus.homomorphic_pair(rng)
    assert h.is_valid(A, B)
    bad = []
    for name, r in _pool().items():
        X, Y = (A, B) if r.source == corpus.DIGRAPH else _omega_pair(rng)
        if find_homomorphism(apply_interpretation(r.interpretation, X),
                             apply_interpretation(r.interpretation, Y)) is None:
            bad.append(f"interpretation {name}")
        if find_homomorphism(r.apply(X), r.apply(Y)) is None:
            bad.append(f"reduction {name}")
    u = corpus.random_union(rng)
    U = corpus.random_structure(u.source, rng, max_size=3, density=0.3)
    V = Structure(u.source, U.domains, {s: set(U.relations[s]) | {tup for tup in itertools.product(
        *(U.domains[t] for t in ar)) if rng.random() < 0.2} for s, ar in u.source.symbols})
    if find_homomorphism(apply_union_gadget(u, U), apply_union_gadget(u, V)) is None:
        bad.append("union gadget")
    g = corpus.random_gadget(rng)
    if find_homomorphism(apply_gadget(g, A), apply_gadget(g, B)) is None:
        bad.append("gadget")
    return Outcome(f"{A.size()}->{B.size()} vertices", not bad, "no homomorphism for: " + ", ".join(bad),
                   A=A, B=B)


@suite("composition", "composing two reductions matches applying them in sequence, up to isomorphism", 124)
def _composition(rng: random.Random, index: int) -> Outcome:
    pairs = _composable_pairs()
    a, b = pairs[index % len(pairs)]
    pool = _pool()
    X = corpus.random_source(pool[a].source, rng)
    sequential = pool[b].apply(pool[a].apply(X))
    composed = _composed(a, b).apply(X)
    return Outcome(f"{a} then {b}", is_isomorphic(composed, sequential), X=X)


@suite("swap", "moving a union gadget past an interpretation preserves the output up to isomorphism", 100)
def _swap(rng: random.Random, index: int) -> Outcome:
    u = corpus.random_union(rng)
    names = [n for n, r in _pool().items() if r.source == corpus.DIGRAPH]
    name = rng.choice(names)
    phi = _pool()[name].interpretation
    phi2, u2 = swap_union_interpretation(u, phi)
    A = corpus.random_structure(u.source, rng, max_size=3, density=rng.uniform(0.1, 0.5))
    left = apply_interpretation(phi, apply_union_gadget(u, A))
    right = apply_union_gadget(u2, apply_interpretation(phi2, A))
    return Outcome(f"union into {name}", is_isomorphic(left, right), A=A, union=u)


@suite("gadget-compile", "a compiled gadget is homomorphically equivalent to the gadget; "
       "the compiled K2 gadget maps C4 to K_{4,4}", 201)
def _gadget_compile(rng: random.Random, index: int) -> Outcome:
    if index == 0:
        out = _compiled("K2-projective").apply(corpus.cycle(4))
        K44 = corpus.graph(range(8), [(a, b) for a in range(4) for b in range(4, 8)])
        ok = is_isomorphic(out, K44) and is_hom_equivalent(out, corpus.single_edge())
        return Outcome("C4 -> K_{4,4}", ok, output=out)
    X = corpus.random_digraph(rng, max_vertices=6)
    key = rng.choice(sorted(_gadgets()) + ["random"])
    if key == "random":
        g = corpus.random_gadget(rng)
        reduction = compile_gadget(g)
    else:
        g = _gadgets()[key]
        reduction = _compiled(key)
    direct = apply_projective_gadget(g, X) if isinstance(g, ProjectiveGadget) else apply_gadget(g, X)
    ok = is_hom_equivalent(direct, reduction.apply(X))
    # the compiled K2 gadget is checked on every drawn digraph
    k2 = _gadgets()["K2-projective"]
    ok_k2 = is_hom_equivalent(apply_projective_gadget(k2, X), _compiled("K2-projective").apply(X))
    return Outcome(f"{key} on {X.size()} vertices", ok and ok_k2, f"{key}={ok} K2={ok_k2}", X=X)


def _random_projective(rng: random.Random, S: LabelCoverInstance, B: Structure) -> ProjectiveGadget:
    """Node D_X is a random part of B^X closed under the gluing maps b -> b∘π."""
    sig = S.signature()
    nodes = {X: power(B, range(len(X))) for X in sig.types}
    (vt,) = B.signature.types
    keep = {X: {tup for tup in P.relations["E"] if rng.random() < 0.4} for X, P in nodes.items()}
    pis = []
    for name, (X, Y) in sig.symbols:
        pos = {y: j for j, y in enumerate(Y)}
        pi = pi_of_symbol(name)
        idx = tuple(pos[pi[x]] for x in X)
        pis.append((name, X, Y, idx))
    changed = True
    while changed:
        changed = False
        for name, X, Y, idx in pis:
            for a, b in list(keep[Y]):
                img = (tuple(a[j] for j in idx), tuple(b[j] for j in idx))
                if img not in keep[X]:
                    keep[X].add(img)
                    changed = True
    nodes = {X: Structure(B.signature, P.domains, {"E": keep[X]}) for X, P in nodes.items()}
    glue = {name: Homomorphism({vt: {b: tuple(b[j] for j in idx) for b in nodes[Y].domains[vt]}})
            for name, X, Y, idx in pis}
    return ProjectiveGadget(sig, B.signature, nodes, glue)


def _sub_instance(rng: random.Random, T: LabelCoverInstance) -> LabelCoverInstance:
    """S with a homomorphism S -> T: each variable copies the type of its image."""
    tv = [v for v, _ in T.variables]
    image = {f"s{i}": rng.choice(tv) for i in range(rng.randint(1, 3))}
    variables = [(s, T.labels(v)) for s, v in image.items()]
    cons = []
    for c in T.constraints:
        for s1, v1 in image.items():
            for s2, v2 in image.items():
                if (v1, v2) == (c.source, c.target) and rng.random() < 0.7:
                    cons.append(constraint(s1, s2, c.mapping))
    return LabelCoverInstance(variables, cons)


@suite("universality", "gadgets with gamma(P) -> B satisfy gamma(S) -> pi_B(S); "
       "S -> T implies pi_B(S) -> pi_B(T)", 100)
def _universality(rng: random.Random, index: int) -> Outcome:
    B = corpus.complete_graph(rng.choice([2, 3]))
    if index % 2 == 0:
        S = corpus.random_label_cover(rng, max_variables=3, max_labels=2, max_constraints=3)
        g = _random_projective(rng, S, B)
        sig = S.signature()
        P = _projections(2).as_structure(sig)
        if find_homomorphism(apply_projective_gadget(g, P), B) is None:
            raise Redraw
        ok = find_homomorphism(apply_projective_gadget(g, S.to_structure(sig)), apply_universal_gadget(B, S))
        return Outcome(f"gadget into K{len(B.domains['v'])}", ok is not None, S=S, gadget=g)
    T = corpus.random_label_cover(rng, max_variables=3, max_labels=3, max_constraints=3)
    S = _sub_instance(rng, T)
    ok = find_homomorphism(apply_universal_gadget(B, S), apply_universal_gadget(B, T))
    return Outcome(f"S -> T over K{len(B.domains['v'])}", ok is not None, S=S, T=T)


_TEMPLATE_NAMES = ("K2", "K3", "Z2", "K2+F", "K3+F")


@functools.lru_cache(maxsize=None)
def _templates() -> dict:
    return corpus.standard_templates()


@suite("completeness", "a planted homomorphism X -> A gives k-consistency output -> B "
       "and a feasible 0-1 Sherali-Adams point", 100)
def _completeness(rng: random.Random, index: int) -> Outcome:
    name = rng.choice(_TEMPLATE_NAMES)
    A = _templates()[name]
    k = rng.choice([2, 3])
    X, h = corpus.planted_instance(A, rng, size=rng.randint(2, 4), density=rng.uniform(0.3, 0.8))
    S = enforce_arc_consistency(sigma_k(A, X, k))
    # B = A when π_B(S) fits the size guard, otherwise the largest induced piece of A that does
    B = A
    m = max((len(d) for d in A.domains.values()), default=0)
    while not corpus.within_size_guard(B, S) and m > 0:
        m -= 1
        B = _shrink(A, m)
    if not corpus.within_size_guard(B, S):
        raise Redraw
    out = apply_universal_gadget(B, S)
    ok_gadget = find_homomorphism(out, B) is not None
    L = sherali_adams_system(A, k, X)
    hm = {(t, x): h(t, x) for t, x in X.elements()}
    indicator = {}
    for K, f in L.variables:
        indicator[(K, f)] = 1 if all(hm[e] == a for e, a in zip(K, f)) else 0
    ok_sa = L.satisfied_by(indicator)
    label = f"{name}, k={k}, |X|={X.size()}, B={'A' if B is A else f'A|{m}'}"
    return Outcome(label, ok_gadget and ok_sa, f"gadget={ok_gadget} indicator={ok_sa}", X=X)


@suite("bounded-width", "the k-consistency reduction into bottom yields bottom exactly when the "
       "k-consistency test accepts", 100)
def _bounded_width(rng: random.Random, index: int) -> Outcome:
    name = rng.choice(_TEMPLATE_NAMES)
    A = _templates()[name]
    k = rng.choice([2, 3])
    if rng.random() < 0.5:
        X, _ = corpus.planted_instance(A, rng, size=rng.randint(2, 4), density=rng.uniform(0.3, 0.8))
    else:
        X = corpus.random_structure(A.signature, rng, max_size=4, density=rng.uniform(0.1, 0.6))
    bot = corpus.bottom()
    out = apply_universal_gadget(bot, enforce_arc_consistency(sigma_k(A, X, k)))
    accept = k_consistency_test(A, k, X)
    return Outcome(f"{name}, k={k}, accept={accept}", (out == bot) == accept, X=X)


_SA_GRID = [("K2", 2), ("K2", 3), ("K3", 2), ("K3", 3)]


@suite("sa-equivalence", "Sherali-Adams level k is feasible exactly when the convex relaxation of the "
       "arc-consistent k-th label cover is feasible", 402)
def _sa_equivalence(rng: random.Random, index: int) -> Outcome:
    K2 = corpus.complete_graph(2)
    C3 = corpus.cycle(3)
    if index in (0, 1):
        k = 2 + index
        res = lp_feasible(sherali_adams_system(K2, k, C3))
        want = index == 0
        return Outcome(f"C3 over K2 at level {k}: {'feasible' if want else 'infeasible'}", bool(res) == want)
    name, k = _SA_GRID[(index - 2) % len(_SA_GRID)]
    A = _templates()[name]
    X = corpus.random_structure(corpus.DIGRAPH, rng, max_size=4, density=rng.uniform(0.1, 0.6))
    L1, L2 = sherali_adams_system(A, k, X), sa_via_label_cover(A, k, X)
    r1, r2 = lp_feasible(L1), lp_feasible(L2)
    ok = bool(r1) == bool(r2)
    if r1:
        ok = ok and L1.satisfied_by(r1.witness)
    if r2:
        ok = ok and L2.satisfied_by(r2.witness)
    if r1 and k > 1:
        ok = ok and bool(lp_feasible(sherali_adams_system(A, k - 1, X)))
    return Outcome(f"{name}, k={k}, feasible={bool(r1)}", ok, f"SA={bool(r1)} conv={bool(r2)}", X=X)


def _random_group_instance(rng: random.Random, p: int) -> Structure:
    A = group_template(p, (1,))
    return corpus.random_structure(A.signature, rng, max_size=4, density=rng.uniform(0.02, 0.12))


@suite("affine-uniform", "uniform weights over Z_q satisfy the affine system of every k-consistent Z_p "
       "instance; Z_p-affine feasibility matches solvability", 60)
def _affine_uniform(rng: random.Random, index: int) -> Outcome:
    Z2 = group_template(2, (1,))
    if index == 0:
        K4 = list(range(4))
        X = tseitin_instance(K4, list(itertools.combinations(K4, 2)), {0: 1})
        cons = k_consistency_test(Z2, 3, X)
        unsat = solve_group_system(structure_to_group_system(X, 2)) is None
        G = affine_system(Z2, 3, X, 3)
        w = uniform_witness(G, 2)
        ok = cons and unsat and G.satisfied_by(w) and solve_group_system(G) is not None
        return Outcome("Tseitin on K4, odd charge", ok, f"3-consistent={cons} unsat={unsat}")
    if index % 2:
        k = rng.choice([2, 3])
        X = _random_group_instance(rng, 2)
        if not k_consistency_test(Z2, k, X):
            raise Redraw
        q = rng.choice([3, 5])
        G = affine_system(Z2, k, X, q)
        return Outcome(f"uniform witness, k={k}, q={q}", G.satisfied_by(uniform_witness(G, 2)), X=X)
    p = rng.choice([2, 3])
    A = group_template(p, (1,))
    X = _random_group_instance(rng, p)
    relaxed = solve_group_system(affine_system(A, 3, X, p)) is not None
    exact = solve_group_system(structure_to_group_system(X, p)) is not None
    return Outcome(f"Z{p} at k=3, solvable={exact}", relaxed == exact, f"affine={relaxed} exact={exact}", X=X)


@suite("adjunction", "arc consistency of X maps to M exactly when X maps to omega(M)", 60)
def _adjunction(rng: random.Random, index: int) -> Outcome:
    X = corpus.random_label_cover(rng, max_variables=3, max_labels=3, max_constraints=3)
    sides = {which: adjunction_sides(X, _pol(which, 3)) for which in ("K2", "K3")}
    note = " ".join(f"Pol({w}): left={l} right={r}" for w, (l, r) in sides.items())
    return Outcome(note, all(l == r for l, r in sides.values()), X=X)


@functools.lru_cache(maxsize=None)
def _comonad_minions(max_arity: int) -> tuple:
    ms = [_pol("bottom", max_arity), _projections(max_arity)]
    if max_arity == 2:
        ms.append(_pol("K2", 2))
    return tuple(ms)


@suite("comonad", "co-Kleisli composition over omega has the counit as a two-sided unit and is "
       "associative", 24)
def _comonad(rng: random.Random, index: int) -> Outcome:
    ms = _comonad_minions(rng.choice([2, 3]))
    L, M, N, O = (rng.choice(ms) for _ in range(4))
    zeta = find_minion_homomorphism(omega(L), M, rng)
    xi = find_minion_homomorphism(omega(M), N, rng)
    chi = find_minion_homomorphism(omega(N), O, rng)
    if zeta is None or xi is None or chi is None:
        raise Redraw
    left_unit = cokleisli_compose(counit(M), zeta).mapping == zeta.mapping
    right_unit = cokleisli_compose(zeta, counit(L)).mapping == zeta.mapping
    a = cokleisli_compose(cokleisli_compose(chi, xi), zeta).mapping
    b = cokleisli_compose(chi, cokleisli_compose(xi, zeta)).mapping
    natural = all(f.is_natural() for f in (zeta, xi, chi))
    label = f"{L.name} -> {M.name} -> {N.name} -> {O.name} (arity {L.max_arity})"
    return Outcome(label, left_unit and right_unit and a == b and natural,
                   f"left={left_unit} right={right_unit} assoc={a == b} natural={natural}")


def _decide_over_z(S: GroupSystem, box: int) -> bool | None:
    """Exact verdict from independent oracles, or None when none of them settles it."""
    if brute_force_group_system(S, box) is not None:
        return True
    L = LinearSystem()
    for v in S.variables:
        L.add_variable(v, nonneg=False)
    for row, rhs in S.rows:
        L.add_row({v: Fraction(c) for v, c in row.items()}, Fraction(rhs))
    if not lp_feasible(L):
        return False
    for m in range(2, 8):
        Sm = GroupSystem(m, list(S.variables), [(dict(r), b) for r, b in S.rows])
        if brute_force_group_system(Sm) is None:
            return False
    return None


@suite("snf-oracle", "the integer solver agrees with exhaustive search over Z_n and with exact oracles "
       "over Z", 240)
def _snf_oracle(rng: random.Random, index: int) -> Outcome:
    modulus = [2, 3, 4, None][index % 4]
    nvars = rng.randint(1, 5)
    S = GroupSystem(modulus)
    for i in range(nvars):
        S.add_variable(f"x{i}")
    span = modulus or 4
    planted = {v: rng.randint(-2, 2) for v in S.variables} if rng.random() < 0.5 else None
    for _ in range(rng.randint(1, 4)):
        row = {v: rng.randint(-span, span) for v in S.variables if rng.random() < 0.7}
        rhs = sum(c * planted[v] for v, c in row.items()) if planted else rng.randint(-span, span)
        S.add_row(row, rhs)
    got = solve_group_system(S)
    if modulus:
        want = brute_force_group_system(S) is not None
    else:
        want = _decide_over_z(S, box=3)
        if want is None:
            raise Redraw
    label = f"{nvars} vars over {'Z' if modulus is None else f'Z{modulus}'}, feasible={want}"
    return Outcome(label, (got is not None) == want and (got is None or S.satisfied_by(got)),
                   f"solver={got}")


@suite("tensor", "the tensor test accepts instances that map to the template; with projections at "
       "level 1 it decides the template exactly", 100)
def _tensor(rng: random.Random, index: int) -> Outcome:
    K2 = corpus.complete_graph(2)
    if index == 0:
        ok = not tensor_test(K2, _pol("K2", 2), 1, corpus.cycle(3))
        return Outcome("C3 over K2 with Pol(K2) rejects", ok)
    X = corpus.random_digraph(rng, max_vertices=4)
    kind = index % 3
    if kind == 0:
        A = rng.choice([K2, corpus.complete_graph(3)])
        n = len(A.domains["v"])
        accept = tensor_test(A, _projections(max(n, len(A.relations["E"]))), 1, X)
        maps = find_homomorphism(X, A) is not None
        return Outcome(f"k=1, projections, K{n}, maps={maps}", accept == maps, X=X)
    if kind == 1:
        maps = find_homomorphism(X, K2) is not None
        accept = tensor_test(K2, _pol("K2", 2), 1, X)
        return Outcome(f"k=1, Pol(K2), maps={maps}", accept or not maps, X=X)
    X, _ = corpus.planted_instance(K2, rng, size=rng.randint(1, 3), density=rng.uniform(0.3, 0.9))
    try:
        accept = tensor_test(K2, _projections(4), 2, X)
    except MinionError:
        raise Redraw
    return Outcome("k=2, projections, planted", accept, X=X)
