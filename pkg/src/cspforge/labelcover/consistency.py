"""Arc consistency on label cover instances and the partial-homomorphism instance σ_k."""

from __future__ import annotations

import itertools
from collections import deque

from ..structures import SignatureError, Structure
from .instance import Constraint, LabelCoverInstance


def arc_consistent_sets(S: LabelCoverInstance) -> dict:
    """Surviving label sets F_v after propagation to the fixed point.

    Constraints are revised from a FIFO worklist seeded in input order; a
    revision of (u, v, π) keeps π(F_u) ∩ F_v in v and π⁻¹(F_v) in u.
    """
    F = {v: set(ls) for v, ls in S.variables}
    incident: dict = {v: [] for v, _ in S.variables}
    for ci, c in enumerate(S.constraints):
        incident[c.source].append(ci)
        incident[c.target].append(ci)
    queue = deque(range(len(S.constraints)))
    queued = set(queue)
    while queue:
        ci = queue.popleft()
        queued.discard(ci)
        c = S.constraints[ci]
        m = c.mapping
        fu, fv = F[c.source], F[c.target]
        new_v = fv & {m[x] for x in fu}
        new_u = {x for x in fu if m[x] in new_v}
        for var, old, new in ((c.target, fv, new_v), (c.source, fu, new_u)):
            if len(new) < len(old):
                F[var] = new
                for cj in incident[var]:
                    if cj not in queued:
                        queued.add(cj)
                        queue.append(cj)
    return F


def enforce_arc_consistency(S: LabelCoverInstance) -> LabelCoverInstance:
    """κ_arc: retype each variable by its surviving labels and restrict every π."""
    F = arc_consistent_sets(S)
    variables = [(v, [x for x in ls if x in F[v]]) for v, ls in S.variables]
    kept = dict(variables)
    constraints = [c.restricted(kept[c.source]) for c in S.constraints]
    return LabelCoverInstance(variables, constraints)


def _tagged_elements(X: Structure) -> list:
    return list(X.elements())


def _partial_homs(A: Structure, X: Structure, K: tuple, inside: list) -> list:
    """All maps K → A respecting types and every constraint of X inside K."""
    options = [A.domains[t] for t, _ in K]
    pos = {e: i for i, e in enumerate(K)}
    checks = [(name, [pos[e] for e in scope]) for name, scope in inside]
    out = []
    for f in itertools.product(*options):
        if all(tuple(f[i] for i in idx) in A.relations[name] for name, idx in checks):
            out.append(f)
    return out


def sigma_k(A: Structure, X: Structure, k: int) -> LabelCoverInstance:
    """σ_k^A(X): a variable per K ⊆ X with |K| ≤ k, labelled by partial homomorphisms K → A.

    Variables are the tuples K of tagged elements ``(t, x)``; labels are the
    tuples ``f`` of A-elements aligned with K. There is a restriction
    constraint from K to every proper subset L.
    """
    if A.signature != X.signature:
        raise SignatureError("template and instance have different signatures")
    if k < 1:
        raise ValueError("k must be at least 1")
    elems = _tagged_elements(X)
    scopes = []
    for name, ar in X.signature.symbols:
        for tup in X.relations[name]:
            scopes.append((name, tuple(zip(ar, tup))))
    variables, F = [], {}
    for size in range(min(k, len(elems)) + 1):
        for K in itertools.combinations(elems, size):
            Kset = set(K)
            inside = [(name, scope) for name, scope in scopes if set(scope) <= Kset]
            F[K] = _partial_homs(A, X, K, inside)
            variables.append((K, F[K]))
    constraints = []
    for K, _ in variables:
        for size in range(len(K)):
            for L in itertools.combinations(K, size):
                idx = [K.index(e) for e in L]
                pairs = tuple((f, tuple(f[i] for i in idx)) for f in F[K])
                constraints.append(Constraint(K, L, pairs))
    return LabelCoverInstance(variables, constraints)


def ignored_constraint_count(X: Structure, k: int) -> int:
    """Constraint tuples with more than k distinct elements; σ_k never sees them."""
    return sum(1 for name, ar in X.signature.symbols for tup in X.relations[name]
               if len(set(zip(ar, tup))) > k)


def k_consistency_test(A: Structure, k: int, X: Structure) -> bool:
    """Accept iff no F_K empties."""
    return not enforce_arc_consistency(sigma_k(A, X, k)).empty_types()
