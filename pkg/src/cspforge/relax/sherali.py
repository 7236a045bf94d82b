"""Sherali–Adams systems, the λ_conv system of a label cover instance, and affine relaxations."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping

from ..labelcover.consistency import _partial_homs, enforce_arc_consistency, sigma_k
from ..labelcover.instance import LabelCoverInstance
from ..structures import Signature, SignatureError, Structure, check_same_signature
from .intlin import GroupSystem
from .lp import LinearSystem


def _restriction_rows(K: tuple, F: Mapping) -> Iterable[tuple[tuple, tuple, list]]:
    """For each proper L ⊂ K and g ∈ F_L: (L, g, [f ∈ F_K with f|_L = g])."""
    for size in range(len(K)):
        for L in itertools.combinations(K, size):
            idx = [K.index(e) for e in L]
            groups: dict = {g: [] for g in F[L]}
            for f in F[K]:
                g = tuple(f[i] for i in idx)
                if g in groups:
                    groups[g].append(f)
                else:
                    groups[g] = [f]
            for g, fs in groups.items():
                yield L, g, fs


def partial_hom_sets(A: Structure, X: Structure, k: int) -> dict:
    """F_K for every K ⊆ X with |K| ≤ k: the partial homomorphisms K → A, as tuples aligned with K."""
    check_same_signature(A, X)
    if k < 1:
        raise ValueError("k must be at least 1")
    elems = list(X.elements())
    scopes = [(name, tuple(zip(ar, tup))) for name, ar in X.signature.symbols for tup in X.relations[name]]
    F = {}
    for size in range(min(k, len(elems)) + 1):
        for K in itertools.combinations(elems, size):
            Kset = set(K)
            inside = [(n, s) for n, s in scopes if set(s) <= Kset]
            F[K] = _partial_homs(A, X, K, inside)
    return F


def sherali_adams_system(A: Structure, k: int, X: Structure) -> LinearSystem:
    """SA^k: x_{K,f} ∈ [0,1], Σ_f x_{K,f} = 1, and Σ_{f|_L = g} x_{K,f} = x_{L,g}."""
    F = partial_hom_sets(A, X, k)
    L = LinearSystem()
    for K, fs in F.items():
        for f in fs:
            L.add_variable((K, f), nonneg=True, upper=True)
    for K, fs in F.items():
        L.add_row({(K, f): 1 for f in fs}, 1)
    for K in F:
        for Lset, g, fs in _restriction_rows(K, F):
            row = {(K, f): 1 for f in fs}
            row[(Lset, g)] = -1
            L.add_row(row, 0)
    return L


def lambda_conv(S: LabelCoverInstance, normalization: int = 1, bounded: bool = False) -> LinearSystem:
    """One variable x_{s,i} ≥ 0 per label; Σ_i x_{s,i} = ``normalization``; marginals per constraint.

    ``normalization=0`` gives the literal homogeneous variant for comparison.
    ``bounded`` adds x ≤ 1 so the system matches SA^k verbatim.
    """
    L = LinearSystem()
    for s, labels in S.variables:
        for i in labels:
            L.add_variable((s, i), nonneg=True, upper=bounded)
    for s, labels in S.variables:
        L.add_row({(s, i): 1 for i in labels}, normalization)
    for c in S.constraints:
        pre: dict = {j: [] for j in S.labels(c.target)}
        for i, j in c.pairs:
            pre[j].append(i)
        for j, xs in pre.items():
            row = {(c.source, i): 1 for i in xs}
            row[(c.target, j)] = row.get((c.target, j), 0) - 1
            L.add_row(row, 0)
    return L


def sa_via_label_cover(A: Structure, k: int, X: Structure) -> LinearSystem:
    """λ_conv(κ_arc(σ_k^A(X))): the right-hand side of the SA equivalence."""
    return lambda_conv(enforce_arc_consistency(sigma_k(A, X, k)))


def affine_system(A: Structure, k: int, X: Structure, modulus: int | None) -> GroupSystem:
    """The SA equalities over Z_n (or Z), with F_K taken after arc consistency on σ_k."""
    check_same_signature(A, X)
    S = enforce_arc_consistency(sigma_k(A, X, k))
    F = dict(S.variables)
    G = GroupSystem(modulus)
    for K, fs in F.items():
        for f in fs:
            G.add_variable((K, f))
    for K, fs in F.items():
        G.add_row({(K, f): 1 for f in fs}, 1)
    for K in F:
        for Lset, g, fs in _restriction_rows(K, F):
            row = {(K, f): 1 for f in fs}
            row[(Lset, g)] = -1
            G.add_row(row, 0)
    return G


def _log_exact(size: int, p: int) -> int | None:
    d = 0
    while size > 1 and size % p == 0:
        size //= p
        d += 1
    return d if size == 1 else None


def uniform_witness(G: GroupSystem, p: int) -> dict:
    """x_{K,f} = 1/p^d mod q where |F_K| = p^d; requires every |F_K| to be a power of p."""
    q = G.modulus
    if not q:
        raise ValueError("the uniform witness lives in a finite cyclic group")
    sizes: dict = {}
    for K, _ in G.variables:
        sizes[K] = sizes.get(K, 0) + 1
    x = {}
    for v in G.variables:
        d = _log_exact(sizes[v[0]], p)
        if d is None:
            raise ValueError(f"|F_K| = {sizes[v[0]]} is not a power of {p}")
        x[v] = pow(p ** d, -1, q)
    return x


# --------------------------------------------------------------------------
# group templates and group encodings


def group_signature(generators: Iterable[int]) -> Signature:
    symbols = {"add": ("g", "g", "g")}
    for b in generators:
        symbols[f"is_{b}"] = ("g",)
    return Signature.make(["g"], symbols)


def group_template(modulus: int | None, generators: Iterable[int] = (1,)) -> Structure:
    """Z_n with x_1 + x_2 = y and the unary ``is_b`` (y = b) for each generator b."""
    if not modulus:
        raise ValueError("Z is infinite and cannot be used as a finite template")
    generators = sorted({b % modulus for b in generators})
    sig = group_signature(generators)
    rel = {"add": {(a, b, (a + b) % modulus) for a in range(modulus) for b in range(modulus)}}
    for b in generators:
        rel[f"is_{b}"] = {(b,)}
    return Structure(sig, {"g": range(modulus)}, rel)


def structure_to_group_system(X: Structure, modulus: int | None) -> GroupSystem:
    """Read an instance over a group signature as linear equations over Z_n (or Z)."""
    if X.signature.types != ("g",) or not X.signature.has_symbol("add"):
        raise SignatureError("expected a group signature with type 'g' and symbol 'add'")
    G = GroupSystem(modulus)
    for a in X.domains["g"]:
        G.add_variable(a)
    for name, _ in X.signature.symbols:
        for tup in sorted(X.relations[name], key=repr):
            if name == "add":
                x1, x2, y = tup
                row: dict = {}
                for v, c in ((x1, 1), (x2, 1), (y, -1)):
                    row[v] = row.get(v, 0) + c
                G.add_row(row, 0)
            elif name.startswith("is_"):
                G.add_row({tup[0]: 1}, int(name[3:]))
            else:
                raise SignatureError(f"unexpected symbol {name!r} in a group signature")
    return G


def tseitin_instance(vertices: Iterable, edges: Iterable[tuple], charge: Mapping,
                     generators: Iterable[int] = (1,)) -> Structure:
    """Parity constraints over Z_2: for each vertex, the sum of its incident edges equals its charge.

    Sums are chained through auxiliary elements ``("t", v, i)``; the constants
    ``zero`` and ``one`` are pinned by add(zero, zero, zero) and is_1(one).
    """
    vertices = list(vertices)
    edges = [tuple(e) for e in edges]
    sig = group_signature(generators)
    elems = [("e",) + e for e in edges] + ["zero", "one"]
    add = {("zero", "zero", "zero")}
    for v in vertices:
        inc = [("e",) + e for e in edges if v in e]
        target = "one" if charge.get(v, 0) % 2 else "zero"
        if not inc:
            if target == "one":
                add.add(("zero", "zero", "one"))
            continue
        acc = inc[0]
        for i, e in enumerate(inc[1:], 1):
            last = i == len(inc) - 1
            nxt = target if last else ("t", v, i)
            if not last:
                elems.append(nxt)
            add.add((acc, e, nxt))
            acc = nxt
        if len(inc) == 1:
            add.add((acc, "zero", target))
    rel = {"add": add}
    for b in sorted(set(generators)):
        rel[f"is_{b}"] = {("one",)} if b % 2 == 1 else set()
    return Structure(sig, {"g": elems}, rel)


def fraction_to_mod(x: Fraction, q: int) -> int:
    return x.numerator * pow(x.denominator, -1, q) % q
