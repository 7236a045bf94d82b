"""Truncated minions, polymorphism minions, the ω comonad and Q_conv.

A minion is stored up to a maximal arity: elements of arity n are integer
ids, and the minor table sends ``(f, π, m)`` to f^π for every map
π: [n] → [m] written as a tuple of images (0-based).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from .labelcover.consistency import enforce_arc_consistency
from .labelcover.instance import LabelCoverInstance, pi_of_symbol
from .structures import Signature, Structure, find_homomorphism, iter_homomorphisms, power


class MinionError(ValueError):
    pass


def maps_between(n: int, m: int) -> Iterable[tuple]:
    return itertools.product(range(m), repeat=n)


class Minion:
    """Elements per arity, a rendering per element, and the full minor table."""

    def __init__(self, max_arity: int, elements: Mapping[int, Iterable[int]],
                 table: Mapping[tuple, int], render: Mapping[int, str] | None = None,
                 name: str = "M"):
        self.max_arity = max_arity
        self.elements = {n: tuple(elements.get(n, ())) for n in range(1, max_arity + 1)}
        self.arity_of = {f: n for n, fs in self.elements.items() for f in fs}
        self.table = dict(table)
        self.render = dict(render or {f: str(f) for f in self.arity_of})
        self.name = name
        self._omega: Minion | None = None
        # set on minions built by ``omega``: id -> (support, element of the base)
        self.omega_base: Minion | None = None
        self.omega_parts: dict = {}
        self.omega_index: dict = {}
        for n, fs in self.elements.items():
            if not fs:
                raise MinionError(f"{name} has no elements of arity {n}")

    def __repr__(self) -> str:
        sizes = ", ".join(f"{n}:{len(fs)}" for n, fs in self.elements.items())
        return f"Minion({self.name}; {sizes})"

    def minor(self, f: int, pi: tuple, m: int) -> int:
        if m > self.max_arity:
            raise MinionError(f"arity {m} exceeds the truncation {self.max_arity}")
        return self.table[(f, tuple(pi), m)]

    def size(self, n: int) -> int:
        return len(self.elements[n])

    def check_laws(self) -> list:
        """Violations of f^id = f and (f^σ)^π = f^{π∘σ}; empty when lawful."""
        bad = []
        N = self.max_arity
        for n, fs in self.elements.items():
            ident = tuple(range(n))
            for f in fs:
                if self.minor(f, ident, n) != f:
                    bad.append(("identity", f))
                for m in range(1, N + 1):
                    for sigma in maps_between(n, m):
                        g = self.minor(f, sigma, m)
                        if self.arity_of.get(g) != m:
                            bad.append(("arity", f, sigma, m))
                            continue
                        for l in range(1, N + 1):
                            for pi in maps_between(m, l):
                                comp = tuple(pi[s] for s in sigma)
                                if self.minor(g, pi, l) != self.minor(f, comp, l):
                                    bad.append(("composition", f, sigma, pi))
        return bad

    def as_structure(self, sig: Signature) -> Structure:
        """The minion read as a label cover structure over ``sig``: M_X = M^(|X|), E_π = graph of π."""
        domains = {}
        for X in sig.types:
            if len(X) > self.max_arity:
                raise MinionError(f"type of size {len(X)} exceeds the truncation {self.max_arity}")
            domains[X] = self.elements.get(len(X), ())
        relations = {}
        for name, (X, Y) in sig.symbols:
            pi = pi_of_symbol(name)
            pos = {y: j for j, y in enumerate(Y)}
            idx = tuple(pos[pi[x]] for x in X)
            relations[name] = {(f, self.minor(f, idx, len(Y))) for f in domains[X]} if Y else set()
        return Structure(sig, domains, relations)


def polymorphism_minion(A: Structure, B: Structure, max_arity: int = 3) -> Minion:
    """Pol(A, B): arity-n elements are the homomorphisms A^n → B; f^π(x) = f(x∘π)."""
    sig = A.signature
    powers = {n: power(A, range(n)) for n in range(1, max_arity + 1)}
    ids: dict = {}
    elements, render, funcs = {}, {}, {}
    for n in range(1, max_arity + 1):
        P = powers[n]
        elements[n] = []
        for h in iter_homomorphisms(P, B):
            key = (n, tuple(tuple(h.maps[t][x] for x in P.domains[t]) for t in sig.types))
            f = len(ids)
            ids[key] = f
            elements[n].append(f)
            funcs[f] = (n, h.maps)
            render[f] = "; ".join(
                f"{t}: " + " ".join(f"{''.join(map(str, x))}->{h.maps[t][x]}" for x in P.domains[t])
                for t in sig.types) or "()"
        if not elements[n]:
            raise MinionError(f"no homomorphisms A^{n} -> B; Pol(A, B) is not a minion here")
    table = {}
    for f, (n, maps) in funcs.items():
        for m in range(1, max_arity + 1):
            P = powers[m]
            for pi in maps_between(n, m):
                key = (m, tuple(tuple(maps[t][tuple(x[p] for p in pi)] for x in P.domains[t])
                                for t in sig.types))
                table[(f, pi, m)] = ids[key]
    return Minion(max_arity, elements, table, render, name="Pol")


def projections_minion(max_arity: int = 3) -> Minion:
    """P^(n) = [n] with minors π(x)."""
    elements, table, render = {}, {}, {}
    ident = {}
    for n in range(1, max_arity + 1):
        elements[n] = []
        for x in range(n):
            f = len(ident)
            ident[(n, x)] = f
            elements[n].append(f)
            render[f] = f"p{x + 1}/{n}"
    for (n, x), f in ident.items():
        for m in range(1, max_arity + 1):
            for pi in maps_between(n, m):
                table[(f, pi, m)] = ident[(m, pi[x])]
    return Minion(max_arity, elements, table, render, name="P")


def subsets(n: int) -> list:
    return [Y for size in range(1, n + 1) for Y in itertools.combinations(range(n), size)]


def omega(M: Minion) -> Minion:
    """ω(M): pairs (Y, f) with ∅ ≠ Y ⊆ [n] and f ∈ M^(|Y|); (Z, f)^π = (π(Z), f^{π|Z})."""
    if M._omega is not None:
        return M._omega
    N = M.max_arity
    index, parts, elements, render = {}, {}, {}, {}
    for n in range(1, N + 1):
        elements[n] = []
        for Y in subsets(n):
            for f in M.elements[len(Y)]:
                e = len(index)
                index[(n, Y, f)] = e
                parts[e] = (n, Y, f)
                elements[n].append(e)
                render[e] = "({" + ",".join(str(y + 1) for y in Y) + "}, " + M.render[f] + ")"
    table = {}
    for e, (n, Y, f) in parts.items():
        for m in range(1, N + 1):
            for pi in maps_between(n, m):
                Z = tuple(sorted({pi[y] for y in Y}))
                zpos = {z: j for j, z in enumerate(Z)}
                rho = tuple(zpos[pi[y]] for y in Y)
                table[(e, pi, m)] = index[(m, Z, M.minor(f, rho, len(Z)))]
    W = Minion(N, elements, table, render, name=f"omega({M.name})")
    W.omega_base = M
    W.omega_parts = parts
    W.omega_index = index
    M._omega = W
    return W


@dataclass(frozen=True)
class MinionMap:
    """A per-arity map between truncated minions (a candidate natural transformation)."""

    source: Minion
    target: Minion
    mapping: Mapping

    def __call__(self, f: int) -> int:
        return self.mapping[f]

    def is_natural(self) -> bool:
        S, T = self.source, self.target
        for (f, pi, m), g in S.table.items():
            if T.minor(self.mapping[f], pi, m) != self.mapping[g]:
                return False
        return all(T.arity_of[self.mapping[f]] == n for f, n in S.arity_of.items())


def counit(M: Minion) -> MinionMap:
    """ν(Y, f) = f^ι for the inclusion ι: Y ↪ [n]."""
    W = omega(M)
    mapping = {e: M.minor(f, Y, n) for e, (n, Y, f) in W.omega_parts.items()}
    return MinionMap(W, M, mapping)


def bind(zeta: MinionMap, W: Minion) -> MinionMap:
    """ζ^♭: ω(L) → ω(M) for ζ: ω(L) → M, with ``W`` = ω(M); (X, f) ↦ (X, ζ(X, f) at arity |X|)."""
    L_omega = zeta.source
    if L_omega.omega_base is None or W.omega_base is not zeta.target:
        raise MinionError("bind needs ζ: ω(L) → M and W = ω(M)")
    if L_omega.max_arity != W.max_arity:
        raise MinionError("arity overflow: truncations differ")
    mapping = {}
    for e, (n, X, f) in L_omega.omega_parts.items():
        k = len(X)
        full = L_omega.omega_index[(k, tuple(range(k)), f)]
        mapping[e] = W.omega_index[(n, X, zeta(full))]
    return MinionMap(L_omega, W, mapping)


def cokleisli_compose(xi: MinionMap, zeta: MinionMap) -> MinionMap:
    """ξ ∘_ω ζ = ξ ∘ ζ^♭ for ξ: ω(M) → N and ζ: ω(L) → M."""
    flat = bind(zeta, xi.source)
    return MinionMap(zeta.source, xi.target, {e: xi(flat(e)) for e in zeta.source.arity_of})


def _minion_structure(M: Minion) -> Structure:
    """Types are arities; one binary relation per map π: [n] → [m]."""
    N = M.max_arity
    types = tuple(range(1, N + 1))
    symbols, relations = [], {}
    for n in types:
        for m in types:
            for pi in maps_between(n, m):
                name = (n, m, pi)
                symbols.append((name, (n, m)))
                relations[name] = {(f, M.minor(f, pi, m)) for f in M.elements[n]}
    sig = Signature(types, tuple(symbols))
    return Structure(sig, {n: M.elements[n] for n in types}, relations)


def find_minion_homomorphism(M: Minion, N: Minion, rng: random.Random | None = None) -> MinionMap | None:
    """A natural family M → N on the truncation, by backtracking; ``rng`` shuffles value order."""
    if M.max_arity != N.max_arity:
        raise MinionError("minion homomorphism search needs equal truncations")
    SM, SN = _minion_structure(M), _minion_structure(N)
    def shuffled(t, vals):
        vals = list(vals)
        rng.shuffle(vals)
        return vals

    order: Callable | None = shuffled if rng is not None else None
    h = find_homomorphism(SM, SN, value_order=order)
    if h is None:
        return None
    mapping = {f: h.maps[n][f] for n in SM.signature.types for f in M.elements[n]}
    return MinionMap(M, N, mapping)


def adjunction_sides(X: LabelCoverInstance, M: Minion) -> tuple[bool, bool]:
    """(κ_arc(X) → M, X → ω(M)), both decided by homomorphism search."""
    for _, ls in X.variables:
        if len(ls) > M.max_arity:
            raise MinionError(f"type of size {len(ls)} exceeds the truncation {M.max_arity}")
    K = enforce_arc_consistency(X)
    left = find_homomorphism(K.to_structure(), M.as_structure(K.signature())) is not None
    sig = X.signature()
    right = find_homomorphism(X.to_structure(sig), omega(M).as_structure(sig)) is not None
    return left, right


def check_arc_adjunction(X: LabelCoverInstance, M: Minion) -> bool:
    """Whether κ_arc(X) → M and X → ω(M) agree."""
    left, right = adjunction_sides(X, M)
    return left == right


# --------------------------------------------------------------------------
# Q_conv


@dataclass(frozen=True)
class RationalDistribution:
    """Weights over an ordered ground set; exact, nonnegative, summing to one."""

    domain: tuple
    weights: tuple

    def __post_init__(self) -> None:
        w = tuple(Fraction(x) for x in self.weights)
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "weights", w)
        if len(w) != len(self.domain) or len(set(self.domain)) != len(self.domain):
            raise ValueError("one weight per distinct point is required")
        if any(x < 0 for x in w) or sum(w) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")

    def __getitem__(self, x: Hashable) -> Fraction:
        return self.weights[self.domain.index(x)]

    def support(self) -> tuple:
        return tuple(x for x, w in zip(self.domain, self.weights) if w)


def qconv_minor(lam: RationalDistribution, pi: Mapping, codomain: Iterable) -> RationalDistribution:
    """Pushforward: λ^π(y) = Σ_{x ∈ π⁻¹(y)} λ(x)."""
    codomain = tuple(codomain)
    acc = {y: Fraction(0) for y in codomain}
    for x, w in zip(lam.domain, lam.weights):
        acc[pi[x]] += w
    return RationalDistribution(codomain, tuple(acc[y] for y in codomain))


def qconv_to_omega(lam: RationalDistribution) -> tuple[tuple, RationalDistribution]:
    """(supp λ, λ restricted to its support)."""
    supp = lam.support()
    return supp, RationalDistribution(supp, tuple(lam[x] for x in supp))
