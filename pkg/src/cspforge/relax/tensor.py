"""The k-th tensor power with k-enhancement, as a Datalog interpretation, and the tensor test."""

from __future__ import annotations

import itertools

from ..datalog import Atom, DatalogInterpretation, DatalogProgram, Rule, Var, apply_interpretation, eq
from ..gadgets import reify_to_label_cover
from ..minions import Minion
from ..structures import Signature, SignatureError, Structure, find_homomorphism


def _flat_indices(k: int, m: int) -> list:
    """Variable indices of the head, grouped per f ∈ [m]^k (lexicographic) as f(1), …, f(k).

    Each group of k consecutive head positions is then one element of the
    tensor power, namely the k-tuple (x_{f(1)}, …, x_{f(k)}).
    """
    return [f[i] for f in itertools.product(range(m), repeat=k) for i in range(k)]


def tensor_symbol_name(sig: Signature) -> str:
    name = "T"
    while sig.has_symbol(name):
        name += "'"
    return name


def tensor_interpretation(sig: Signature, k: int) -> DatalogInterpretation:
    """τ^k: domain X^k, an m^k-ary R for each m-ary R, and a k^k-ary T."""
    if len(sig.types) != 1:
        raise SignatureError("the tensor power is defined for single-sorted signatures")
    if k < 1:
        raise ValueError("k must be at least 1")
    (t,) = sig.types
    xs = [Var(f"x{i + 1}", t) for i in range(max(k, max((len(a) for _, a in sig.symbols), default=0)))]
    taken = set(sig.symbol_names)
    T = tensor_symbol_name(sig)

    def program(out: str, head_idx: list, body: tuple) -> DatalogProgram:
        name = out
        while name in taken:
            name += "'"
        head = Atom(name, tuple(xs[i] for i in head_idx))
        return DatalogProgram(sig, ((name, (t,) * len(head_idx)),), (Rule(head, body),), name)

    enhance = tuple(eq(xs[i], xs[i]) for i in range(k))
    domain = program("D", list(range(k)), enhance)
    relations = {}
    out_symbols = {}
    for name, ar in sig.symbols:
        m = len(ar)
        body = (Atom(name, tuple(xs[:m])),)
        relations[name] = program(f"{name}_k", _flat_indices(k, m), body)
        out_symbols[name] = (t,) * (m ** k)
    relations[T] = program(T, _flat_indices(k, k), enhance)
    out_symbols[T] = (t,) * (k ** k)
    target = Signature.make([t], out_symbols)
    return DatalogInterpretation(sig, target, {t: domain}, relations)


def tensor_power(X: Structure, k: int) -> Structure:
    return apply_interpretation(tensor_interpretation(X.signature, k), X)


def tensor_test(A: Structure, M: Minion, k: int, X: Structure) -> bool:
    """Accept iff ρ^{τ^k(A)}(τ^k(X)) → M, with M read as a label cover structure."""
    tau = tensor_interpretation(A.signature, k)
    tA, tX = apply_interpretation(tau, A), apply_interpretation(tau, X)
    S = reify_to_label_cover(tA, tX)
    sig = S.signature()
    return find_homomorphism(S.to_structure(sig), M.as_structure(sig)) is not None
