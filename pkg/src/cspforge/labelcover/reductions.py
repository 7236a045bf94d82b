"""The assembled k-consistency and arc-consistency reductions."""

from __future__ import annotations

from .. import gadgets
from ..structures import Structure
from .consistency import enforce_arc_consistency, sigma_k


def k_consistency_reduce(A: Structure, B: Structure, k: int, X: Structure) -> Structure:
    """κ_k^{A,B} = π_B ∘ κ_arc ∘ σ_k^A."""
    return gadgets.apply_universal_gadget(B, enforce_arc_consistency(sigma_k(A, X, k)))


def arc_consistency_reduce(A: Structure, B: Structure, X: Structure) -> Structure:
    """κ_arc^{A,B} = π_B ∘ κ_arc ∘ ρ^A."""
    return gadgets.apply_universal_gadget(B, enforce_arc_consistency(gadgets.reify_to_label_cover(A, X)))


def has_falsity_symbol(B: Structure) -> bool:
    """Whether B has a nullary symbol that is false, so an emptied F can be reported."""
    return any(not ar and not B.holds(name) for name, ar in B.signature.symbols)
