"""Typed relational structures, Datalog reductions, gadgets, consistency algorithms, minions and
LP / affine relaxations for finite-template constraint satisfaction."""

from .structures import (Homomorphism, Signature, SignatureError, Structure, disjoint_union, find_homomorphism,
                         find_isomorphism, hom_exists, is_hom_equivalent, is_isomorphic, iter_homomorphisms, power,
                         quotient, rename)
from .textfmt import Document, ParseError, dumps, parse, print_document

__version__ = "0.1.0"

__all__ = [
    "Document", "Homomorphism", "ParseError", "Signature", "SignatureError", "Structure", "disjoint_union",
    "dumps", "find_homomorphism", "find_isomorphism", "hom_exists", "is_hom_equivalent", "is_isomorphic",
    "iter_homomorphisms", "parse", "power", "print_document", "quotient", "rename",
]
