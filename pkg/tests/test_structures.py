import random

import pytest
from hypothesis import given, settings, strategies as st

from cspforge.corpus import DIGRAPH, OMEGA, bottom, complete_graph, cycle, digraph, graph, random_digraph, top
from cspforge.structures import (Homomorphism, Signature, SignatureError, Structure, disjoint_union,
                                 find_homomorphism, find_isomorphism, is_hom_equivalent, is_isomorphic, power, quotient,
                                 rename)

K2, K3 = complete_graph(2), complete_graph(3)
LOOP = digraph([0], [(0, 0)])


def test_signature_rejects_duplicates_and_unknown_types():
    with pytest.raises(SignatureError):
        Signature(("v", "v"), ())
    with pytest.raises(SignatureError):
        Signature(("v",), (("E", ("v", "w")),))
    assert Signature.make([], {"C": ()}).arity("C") == ()


def test_structure_validates_tuples():
    with pytest.raises(SignatureError):
        digraph([0, 1], [(0, 2)])
    with pytest.raises(SignatureError):
        Structure(DIGRAPH, {"v": [0, 0]})
    assert not bottom().holds("C") and top().holds("C")


@pytest.mark.parametrize("X,A,expected", [
    (K3, K3, True),
    (cycle(5), K3, True),
    (cycle(3), K2, False),
    (K2, LOOP, True),
    (cycle(3), LOOP, True),
    (LOOP, cycle(3), False),
])
def test_homomorphism_examples(X, A, expected):
    h = find_homomorphism(X, A)
    assert (h is not None) == expected
    if h is not None:
        assert h.is_valid(X, A)


def test_isomorphism_examples():
    renamed = rename(K2, lambda t, a: f"n{a}")
    assert is_isomorphic(K2, renamed)
    assert not is_isomorphic(K2, digraph([0], [(0, 0)]))
    two_edges = disjoint_union([K2, K2])
    assert is_isomorphic(two_edges, power(K2, range(2)))
    assert find_isomorphism(K2, K3) is None


def test_hom_equivalence_examples():
    K44 = graph(range(8), [(a, b) for a in range(4) for b in range(4, 8)])
    assert is_hom_equivalent(K2, K44)
    pendant = graph(range(6), [(i, (i + 1) % 5) for i in range(5)] + [(0, 5)])
    assert is_hom_equivalent(cycle(5), pendant)
    assert not is_hom_equivalent(cycle(3), LOOP)


def test_power_examples():
    P = power(K2, range(2))
    assert set(P.domains["v"]) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert P.relations["E"] == {((0, 0), (1, 1)), ((1, 1), (0, 0)), ((0, 1), (1, 0)), ((1, 0), (0, 1))}
    P0 = power(K2, [])
    assert P0.domains["v"] == ((),) and P0.relations["E"] == {((), ())}
    assert power(bottom(), []).holds("C") and not power(bottom(), [0]).holds("C")
    assert is_isomorphic(power(K3, [0]), K3)


def test_quotient_examples():
    assert is_isomorphic(quotient(K3, []), K3)
    three = Structure(DIGRAPH, {"v": "abc"})
    q = quotient(three, [(("v", "a"), ("v", "b")), (("v", "b"), ("v", "c"))])
    assert len(q.domains["v"]) == 1
    directed = digraph(range(4), [(0, 1), (1, 2), (2, 3)])
    assert is_isomorphic(quotient(directed, [(("v", 0), ("v", 3))]), digraph(range(3), [(0, 1), (1, 2), (2, 0)]))
    two = Signature.make(["a", "b"], {})
    with pytest.raises(SignatureError):
        quotient(Structure(two, {"a": [0], "b": [0]}), [(("a", 0), ("b", 0))])


def test_disjoint_union_examples():
    u = disjoint_union([K2, K2])
    assert len(u.domains["v"]) == 4 and len(u.relations["E"]) == 4
    empty = Structure(DIGRAPH)
    assert is_isomorphic(disjoint_union([empty, K3]), K3)
    lu = disjoint_union([LOOP, digraph([0, 1], [(0, 1)])])
    assert len(lu.domains["v"]) == 3 and len(lu.relations["E"]) == 2


def test_nullary_structures():
    assert find_homomorphism(bottom(), top()) is not None
    assert find_homomorphism(top(), bottom()) is None
    assert OMEGA.types == ()


digraphs = st.integers(0, 2 ** 31).map(lambda s: random_digraph(random.Random(s), max_vertices=5))


@settings(max_examples=40, deadline=None)
@given(digraphs, digraphs, digraphs)
def test_homomorphisms_compose(X, Y, Z):
    f, g = find_homomorphism(X, Y), find_homomorphism(Y, Z)
    if f is not None and g is not None:
        assert f.compose(g).is_valid(X, Z)


@settings(max_examples=30, deadline=None)
@given(digraphs, st.integers(1, 3))
def test_power_projections_and_unit(B, n):
    assert is_isomorphic(power(B, [0]), B)
    P = power(B, range(n))
    for i in range(n):
        proj = Homomorphism({"v": {b: b[i] for b in P.domains["v"]}})
        assert proj.is_valid(P, B)


@settings(max_examples=30, deadline=None)
@given(digraphs, st.randoms(use_true_random=False))
def test_quotient_is_idempotent(A, rng):
    elems = list(A.elements())
    eqs = [(rng.choice(elems), rng.choice(elems)) for _ in range(rng.randint(0, 3))]
    Q = quotient(A, eqs)
    assert is_isomorphic(quotient(Q, []), Q)
