import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cspforge import corpus
from cspforge.corpus import complete_graph, cycle, digraph, lift_to, with_falsity
from cspforge.labelcover import (LabelCoverInstance, arc_consistency_reduce, arc_consistent_sets, constraint,
                                 enforce_arc_consistency, has_falsity_symbol, ignored_constraint_count,
                                 k_consistency_reduce, k_consistency_test, label_cover_template, pi_of_symbol,
                                 sigma_k)
from cspforge.structures import SignatureError, find_homomorphism

K2 = complete_graph(2)


def _shuffled(S: LabelCoverInstance, rng: random.Random) -> LabelCoverInstance:
    cons = list(S.constraints)
    rng.shuffle(cons)
    return LabelCoverInstance(S.variables, cons)


def test_pruning_example():
    S = LabelCoverInstance([("u", [0, 1]), ("v", ["a", "b"]), ("w", ["a"])],
                           [constraint("u", "v", {0: "a", 1: "a"}), constraint("w", "v", {"a": "a"})])
    F = arc_consistent_sets(S)
    assert F == {"u": {0, 1}, "v": {"a"}, "w": {"a"}}
    T = enforce_arc_consistency(S)
    assert T.labels("v") == ("a",)
    assert not T.empty_types()


def test_chain_empties():
    S = LabelCoverInstance([("x", [0, 1]), ("y", [0, 1]), ("z", [0])],
                           [constraint("x", "y", {0: 1, 1: 1}), constraint("x", "z", {0: 0, 1: 0}),
                            constraint("y", "z", {0: 0, 1: 0}), constraint("z", "y", {0: 0})])
    F = arc_consistent_sets(S)
    assert all(not ls for ls in F.values())


def test_instance_validation():
    with pytest.raises(SignatureError):
        LabelCoverInstance([("u", [0, 1]), ("v", [0])], [constraint("u", "v", {0: 0})])
    with pytest.raises(SignatureError):
        LabelCoverInstance([("u", [0]), ("v", [0])], [constraint("u", "v", {0: 5})])
    with pytest.raises(SignatureError):
        LabelCoverInstance([("u", [0])], [constraint("u", "w", {0: 0})])


def test_template_and_symbols():
    S = LabelCoverInstance([("u", [0, 1]), ("v", ["a"])], [constraint("u", "v", {0: "a", 1: "a"})])
    (c,) = S.constraints
    sym = S.symbol(c)
    assert pi_of_symbol(sym) == {0: "a", 1: "a"}
    sig = S.signature()
    P = label_cover_template(sig)
    assert P.relations[sym] == {(0, "a"), (1, "a")}
    assert find_homomorphism(S.to_structure(sig), P) is not None


def test_sigma_k_on_single_arc():
    X = digraph("uv", [("u", "v")])
    S = sigma_k(K2, X, 2)
    assert len(S.variables) == 4
    assert len(S.constraints) == 5
    full = [ls for v, ls in S.variables if len(v) == 2]
    assert full == [((0, 1), (1, 0))]


def test_sigma_3_on_triangle_empties():
    S = enforce_arc_consistency(sigma_k(K2, cycle(3), 3))
    assert S.empty_types()
    assert all(not ls for _, ls in S.variables)


def test_k_consistency_on_triangle():
    assert k_consistency_test(K2, 2, cycle(3))
    assert not k_consistency_test(K2, 3, cycle(3))
    assert k_consistency_test(K2, 1, cycle(5))


def test_ignored_constraints():
    X = digraph("uv", [("u", "v"), ("u", "u")])
    assert ignored_constraint_count(X, 1) == 1
    assert ignored_constraint_count(X, 2) == 0


def test_homomorphic_instances_accepted():
    rng = random.Random(4)
    for A in (K2, complete_graph(3), corpus.directed_cycle(3)):
        for _ in range(8):
            X, _ = corpus.planted_instance(A, rng, size=3)
            for k in (1, 2, 3):
                assert k_consistency_test(A, k, X)


def test_k_consistency_reduce_asserts_falsity():
    B = with_falsity(K2)
    assert has_falsity_symbol(B)
    assert not has_falsity_symbol(K2)
    X = lift_to(cycle(3), B.signature)
    out = k_consistency_reduce(B, B, 3, X)
    assert out.holds(corpus.falsity_name(K2.signature))
    out2 = k_consistency_reduce(B, B, 2, X)
    assert not out2.holds(corpus.falsity_name(K2.signature))


def test_arc_consistency_reduce_maps_to_template():
    rng = random.Random(2)
    for _ in range(10):
        X, _ = corpus.planted_instance(K2, rng, size=3)
        out = arc_consistency_reduce(K2, K2, X)
        assert find_homomorphism(out, K2) is not None


def test_scheduling_order_does_not_matter():
    rng = random.Random(11)
    for _ in range(40):
        S = corpus.random_label_cover(rng, max_variables=4, max_constraints=5)
        F = arc_consistent_sets(S)
        for _ in range(3):
            assert arc_consistent_sets(_shuffled(S, rng)) == F


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 2))
def test_larger_k_is_stronger(seed, k):
    rng = random.Random(seed)
    X = corpus.random_digraph(rng, 4)
    if not k_consistency_test(K2, k + 1, X):
        return
    assert k_consistency_test(K2, k, X)


def test_sigma_labels_are_partial_homs():
    X = corpus.directed_cycle(3)
    A = complete_graph(3)
    S = sigma_k(A, X, 2)
    for K, labels in S.variables:
        for f in labels:
            img = dict(zip(K, f))
            for a, b in itertools.product(K, K):
                if (a[1], b[1]) in X.relations["E"]:
                    assert (img[a], img[b]) in A.relations["E"]
