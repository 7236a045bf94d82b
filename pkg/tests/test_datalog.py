import random

import pytest

from cspforge import corpus
from cspforge.corpus import DIGRAPH, OMEGA, complete_graph, cycle, digraph, directed_cycle
from cspforge.datalog import (EQ, Atom, DatalogError, DatalogInterpretation, DatalogProgram, DDatalogReduction, Rule,
                              UnionGadget, Var, apply_interpretation, apply_union_gadget, compose_ddatalog,
                              compose_interpretations, compose_union_gadgets, evaluate_all, evaluate_program,
                              identity_interpretation, identity_reduction, identity_union, naive_fixpoint,
                              swap_union_interpretation, width)
from cspforge.structures import Signature, Structure, find_homomorphism, is_isomorphic

x, y = Var("x", "v"), Var("y", "v")


def test_odd_cycle_program():
    P = corpus.two_colouring_program()
    assert P.width() == 4
    assert evaluate_program(P, cycle(3)) == {()}
    assert evaluate_program(P, cycle(4)) == frozenset()
    assert evaluate_program(P, Structure(DIGRAPH)) == frozenset()


def test_program_validation():
    with pytest.raises(DatalogError):  # equality in the head
        DatalogProgram(DIGRAPH, (("Q", ("v", "v")),), (Rule(Atom(EQ, (x, y)), (Atom("E", (x, y)),)),), "Q")
    with pytest.raises(DatalogError):  # EDB in the head
        DatalogProgram(DIGRAPH, (), (Rule(Atom("E", (x, y)), (Atom("E", (y, x)),)),), "E")
    with pytest.raises(DatalogError):  # head variable not in the body
        DatalogProgram(DIGRAPH, (("Q", ("v",)),), (Rule(Atom("Q", (x,)), (Atom("E", (y, y)),)),), "Q")
    with pytest.raises(DatalogError):  # undeclared predicate
        DatalogProgram(DIGRAPH, (("Q", ("v",)),), (Rule(Atom("Q", (x,)), (Atom("R", (x,)),)),), "Q")


def test_edb_output_is_copied():
    P = DatalogProgram(DIGRAPH, (), (), "E")
    assert P.output != "E"
    assert evaluate_program(P, cycle(3)) == cycle(3).relations["E"]


def test_width_examples():
    assert width(corpus.line_digraph_reduction()) == 3
    unary = DatalogProgram(DIGRAPH, (("Q", ("v",)),), (Rule(Atom("Q", (x,)), (Atom("E", (x, x)),)),), "Q")
    assert unary.width() == 1


def test_semi_naive_matches_naive():
    rng = random.Random(4)
    P = corpus.transitive_closure_reduction().interpretation.relation_programs["E"]
    for _ in range(20):
        X = corpus.random_digraph(rng)
        assert evaluate_all(P, X)[P.output] == naive_fixpoint(P, X)[P.output]


def test_line_digraph_examples():
    delta = corpus.line_digraph_reduction()
    one = delta.apply(digraph("uv", [("u", "v")]))
    assert len(one.domains["v"]) == 1 and not one.relations["E"]
    p2 = delta.apply(digraph(range(3), [(0, 1), (1, 2)]))
    assert len(p2.domains["v"]) == 2 and len(p2.relations["E"]) == 1
    assert is_isomorphic(delta.apply(directed_cycle(3)), directed_cycle(3))


def test_union_gadget_examples():
    two = Signature.make(["a", "b"], {"R": ("a", "a"), "S": ("b", "b")})
    u = UnionGadget(two, DIGRAPH, {"a": "v", "b": "v"}, {"R": "E", "S": "E"})
    A = Structure(two, {"a": [0, 1], "b": [0, 1, 2]}, {"R": {(0, 1)}, "S": {(2, 0)}})
    out = apply_union_gadget(u, A)
    assert len(out.domains["v"]) == 5 and len(out.relations["E"]) == 2
    with pytest.raises(DatalogError):
        UnionGadget(two, DIGRAPH, {"a": "v", "b": "w"}, {"R": "E", "S": "E"})
    assert is_isomorphic(apply_union_gadget(identity_union(DIGRAPH), cycle(3)), cycle(3))


def test_union_composition_merges_in_steps():
    four = Signature.make([f"t{i}" for i in range(4)], {})
    two = Signature.make(["p", "q"], {})
    one = Signature.make(["v"], {})
    u1 = UnionGadget(four, two, {"t0": "p", "t1": "p", "t2": "q", "t3": "q"}, {})
    u2 = UnionGadget(two, one, {"p": "v", "q": "v"}, {})
    direct = UnionGadget(four, one, {t: "v" for t in four.types}, {})
    assert compose_union_gadgets(u1, u2) == direct
    assert compose_union_gadgets(u1, identity_union(two)) == u1


def test_interpretation_arity_checked():
    D = DatalogProgram(DIGRAPH, (("D", ("v",)),), (Rule(Atom("D", (x,)), (Atom(EQ, (x, x)),)),), "D")
    bad = DatalogProgram(DIGRAPH, (("Q", ("v",)),), (Rule(Atom("Q", (x,)), (Atom("E", (x, x)),)),), "Q")
    with pytest.raises(DatalogError):
        DatalogInterpretation(DIGRAPH, DIGRAPH, {"v": D}, {"E": bad})


def test_compose_examples():
    delta = corpus.line_digraph_reduction()
    path4 = digraph(range(4), [(i, i + 1) for i in range(3)])
    twice = compose_ddatalog(delta, delta).apply(path4)
    assert len(twice.domains["v"]) == 2 and len(twice.relations["E"]) == 1
    assert is_isomorphic(twice, delta.apply(delta.apply(path4)))
    rng = random.Random(2)
    ident = identity_reduction(DIGRAPH)
    for _ in range(10):
        X = corpus.random_digraph(rng, 5)
        assert is_isomorphic(compose_ddatalog(delta, ident).apply(X), delta.apply(X))
        phi = compose_interpretations(delta.interpretation, identity_interpretation(DIGRAPH))
        assert is_isomorphic(apply_interpretation(phi, X), delta.apply(X))


def test_composition_width_bound():
    delta = corpus.line_digraph_reduction()
    sq = corpus.square_reduction()
    psi = compose_interpretations(delta.interpretation, sq.interpretation)
    assert width(psi) <= width(delta) * width(sq)


def test_swap_switching_example():
    """Merging two types and four symbols into digraphs, then loop detection."""
    src = Signature.make(["a", "b"], {"R": ("a", "a"), "S": ("a", "b"), "T": ("b", "a"), "U": ("b", "b")})
    u = UnionGadget(src, DIGRAPH, {"a": "v", "b": "v"}, {n: "E" for n in "RSTU"})
    phi = corpus.loop_reduction().interpretation
    phi2, u2 = swap_union_interpretation(u, phi)
    rng = random.Random(5)
    for _ in range(30):
        A = corpus.random_structure(src, rng, max_size=3, density=0.2)
        left = apply_interpretation(phi, apply_union_gadget(u, A))
        right = apply_union_gadget(u2, apply_interpretation(phi2, A))
        assert is_isomorphic(left, right)
        has_loop = any(a == b for n in "RU" for a, b in A.relations[n])
        assert left.holds("C") == has_loop


def test_swap_identity():
    phi = corpus.square_reduction().interpretation
    phi2, u2 = swap_union_interpretation(identity_union(DIGRAPH), phi)
    X = cycle(5)
    assert is_isomorphic(apply_union_gadget(u2, apply_interpretation(phi2, X)), apply_interpretation(phi, X))


def test_monotone_on_pool():
    rng = random.Random(9)
    for _ in range(10):
        A, B, h = corpus.homomorphic_pair(rng)
        for r in corpus.reduction_pool().values():
            if r.source == DIGRAPH:
                assert find_homomorphism(r.apply(A), r.apply(B)) is not None


def test_compiled_gadget_then_loop_check_detects_odd_cycle():
    from cspforge.gadgets import compile_gadget
    chain = compose_ddatalog(compile_gadget(corpus.k2_projective_gadget()), corpus.loop_reduction())
    assert chain.apply(cycle(3)).holds("C")
    assert not chain.apply(cycle(4)).holds("C")


def test_reduction_requires_matching_signatures():
    with pytest.raises(DatalogError):
        DDatalogReduction(identity_interpretation(DIGRAPH), identity_union(OMEGA))
    assert complete_graph(1).size() == 1
