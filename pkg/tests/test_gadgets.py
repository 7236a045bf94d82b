import random

from cspforge import corpus
from cspforge.corpus import DIGRAPH, complete_graph, cycle, digraph, graph, single_edge
from cspforge.gadgets import (apply_gadget, apply_projective_gadget, apply_universal_gadget, compile_gadget,
                              recursive_predicates, reify, reify_to_label_cover, to_projective)
from cspforge.labelcover import LabelCoverInstance, constraint
from cspforge.structures import Structure, find_homomorphism, is_hom_equivalent, is_isomorphic, power

K2 = complete_graph(2)
LOOP = digraph([0], [(0, 0)])


def test_path_gadget_on_single_arc():
    out = apply_gadget(corpus.path_gadget(3), digraph("uv", [("u", "v")]))
    assert is_isomorphic(out, digraph(range(4), [(0, 1), (1, 2), (2, 3)]))


def test_k2_gadget_examples():
    g = corpus.k2_gadget()
    assert is_isomorphic(apply_gadget(g, cycle(4)), single_edge())
    assert is_isomorphic(apply_gadget(g, cycle(3)), LOOP)
    gp = corpus.k2_projective_gadget()
    assert is_isomorphic(apply_projective_gadget(gp, cycle(4)), single_edge())


def test_identity_glued_gadget_collapses_components():
    star = digraph(["*"], [])
    g = corpus.Gadget(DIGRAPH, DIGRAPH, {"v": star}, {"E": digraph(["*"], [("*", "*")])},
                      {("E", 1): corpus._identity(star), ("E", 2): corpus._identity(star)})
    X = digraph(range(4), [(0, 1), (2, 3)])
    out = apply_gadget(g, X)
    assert len(out.domains["v"]) == 2 and len(out.relations["E"]) == 2


def test_empty_input_gives_empty_output():
    out = apply_gadget(corpus.k2_gadget(), Structure(DIGRAPH))
    assert out.size() == 0 and not out.relations["E"]


def test_reify_examples():
    R = reify(digraph("uv", [("u", "v")]))
    assert R.domains["v"] == ("u", "v")
    (etype,) = [t for t in R.signature.types if t != "v"]
    assert R.domains[etype] == (("u", "v"),)
    rels = sorted(R.relations.items())
    assert {frozenset(v) for _, v in rels} == {frozenset({(("u", "v"), "u")}), frozenset({(("u", "v"), "v")})}
    assert len(reify(Structure(DIGRAPH, {"v": [0]})).domains[etype]) == 0
    C3 = reify(cycle(3))
    assert len(C3.domains[etype]) == 6 and sum(len(r) for r in C3.relations.values()) == 12


def test_reify_to_label_cover_examples():
    S = reify_to_label_cover(K2, digraph("uv", [("u", "v")]))
    types = dict(S.variables)
    assert types[("v", "u")] == (0, 1) and types[("E", ("u", "v"))] == ((0, 1), (1, 0))
    assert len(S.constraints) == 2
    loop = reify_to_label_cover(K2, LOOP)
    assert {c.target for c in loop.constraints} == {("v", 0)}
    assert reify_to_label_cover(K2, Structure(DIGRAPH)).variables == ()


def test_projective_decomposition():
    rng = random.Random(3)
    for g in [corpus.path_gadget(3), corpus.k2_gadget()] + [corpus.random_gadget(rng) for _ in range(10)]:
        gp = to_projective(g)
        for _ in range(3):
            X = corpus.random_digraph(rng, 4)
            assert is_isomorphic(apply_gadget(g, X), apply_projective_gadget(gp, reify(X)))


def test_path_gadget_projective_form():
    gp = to_projective(corpus.path_gadget(3))
    assert len(gp.nodes["v"].domains["v"]) == 1
    assert set(gp.glue[k].maps["v"]["*"] for k in gp.glue) == {0, 3}


def test_universal_gadget_examples():
    S = LabelCoverInstance([("x", [0, 1, 2])])
    assert is_isomorphic(apply_universal_gadget(K2, S), power(K2, range(3)))
    T = LabelCoverInstance([("x", [0, 1]), ("y", ["*"])], [constraint("x", "y", {0: "*", 1: "*"})])
    out = apply_universal_gadget(K2, T)
    # 4 + 2 copies; each b in K2^{*} is glued to the constant pair (b, b)
    assert len(out.domains["v"]) == 4


def test_universal_gadget_evaluates_at_a_solution():
    # a solution s of S gives π_B(S) → B by sending (x, b) to b at the label s(x)
    S = LabelCoverInstance([("x", [0, 1, 2]), ("y", ["a", "b"]), ("z", ["c"])],
                           [constraint("x", "y", {0: "a", 1: "b", 2: "b"}),
                            constraint("y", "z", {"a": "c", "b": "c"})])
    solution = {"x": 1, "y": "b", "z": "c"}
    out = apply_universal_gadget(K2, S)
    ev = {}
    for t, elems in out.domains.items():
        for e in elems:
            v, b = e
            ev[e] = b[S.labels(v).index(solution[v])]
    for name, rel in out.relations.items():
        for tup in rel:
            assert tuple(ev[e] for e in tup) in K2.relations[name]
    assert find_homomorphism(out, K2) is not None


def test_compiled_k2_gadget_on_c4_is_k44():
    r = compile_gadget(corpus.k2_projective_gadget())
    out = r.apply(cycle(4))
    K44 = graph(range(8), [(a, b) for a in range(4) for b in range(4, 8)])
    assert is_isomorphic(out, K44)
    assert is_hom_equivalent(out, single_edge())


def test_compiled_path_gadget_on_single_edge():
    r = compile_gadget(corpus.path_gadget(3))
    X = digraph("uv", [("u", "v")])
    assert is_hom_equivalent(r.apply(X), apply_gadget(corpus.path_gadget(3), X))
    assert is_hom_equivalent(r.apply(X), digraph(range(4), [(0, 1), (1, 2), (2, 3)]))


def test_compiled_recursion_only_through_identification():
    r = compile_gadget(corpus.k2_projective_gadget())
    for _, _, prog in r.interpretation.components():
        rec = recursive_predicates(prog)
        assert all(isinstance(p, tuple) and p[0] == "I" for p in rec)


def test_gadget_monotone():
    rng = random.Random(8)
    for _ in range(20):
        A, B, _ = corpus.homomorphic_pair(rng)
        g = corpus.random_gadget(rng)
        assert find_homomorphism(apply_gadget(g, A), apply_gadget(g, B)) is not None
