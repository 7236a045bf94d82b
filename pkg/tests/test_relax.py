import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cspforge import corpus
from cspforge.corpus import complete_graph, cycle, digraph, single_edge
from cspforge.minions import polymorphism_minion, projections_minion
from cspforge.relax import (GroupSystem, GroupSystemError, LinearSystem, LinearSystemError, affine_system,
                            brute_force_group_system, export_group_system, export_linear_system,
                            group_template, lambda_conv, lp_feasible, parse_group_system,
                            parse_linear_system, sa_via_label_cover, sherali_adams_system,
                            solve_group_system, structure_to_group_system, tensor_interpretation,
                            tensor_power, tensor_test, tseitin_instance, uniform_witness)
from cspforge.labelcover import LabelCoverInstance, constraint
from cspforge.structures import find_homomorphism

K2 = complete_graph(2)


def _system(variables, rows, nonneg=True):
    L = LinearSystem()
    for v in variables:
        L.add_variable(v, nonneg=nonneg)
    for r, b in rows:
        L.add_row(r, b)
    return L


def test_lp_examples():
    assert lp_feasible(_system("xy", [({"x": 1, "y": 1}, 1)]))
    assert not lp_feasible(_system("xy", [({"x": 1, "y": 1}, 1), ({"x": 1, "y": -1}, 2)]))
    free = _system("x", [({"x": 1}, -3)], nonneg=False)
    res = lp_feasible(free)
    assert res and res.witness["x"] == -3
    half = _system("xy", [({"x": 2, "y": 2}, 1), ({"x": 1, "y": -1}, 0)])
    assert lp_feasible(half).witness == {"x": Fraction(1, 4), "y": Fraction(1, 4)}


def test_lp_upper_bounds():
    L = LinearSystem()
    L.add_variable("x", upper=True)
    L.add_row({"x": 1}, 2)
    assert not lp_feasible(L)
    with pytest.raises(LinearSystemError):
        L.add_row({"z": 1}, 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_lp_witness_is_checked(coeffs, point):
    # rows built around a nonnegative point are always feasible
    L = LinearSystem()
    for v in "abc":
        L.add_variable(v)
    for row in coeffs:
        L.add_row(dict(zip("abc", row)), sum(c * p for c, p in zip(row, point)))
    res = lp_feasible(L)
    assert res and L.satisfied_by(res.witness)


def test_linear_text_round_trip():
    L = sherali_adams_system(K2, 2, single_edge())
    text = export_linear_system(L)
    again = parse_linear_system(text)
    assert export_linear_system(again) == text
    assert bool(lp_feasible(again)) == bool(lp_feasible(L))
    with pytest.raises(LinearSystemError, match="line 1"):
        parse_linear_system("var x maybe\n")


def test_integer_solver_examples():
    def one(mod, a, b):
        G = GroupSystem(mod)
        G.add_variable("x")
        G.add_row({"x": a}, b)
        return solve_group_system(G)

    assert one(None, 2, 1) is None
    assert one(3, 2, 1) == {"x": 2}
    assert one(4, 2, 1) is None
    G = GroupSystem(None)
    G.add_variable("x")
    G.add_variable("y")
    G.add_row({"x": 6, "y": 4}, 2)
    sol = solve_group_system(G)
    assert sol is not None and 6 * sol["x"] + 4 * sol["y"] == 2
    with pytest.raises(GroupSystemError):
        GroupSystem(0)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 6]), st.integers(0, 10_000))
def test_integer_solver_matches_brute_force(mod, seed):
    rng = random.Random(seed)
    G = GroupSystem(mod)
    names = [f"x{i}" for i in range(rng.randint(1, 3))]
    for v in names:
        G.add_variable(v)
    for _ in range(rng.randint(1, 3)):
        G.add_row({v: rng.randrange(mod) for v in names}, rng.randrange(mod))
    assert (solve_group_system(G) is None) == (brute_force_group_system(G) is None)


def test_group_text_round_trip():
    G = parse_group_system("mod 5\nvar a\nvar b\n2*a + 3*b = 1\n")
    assert G.modulus == 5 and len(G.rows) == 1
    assert parse_group_system(export_group_system(G)) == G
    assert parse_group_system("mod Z\nvar a\n2*a = 4\n").modulus is None
    with pytest.raises(GroupSystemError):
        parse_group_system("var a\n")
    with pytest.raises(GroupSystemError):
        parse_group_system("mod 3\nvar a\n1/2*a = 1\n")


def test_group_template_counts():
    for n in (2, 3, 5):
        T = group_template(n, (1,))
        assert len(T.relations["add"]) == n * n
        assert T.relations["is_1"] == {(1,)}
    with pytest.raises(ValueError):
        group_template(None)


def test_tseitin_on_k4():
    edges = list(itertools.combinations(range(4), 2))
    odd = tseitin_instance(range(4), edges, {0: 1})
    even = tseitin_instance(range(4), edges, {0: 1, 1: 1})
    assert solve_group_system(structure_to_group_system(odd, 2)) is None
    assert solve_group_system(structure_to_group_system(even, 2)) is not None
    Z2 = group_template(2)
    assert find_homomorphism(odd, Z2) is None
    assert find_homomorphism(even, Z2) is not None


def test_sa_variable_count():
    L = sherali_adams_system(K2, 2, single_edge())
    assert len(L.variables) == 7
    assert lp_feasible(L)


def test_sa_on_triangle():
    assert lp_feasible(sherali_adams_system(K2, 2, cycle(3)))
    assert not lp_feasible(sherali_adams_system(K2, 3, cycle(3)))
    assert not lp_feasible(sa_via_label_cover(K2, 3, cycle(3)))


def test_lambda_conv_example():
    S = LabelCoverInstance([("u", [0, 1]), ("v", ["a", "b"])], [constraint("u", "v", {0: "a", 1: "a"})])
    L = lambda_conv(S)
    res = lp_feasible(L)
    assert res and res.witness[("v", "b")] == 0
    assert len(L.rows) == 4
    assert all(v in L.nonneg for v in L.variables)


def test_affine_and_uniform_witness():
    edges = list(itertools.combinations(range(4), 2))
    odd = tseitin_instance(range(4), edges, {0: 1})
    G = affine_system(group_template(2), 2, odd, 3)
    x = uniform_witness(G, 2)
    assert G.satisfied_by(x)


def test_tensor_power_one_is_identity():
    X = corpus.directed_cycle(3)
    T1 = tensor_power(X, 1)
    assert len(T1.domains["v"]) == 3
    assert {(a, b) for (a, b) in T1.relations["E"]} and len(T1.relations["E"]) == 3
    assert len(T1.relations["T"]) == 3


def test_tensor_arities():
    tau = tensor_interpretation(K2.signature, 2)
    assert dict(tau.target.symbols) == {"E": ("v",) * 4, "T": ("v",) * 4}
    T2 = tensor_power(K2, 2)
    assert len(T2.domains["v"]) == 4
    assert len(T2.relations["E"]) == len(K2.relations["E"])
    tau3 = tensor_interpretation(K2.signature, 3)
    assert dict(tau3.target.symbols)["T"] == ("v",) * 27


def test_tensor_test_examples():
    P = projections_minion(6)
    assert not tensor_test(complete_graph(3), P, 1, complete_graph(4))
    assert tensor_test(complete_graph(3), P, 1, cycle(5))
    pol = polymorphism_minion(K2, K2, 2)
    assert tensor_test(K2, pol, 1, digraph("ab", [("a", "b")]))
