import random
from fractions import Fraction

import pytest

from cspforge import corpus
from cspforge.corpus import complete_graph
from cspforge.minions import (MinionError, MinionMap, RationalDistribution, bind, check_arc_adjunction,
                              cokleisli_compose, counit, find_minion_homomorphism, omega,
                              polymorphism_minion, projections_minion, qconv_minor, qconv_to_omega)

K2 = complete_graph(2)


@pytest.fixture(scope="module")
def minions():
    bot = corpus.bottom()
    return {
        "P": projections_minion(3),
        "K2": polymorphism_minion(K2, K2, 3),
        "bot": polymorphism_minion(bot, bot, 3),
    }


def test_sizes(minions):
    assert [minions["P"].size(n) for n in (1, 2, 3)] == [1, 2, 3]
    # K2^n is a perfect matching on 2^n points, so there are 2^(2^(n-1)) maps to K2
    assert [minions["K2"].size(n) for n in (1, 2, 3)] == [2, 4, 16]
    assert [minions["bot"].size(n) for n in (1, 2, 3)] == [1, 1, 1]


def test_omega_sizes(minions):
    assert [omega(minions["bot"]).size(n) for n in (1, 2, 3)] == [1, 3, 7]
    assert [omega(minions["P"]).size(n) for n in (1, 2, 3)] == [1, 4, 12]
    assert omega(minions["P"]) is omega(minions["P"])


def test_laws(minions):
    for M in minions.values():
        assert M.check_laws() == []
    assert omega(minions["K2"]).check_laws() == []


def test_minor_truncation(minions):
    P = minions["P"]
    with pytest.raises(MinionError):
        P.minor(P.elements[1][0], (0,), 4)


def test_empty_polymorphism_set():
    with pytest.raises(MinionError):
        polymorphism_minion(K2, corpus.digraph([0], []), 2)


def test_projection_minors(minions):
    P = minions["P"]
    p2_of_3 = P.elements[3][1]
    assert P.render[P.minor(p2_of_3, (0, 2, 2), 3)] == "p3/3"
    assert P.render[P.minor(p2_of_3, (1, 0, 1), 2)] == "p1/2"


def test_counit_and_bind(minions):
    for M in minions.values():
        nu = counit(M)
        assert nu.is_natural()
        W = omega(M)
        flat = bind(nu, W)
        assert flat.is_natural()
        assert all(flat(e) == e for e in W.arity_of)
        assert cokleisli_compose(nu, nu).mapping == nu.mapping


def test_bind_rejects_mismatch(minions):
    nu = counit(minions["P"])
    with pytest.raises(MinionError):
        bind(nu, omega(minions["K2"]))


def test_non_natural_map_detected(minions):
    P = minions["P"]
    swap = {f: f for f in P.arity_of}
    a, b = P.elements[2]
    swap[a], swap[b] = b, a
    swap_only_arity2 = MinionMap(P, P, swap)
    assert not swap_only_arity2.is_natural()


def test_projections_map_everywhere(minions):
    P = minions["P"]
    for M in minions.values():
        h = find_minion_homomorphism(P, M, random.Random(0))
        assert h is not None and h.is_natural()


def test_no_omega_bottom_to_k2():
    bot = corpus.bottom()
    W = omega(polymorphism_minion(bot, bot, 2))
    assert find_minion_homomorphism(W, polymorphism_minion(K2, K2, 2)) is None


def test_arc_adjunction(minions):
    rng = random.Random(5)
    for _ in range(30):
        X = corpus.random_label_cover(rng)
        assert check_arc_adjunction(X, minions["K2"])
        assert check_arc_adjunction(X, minions["P"])


def test_qconv_minor_example():
    lam = RationalDistribution((0, 1, 2), (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))
    out = qconv_minor(lam, {0: 1, 1: 1, 2: 2}, (1, 2))
    assert out.weights == (Fraction(3, 4), Fraction(1, 4))


def test_qconv_to_omega():
    lam = RationalDistribution("abc", (Fraction(2, 3), 0, Fraction(1, 3)))
    supp, restricted = qconv_to_omega(lam)
    assert supp == ("a", "c")
    assert restricted.weights == (Fraction(2, 3), Fraction(1, 3))


def test_distribution_validation():
    with pytest.raises(ValueError):
        RationalDistribution((0, 1), (Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        RationalDistribution((0, 1), (2, -1))
