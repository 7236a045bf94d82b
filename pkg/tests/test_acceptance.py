"""Acceptance criteria, one test each, at their stated thresholds.

Each test prints a single PASS/FAIL line. Run directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""

import itertools
import sys
import time

import pytest

from cspforge import corpus, harness
from cspforge.datalog import evaluate_program
from cspforge.labelcover import k_consistency_test
from cspforge.minions import find_minion_homomorphism, omega, polymorphism_minion
from cspforge.relax import (affine_system, group_template, solve_group_system, structure_to_group_system,
                            tseitin_instance, uniform_witness)


def _odd_cycle():
    prog = corpus.two_colouring_program()
    bad = [n for n in (3, 5, 7, 9, 11) if not evaluate_program(prog, corpus.cycle(n))]
    bad += [n for n in (4, 6, 8, 10) if evaluate_program(prog, corpus.cycle(n))]
    return not bad, f"C derived on odd cycles 3..11 only; mismatches: {bad or 'none'}"


def _suite(name, cases, minimum, seed=0):
    def run():
        report = harness.verify(name, seed=seed, cases=cases)
        assert len(report.cases) >= minimum
        return report.passed, (f"{name}: {len(report.cases)} cases, {len(report.failures)} failed, "
                               f"{report.runtime:.1f}s")
    return run


def _tseitin():
    K4 = list(range(4))
    X = tseitin_instance(K4, list(itertools.combinations(K4, 2)), {0: 1})
    Z2 = group_template(2, (1,))
    consistent = k_consistency_test(Z2, 3, X)
    unsat = solve_group_system(structure_to_group_system(X, 2)) is None
    G = affine_system(Z2, 3, X, 3)
    witness_ok = G.satisfied_by(uniform_witness(G, 2))
    ok = consistent and unsat and witness_ok
    return ok, (f"3-consistent={consistent}, unsatisfiable over Z_2={unsat}, "
                f"uniform witness satisfies all {len(G.rows)} Z_3 rows={witness_ok}")


def _minion_counts():
    K2, K3, bot = corpus.complete_graph(2), corpus.complete_graph(3), corpus.bottom()
    pk2 = polymorphism_minion(K2, K2, 2)
    pk3 = polymorphism_minion(K3, K3, 1)
    wbot = omega(polymorphism_minion(bot, bot, 4))
    counts = {
        "Pol(K2)^(1)": (pk2.size(1), 2),
        "Pol(K2)^(2)": (pk2.size(2), 4),
        "Pol(K3)^(1)": (pk3.size(1), 6),
    }
    for n in range(1, 5):
        counts[f"omega(Pol(bot))^({n})"] = (wbot.size(n), 2 ** n - 1)
    no_hom = find_minion_homomorphism(omega(polymorphism_minion(bot, bot, 2)), pk2) is None
    ok = no_hom and all(got == want for got, want in counts.values())
    detail = ", ".join(f"{k}={got}" for k, (got, _) in counts.items())
    return ok, f"{detail}; omega(Pol(bot)) -> Pol(K2) at truncation 2: {'none' if no_hom else 'found'}"


CRITERIA = [
    (1, "odd-cycle Datalog program", _odd_cycle),
    (2, "compiled gadgets, C4 to K_{4,4}, 200 random digraphs", _suite("gadget-compile", 201, 201)),
    (3, "composition of reductions, 62 pairs twice", _suite("composition", 124, 50)),
    (4, "monotonicity over the pool and 100 homomorphic pairs", _suite("monotone", 100, 100)),
    (5, "k-consistency completeness on planted instances", _suite("completeness", 100, 100)),
    (6, "bounded width via the bottom template", _suite("bounded-width", 100, 100)),
    (7, "Sherali-Adams equivalence, 100 per (A, k) plus C3/K2", _suite("sa-equivalence", 402, 402)),
    (8, "uniform Z_3 witness for 3-consistent Tseitin on K4", _tseitin),
    (9, "arc-consistency adjunction against Pol(K2) and Pol(K3)", _suite("adjunction", 60, 50)),
    (10, "co-Kleisli unit and associativity laws", _suite("comonad", 24, 20)),
    (11, "integer solver against exhaustive oracles", _suite("snf-oracle", 240, 200)),
    (12, "minion counts and no omega(Pol(bot)) -> Pol(K2)", _minion_counts),
]


def _line(number, title, ok, detail, seconds):
    return f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  [{detail}; {seconds:.1f}s]"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion-{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, capsys):
    start = time.perf_counter()
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(number, title, ok, detail, time.perf_counter() - start))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        start = time.perf_counter()
        ok, detail = check()
        failed += not ok
        print(_line(number, title, ok, detail, time.perf_counter() - start), flush=True)
    sys.exit(1 if failed else 0)
