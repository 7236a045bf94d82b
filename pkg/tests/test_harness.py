import pytest

from cspforge import harness


def test_suites_registered():
    assert set(harness.SUITES) == {
        "monotone", "composition", "swap", "gadget-compile", "universality", "completeness",
        "bounded-width", "sa-equivalence", "affine-uniform", "adjunction", "comonad", "snf-oracle", "tensor",
    }


@pytest.mark.parametrize("name", sorted(harness.SUITES))
def test_small_runs_pass(name):
    report = harness.verify(name, seed=123, cases=3)
    assert report.passed, report.text(verbose=True)
    assert len(report.cases) == 3


def test_cases_are_reproducible():
    a = harness.verify("snf-oracle", seed=5, cases=6)
    b = harness.verify("snf-oracle", seed=5, cases=6)
    assert [c.label for c in a.cases] == [c.label for c in b.cases]
    single = harness.verify("snf-oracle", seed=5, only=4)
    assert [c.label for c in single.cases] == [a.cases[4].label]
    assert a.cases[4].repro == "cspforge verify snf-oracle --seed 5 --case 4"


def test_report_serialization():
    d = harness.verify("adjunction", seed=0, cases=2).to_dict()
    assert d["suite"] == "adjunction" and d["seed"] == 0 and len(d["cases"]) == 2
