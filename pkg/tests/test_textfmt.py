import json
import random

import pytest

from cspforge import corpus, textfmt
from cspforge.datalog import evaluate_program as evaluate
from cspforge.textfmt import ParseError, dumps, from_json, parse, to_json
from cspforge.structures import is_isomorphic

C3_TEXT = """
# a triangle
signature G { type v; rel E : v v; }
structure C3 : G { v = { 0, 1, 2 }; E = { (0,1), (1,0), (1,2), (2,1), (2,0), (0,2) }; }
"""


def test_parse_structure():
    doc = parse(C3_TEXT)
    C3 = doc.get("C3", "structures")
    assert is_isomorphic(C3, corpus.cycle(3))
    assert doc.get("G", "signatures") == C3.signature


def test_program_round_trip():
    prog = corpus.two_colouring_program()
    text = dumps(prog, "Odd")
    again = parse(text).get("Odd", "programs")
    for n in (3, 4, 5):
        X = corpus.cycle(n)
        assert evaluate(again, X) == evaluate(prog, X)
    assert dumps(again, "Odd") == text


@pytest.mark.parametrize("make", [corpus.k2_gadget, corpus.k2_projective_gadget, corpus.path_gadget])
def test_gadget_round_trip(make):
    g = make()
    text = dumps(g, "G")
    assert dumps(parse(text).get("G", "gadgets", "projectives"), "G") == text


def test_label_cover_round_trips():
    rng = random.Random(9)
    for _ in range(15):
        S = corpus.random_label_cover(rng)
        assert parse(dumps(S, "L")).get("L", "labelcovers") == S
        assert from_json(json.loads(json.dumps(to_json(S)))) == S


def test_structure_json_round_trip():
    X = corpus.planted_instance(corpus.complete_graph(3), random.Random(0))[0]
    assert from_json(json.loads(json.dumps(to_json(X)))) == X


def test_reduction_pool_round_trip():
    for name, red in corpus.reduction_pool().items():
        interp = getattr(red, "interpretation", red)
        text = dumps(interp, "R")
        assert dumps(parse(text).get("R", "interpretations"), "R") == text, name


def test_errors_carry_positions():
    with pytest.raises(ParseError) as err:
        parse("signature G { type v; rel E : v w; }")
    assert str(err.value).startswith("1:")
    with pytest.raises(ParseError) as err:
        parse("signature G { type v; }\nstructure X : G { v = { 0 }\n")
    assert str(err.value).split(":")[0] == "2" or str(err.value).split(":")[0] == "3"


def test_head_equality_rejected():
    text = """signature G { type v; rel E : v v; }
program P : G { idb Q : v v; output Q; x = y :- E(x, y). }"""
    with pytest.raises(ParseError):
        parse(text)


def test_identical_redeclaration_allowed():
    doc = parse(C3_TEXT)
    parse(C3_TEXT, into=doc)
    clash = C3_TEXT.replace("(0,2) }", "(0,2), (0,0) }")
    with pytest.raises(ParseError):
        parse(clash, into=doc)


def test_envelope_shape():
    d = json.loads(textfmt.envelope("hom", {"found": True}, 5))
    assert d == {"kind": "hom", "payload": {"found": True}, "meta": {"seed": 5}}
