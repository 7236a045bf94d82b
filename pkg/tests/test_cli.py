import json

import pytest

from cspforge.cli import main

SIG = "signature G { type v; rel E : v v; }\n"
K2 = SIG + "structure K2 : G { v = { 0, 1 }; E = { (0,1), (1,0) }; }\n"
C3 = SIG + "structure C3 : G { v = { 0, 1, 2 }; E = { (0,1), (1,0), (1,2), (2,1), (2,0), (0,2) }; }\n"
C4 = SIG + "structure C4 : G { v = { 0, 1, 2, 3 }; E = { (0,1), (1,0), (1,2), (2,1), (2,3), (3,2), (3,0), (0,3) }; }\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"k2": K2, "c3": C3, "c4": C4}.items():
        p = tmp_path / f"{name}.str"
        p.write_text(text)
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_hom_exit_codes(files, capsys):
    assert main(["hom", "--template", files["k2"], "--instance", files["c4"]]) == 0
    assert main(["hom", "--template", files["k2"], "--instance", files["c3"]]) == 1


def test_hom_json(files, capsys):
    assert main(["hom", "--template", files["k2"], "--instance", files["c4"], "--format", "json",
                 "--seed", "3"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["kind"] == "hom" and d["meta"]["seed"] == 3


def test_seed_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("CSPFORGE_SEED", "41")
    main(["hom", "--template", files["k2"], "--instance", files["c4"], "--format", "json"])
    assert json.loads(capsys.readouterr().out)["meta"]["seed"] == 41


def test_kcons_test(files):
    assert main(["kcons-test", "--template", files["k2"], "--instance", files["c3"], "-k", "2"]) == 0
    assert main(["kcons-test", "--template", files["k2"], "--instance", files["c3"], "-k", "3"]) == 1


def test_sa_export_and_check(files, capsys):
    for k, expected in ((2, 0), (3, 1)):
        out = files["dir"] / f"sa{k}.lp"
        assert main(["sa", "--template", files["k2"], "--instance", files["c3"], "-k", str(k),
                     "--out", str(out)]) == 0
        assert main(["lp-check", str(out)]) == expected


def test_zsolve(files):
    p = files["dir"] / "g.sys"
    p.write_text("mod 4\nvar a\n2*a = 1\n")
    assert main(["zsolve", str(p)]) == 1
    p.write_text("mod 3\nvar a\n2*a = 1\n")
    assert main(["zsolve", str(p)]) == 0


def test_missing_file_and_bad_input(files, capsys):
    assert main(["hom", "--template", files["k2"], "--instance", "/nonexistent.str"]) == 2
    bad = files["dir"] / "bad.str"
    bad.write_text("signature G { type v; rel E : v x; }\n")
    assert main(["hom", "--template", files["k2"], "--instance", str(bad)]) == 2
    assert "1:" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2


def test_pol_and_omega(files, capsys):
    assert main(["pol", "--template", files["k2"], "--max-arity", "2"]) == 0
    out = capsys.readouterr().out
    assert "2" in out and "4" in out
    assert main(["omega", "P", "--max-arity", "3"]) == 0


def test_verify_single_case(capsys):
    assert main(["verify", "composition", "--seed", "7", "--case", "3"]) == 0
    assert main(["verify", "snf-oracle", "--seed", "1", "--cases", "8"]) == 0
