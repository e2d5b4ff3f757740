import io
import json
import shutil
import subprocess
import sys

import pytest

from expokit.cli import FAILS, HOLDS, INCONCLUSIVE, INVALID, main
from expokit.io import load_text

from conftest import data_file


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def test_decompose_prints_vertical_table():
    code, out = run("decompose", "--input", data_file("subset02.yaml"))
    assert code == HOLDS
    F = load_text(out).lookup("decomposed")
    assert F.verticals[(0, 2)].table == {frozenset(): frozenset(), frozenset({0}): frozenset({2})}
    assert F.is_pseudo().witness == (0, 1, 2)


def test_decompose_then_glue(tmp_path):
    code, out = run("decompose", "--input", data_file("sierpinski.yaml"))
    path = tmp_path / "lax.yaml"
    path.write_text(out)
    code, out = run("glue", "--input", str(path), "--doctrine", "top")
    assert code == HOLDS
    q = load_text(out).lookup("glued")
    assert len(q.points) == 2


def test_invalid_input_exits_2(capsys):
    code, _ = run("check", "--what", "pseudo", "--input", data_file("cycle.yaml"))
    assert code == INVALID
    assert "cycle" in capsys.readouterr().err
    code, _ = run("check", "--what", "pseudo", "--input", "/nonexistent.yaml")
    assert code == INVALID


def test_check_pseudo_and_exp_witness():
    code, out = run("check", "--what", "pseudo", "--input", data_file("subset02.yaml"))
    assert code == FAILS and "NotPseudo(0,1,2)" in out
    code, out = run("check", "--what", "exp", "--input", data_file("subset02.yaml"))
    assert code == FAILS and "NotPseudo(0,1,2)" in out
    code, _ = run("check", "--what", "exp", "--input", data_file("sierpinski.yaml"))
    assert code == HOLDS


def test_check_gc():
    assert run("check", "--what", "gc", "--input", data_file("cat_identity.yaml"))[0] == HOLDS
    code, out = run("check", "--what", "gc", "--input", data_file("cat_subset02.yaml"), "--json")
    assert code == FAILS
    payload = json.loads(out)
    assert payload["holds"] is False and payload["witness"][1] == 1
    # gc is only meaningful for categories
    assert run("check", "--what", "gc", "--input", data_file("subset02.yaml"))[0] == INVALID


def test_check_dc_and_eps():
    assert run("check", "--what", "dc", "--input", data_file("meetmaps.yaml"))[0] == HOLDS
    assert run("check", "--what", "dc", "--input", data_file("sierpinski.yaml"))[0] == HOLDS
    assert run("check", "--what", "eps", "--input", data_file("sierpinski.yaml"))[0] == HOLDS
    assert run("check", "--what", "eps", "--input", data_file("subset02.yaml"))[0] == FAILS


def test_exp():
    code, out = run("exp", "--input", data_file("cat_chain.yaml"))
    assert code == HOLDS
    doc = load_text(out)
    assert len(doc.lookup("exponential").total.objects) == 3
    assert run("exp", "--input", data_file("subset02.yaml"))[0] == FAILS
    code, out = run("exp", "--input", data_file("sierpinski.yaml"), "--json")
    assert code == HOLDS and json.loads(out)["oracle"]["status"] == "pass"


def test_oracles():
    assert run("oracle", "--what", "quotient", "--input", data_file("subset02.yaml"))[0] == FAILS
    assert run("oracle", "--what", "quotient", "--input", data_file("sierpinski.yaml"))[0] == HOLDS
    assert run("oracle", "--what", "pushout", "--input", data_file("subset02.yaml"))[0] == FAILS
    assert run("oracle", "--what", "adjunction", "--input", data_file("sierpinski.yaml"))[0] == HOLDS
    assert run("oracle", "--what", "pushout", "--input", data_file("cat_identity.yaml"))[0] == INVALID


def test_cap_zero_is_inconclusive(monkeypatch):
    code, out = run("oracle", "--what", "adjunction", "--input", data_file("sierpinski.yaml"), "--cap", "0")
    assert code == INCONCLUSIVE and "inconclusive" in out
    monkeypatch.setenv("EXPOKIT_CAP", "0")
    assert run("oracle", "--what", "quotient", "--input", data_file("sierpinski.yaml"))[0] == INCONCLUSIVE
    assert run("exp", "--input", data_file("sierpinski.yaml"))[0] == INCONCLUSIVE
    monkeypatch.setenv("EXPOKIT_CAP", "lots")
    assert run("oracle", "--what", "quotient", "--input", data_file("sierpinski.yaml"))[0] == INVALID


def test_json_report():
    code, out = run("oracle", "--what", "pushout", "--input", data_file("sierpinski.yaml"), "--json")
    payload = json.loads(out)
    assert code == HOLDS
    assert payload["status"] == "pass" and payload["oracle"] == "pushout"


def test_unknown_name():
    assert run("decompose", "--input", data_file("subset02.yaml"), "--name", "nope")[0] == INVALID


@pytest.mark.skipif(shutil.which("expo-kit") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["expo-kit", "check", "--what", "exp", "--input", data_file("subset02.yaml")],
                         capture_output=True, text=True)
    assert res.returncode == FAILS
    assert "NotPseudo(0,1,2)" in res.stdout


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "expokit.cli", "check", "--what", "pseudo",
                          "--input", data_file("sierpinski.yaml")], capture_output=True, text=True)
    assert res.returncode == HOLDS
