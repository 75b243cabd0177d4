import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from apds import check_proof, parse_system
from apds.proof import loads
from apds.cli import JSON_SCHEMAS, main
from helpers import DATA, cli_cases, load

E1, R = str(DATA / "e1.apds"), str(DATA / "r.apds")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_decide_exit_codes(capsys):
    assert run("decide", E1, "S(a b)") == (0, "provable\n")
    assert run("decide", R, "P(a)") == (1, "not provable\n")
    code, _ = run("decide", E1, "S(a")
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_missing_file_and_bad_command():
    assert run("decide", "/nonexistent.apds", "S(a)")[0] == 2
    assert run("frobnicate")[0] == 2


def test_decide_writes_certificates(tmp_path):
    cert, ref = tmp_path / "c.json", tmp_path / "r.json"
    assert run("decide", E1, "S(a b)", "--certificate", str(cert))[0] == 0
    assert check_proof(load("e1.apds"), loads(cert.read_text())) == []
    assert run("decide", R, "P(a)", "--refute", str(ref))[0] == 1
    assert loads(ref.read_text()).rule == "P.a~"


def test_prove_and_check(tmp_path):
    out = tmp_path / "p.json"
    assert run("prove", E1, "S(a b)", "-o", str(out)) == (0, "")
    assert run("check", E1, str(out)) == (0, "ok\n")
    code, text = run("check", R, str(out))
    assert code == 1 and text


def test_normalize_side_file(tmp_path):
    src = tmp_path / "g.apds"
    src.write_text("system G\nstates P Q\nstack a b\nrule g: P(a b x) => Q(x)\n")
    out = tmp_path / "n.apds"
    assert run("normalize", str(src), "-o", str(out))[0] == 0
    assert (tmp_path / "n.apds.erase").read_text() == "P#a = P(a)\nP#a.b = P(a b)\n"
    assert len(parse_system(out.read_text()).rules) == 5


def test_saturate_provenance(tmp_path):
    prov = tmp_path / "prov.txt"
    code, text = run("saturate", E1, "--provenance", str(prov))
    assert code == 0 and len(parse_system(text).rules) == 15
    assert len(prov.read_text().splitlines()) == 8


def test_refute_and_complement(tmp_path):
    em = tmp_path / "em.txt"
    code, text = run("refute", R, "P(a)", "--depth", "3", "--expansion-map", str(em))
    assert code == 0 and '"continue": "!P(a a)"' in text
    assert "P.a~ -> P.a~1.1" in em.read_text().splitlines()
    assert run("refute", E1, "S(a b)") == (1, "provable\n")
    t, n = tmp_path / "t.apds", tmp_path / "n.apds"
    assert run("complement", R, "--tilde", str(t), "--negation", str(n)) == (0, "")
    assert len(parse_system(t.read_text()).rules) == 7
    assert len(parse_system(n.read_text()).rules) == 4 + 9


def test_eliminate_cuts_rejects_bad_proof(tmp_path):
    cases = cli_cases(tmp_path)
    # the example proof is valid over E1 but E1 lacks the rules the reductions need
    assert run("eliminate-cuts", E1, cases["eliminate-cuts"][2])[0] == 2
    assert run("eliminate-cuts", R, cases["eliminate-cuts"][2])[0] == 2


@pytest.mark.parametrize("command", sorted(JSON_SCHEMAS))
def test_json_schemas(command, tmp_path):
    argv = cli_cases(tmp_path)[command]
    code, text = run(*argv, "--json")
    assert code in (0, 1)
    jsonschema.validate(json.loads(text), JSON_SCHEMAS[command])


def cli_bytes(argv, seed: str) -> tuple[int, bytes]:
    env = dict(os.environ, PYTHONHASHSEED=seed)
    p = subprocess.run([sys.executable, "-m", "apds", *argv], capture_output=True, env=env, timeout=60)
    return p.returncode, p.stdout


def test_subprocess_determinism(tmp_path):
    argv = cli_cases(tmp_path)["refute"]
    assert cli_bytes(argv, "1") == cli_bytes(argv, "2")
