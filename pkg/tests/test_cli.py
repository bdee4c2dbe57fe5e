import copy
import json
import subprocess
import sys

import pytest

from entanglement_atlas.catalog import data_path
from entanglement_atlas.cli import main

NABG1 = "2,5,3,2;1,3,3,2"
G_S_LEVEL14 = "10,7,5,11;2,7,3,3;5,7,9,12"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_catalog_passes(capsys):
    code, out, _ = run(capsys, "verify-catalog")
    assert code == 0
    assert out.count("PASS ") == 30
    assert "24 distinct curves (22 genus 0, 2 genus 1)" in out


def test_verify_catalog_failure_exit_1(capsys, tmp_path):
    doc = json.loads(data_path("catalog.json").read_text())
    bad = copy.deepcopy(doc)
    bad["entries"][0]["type"] = "Z/3"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "verify-catalog", "--catalog", str(path))
    assert code == 1
    assert "FAIL g0-6-Z2-1" in out and "entanglement:" in out


def test_verify_catalog_schema_error_exit_2(capsys, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    code, _, err = run(capsys, "verify-catalog", "--catalog", str(path))
    assert code == 2 and "empty" in err


def test_pipeline_text_and_json(capsys, tmp_path):
    code, out, err = run(capsys, "pipeline", "--level", "6", "--max-genus", "0")
    assert code == 0
    assert "(2,3)-entanglements of type Z/2, genus 0: 12 groups, 5 maximal" in out
    assert err.startswith("timing ")
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "pipeline", "--level", "6", "--format", "json", "--out", str(path))
    doc = json.loads(path.read_text())
    assert code == 0 and doc["schema_version"] == 1 and "timing" not in doc


def test_pipeline_unsupported_level(capsys):
    code, _, err = run(capsys, "pipeline", "--level", "12")
    assert code == 2 and "level 12" in err


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "--modulus", "6", "--gens", NABG1, "--pair", "2,3")
    doc = json.loads(out)
    assert code == 0
    assert doc["order"] == 36 and doc["admissible"] is True and doc["primitive"] is True
    assert doc["report"]["type"] == "Z/2" and doc["report"]["unexplained"] is True


def test_analyze_bad_generator(capsys):
    code, _, err = run(capsys, "analyze", "--modulus", "6", "--gens", "2,0,0,1", "--pair", "2,3")
    assert code == 2 and "error" in err


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--modulus", "14", "--gens", G_S_LEVEL14)
    doc = json.loads(out)
    assert code == 0 and doc["index"] == 48 and doc["genus"] == 0 and doc["cusps"] == 6


def test_siegel_single_function(capsys):
    code, out, _ = run(capsys, "siegel", "--level", "14", "--orbit-rep", "3/0", "--prec", "1")
    assert code == 0 and "leading exponent" in out


def test_siegel_orbit_fraction_syntax(capsys):
    code, out, _ = run(capsys, "siegel", "--level", "14", "--orbit-rep", "3/14,0", "--prec", "1",
                       "--gens", G_S_LEVEL14)
    assert code == 0
    assert "[-168, 0, 168, 0, 0, 0]" in out
    assert "orbit" in out


def test_siegel_bad_rep(capsys):
    code, _, err = run(capsys, "siegel", "--level", "14", "--orbit-rep", "1/3,0")
    assert code == 2 and "not in" in err


def test_jmap_check(capsys):
    code, out, _ = run(capsys, "jmap-check", "--entry", "g0-6-Z2-1")
    assert code == 0 and "PASS model" in out
    code, out, _ = run(capsys, "jmap-check", "--entry", "G_n")
    assert code == 0 and "y^2 = x^3 - 4x^2 + 3x + 1" in out


def test_jmap_check_unknown_entry(capsys):
    code, _, err = run(capsys, "jmap-check", "--entry", "nope")
    assert code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "entanglement_atlas", "invariants", "--modulus", "5",
                          "--gens", "1,1,0,1;2,0,0,1;1,0,0,2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["index"] == 6


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["pipeline"])
    assert exc.value.code == 2
