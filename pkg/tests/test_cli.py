import json
import shutil
import subprocess
import sys
from importlib import resources

import pytest

from prodquot.cli import main
from prodquot.report import to_json

PRES_DIR = resources.files("prodquot") / "data" / "presentations"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tuples(capsys):
    code, out, _ = run(capsys, "tuples", "--alpha-cap", "84")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 30
    assert "(2,3,7)_84" in lines and "(2^6)_2" in lines


def test_group_info(capsys):
    code, out, _ = run(capsys, "group", "info", "--order", "32", "--id", "6", "--json")
    info = json.loads(out)
    assert code == 0
    assert info["n2"] == 11
    assert info["generated"]["(1 | 2)"] is True
    code, out, _ = run(capsys, "group", "info", "--order", "8", "--id", "3")
    assert "aut_order" in out and code == 0


def test_group_identify_presentation(capsys, tmp_path):
    code, out, _ = run(capsys, "group", "identify", "--presentation", str(PRES_DIR / "d283.pres"))
    assert code == 0 and out.startswith("G(16,8)")
    trivial = tmp_path / "trivial.pres"
    trivial.write_text("gens: a; rel: a = 1;\n")
    code, out, _ = run(capsys, "group", "identify", "--presentation", str(trivial), "--json")
    assert json.loads(out)["group_id"] == [1, 1]


def test_group_identify_perms(capsys, tmp_path):
    perms = tmp_path / "s3.txt"
    perms.write_text("# S3 on three points\n2 1 3\n2 3 1\n")
    code, out, _ = run(capsys, "group", "identify", "--perms", str(perms))
    assert code == 0 and out.startswith("G(6,1)")


def test_bad_presentation_is_validation_error(capsys, tmp_path):
    bad = tmp_path / "bad.pres"
    bad.write_text("gens: x;\nrel: x^2 = y;\n")
    code, _, err = run(capsys, "group", "identify", "--presentation", str(bad))
    assert code == 2
    assert "line 2" in err


def test_orbits_unmixed(capsys):
    code, out, _ = run(capsys, "orbits", "--order", "18", "--id", "3", "--m", "2^2,3^2", "--n", "3")
    assert code == 0 and out.startswith("N=2 D=2")


def test_orbits_mixed_reports_per_subgroup(capsys):
    code, out, _ = run(capsys, "orbits", "--order", "16", "--id", "8", "--n", "2,2", "--mixed")
    assert code == 0
    assert out.startswith("G°=G(8,3) N=1 D=2")


def test_orbits_needs_m(capsys):
    code, _, err = run(capsys, "orbits", "--order", "18", "--id", "3", "--n", "3")
    assert code == 1 and "--m" in err


def test_classify_mixed_table(capsys):
    code, out, err = run(capsys, "classify", "mixed")
    assert code == 0
    rows = [l for l in out.splitlines() if l.startswith("5 ")]
    assert [r.split()[2] for r in rows] == ["G(16,3)", "G(16,6)", "G(16,8)"]
    assert "coverage exhaustive" in out
    assert err == ""


def test_classify_csv_and_json(capsys):
    code, out, _ = run(capsys, "classify", "mixed", "--format", "csv")
    assert out.splitlines()[0] == '"g_F","g_C","G","G°","type","m","n","D","N"'
    assert '"2,2"' in out
    code, out, _ = run(capsys, "classify", "mixed", "--format", "json")
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["coverage"]["status"] == "exhaustive"
    rec = doc["records"][0]
    assert rec["witness"][0]["role"] == "V"
    assert all(isinstance(w, str) for w in rec["witness"][0]["branch"])
    # parse and re-serialize byte for byte
    assert to_json(json.loads(out)) == out


def test_cache_round_trip(capsys, tmp_path):
    cache = str(tmp_path / "cache")
    _, first, err1 = run(capsys, "classify", "mixed", "--format", "json", "--cache", cache)
    _, second, err2 = run(capsys, "classify", "mixed", "--format", "json", "--cache", cache)
    assert "cache: stored" in err1
    assert "cache: hit" in err2
    assert first == second


def test_cache_key_depends_on_catalog(capsys, tmp_path, catalog):
    cache = str(tmp_path / "cache")
    copy = tmp_path / "cat.jsonl"
    shutil.copy(catalog.path, copy)
    run(capsys, "classify", "mixed", "--cache", cache)
    with open(copy, "a", encoding="utf-8") as fh:
        fh.write('{"order":1,"id":2,"degree":1,"gens":[]}\n')
    _, _, err = run(capsys, "--catalog", str(copy), "classify", "mixed", "--cache", cache)
    assert "cache: stored" in err


def test_empty_catalog_is_validation_failure(capsys, tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code, _, err = run(capsys, "--catalog", str(empty), "classify", "unmixed", "--gf", "3")
    assert code == 2 and "no entries" in err
    code, _, _ = run(capsys, "--catalog", str(tmp_path / "missing.jsonl"), "classify", "mixed")
    assert code == 2


def test_catalog_validate_subset(capsys):
    code, out, _ = run(capsys, "catalog", "validate", "--orders", "8,16,24,36")
    assert code == 0
    assert out.rstrip().endswith("0 errors")
    assert "complete orders: 8, 16, 24, 36" in out


def test_catalog_info(capsys):
    code, out, _ = run(capsys, "catalog", "info")
    assert code == 0 and "sha256" in out


def test_console_script_runs():
    exe = shutil.which("prodquot")
    cmd = [exe] if exe else [sys.executable, "-m", "prodquot.cli"]
    proc = subprocess.run(cmd + ["tuples", "--alpha-cap", "5"], capture_output=True, text=True, check=True)
    assert "(5^3)_5" in proc.stdout


def test_unmixed_needs_gf(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "unmixed"])
    assert exc.value.code == 2
