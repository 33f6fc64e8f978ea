import json
from pathlib import Path

import jsonschema
import pytest

from udk import catalog
from udk.cli import main

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())
DATA = catalog.data_dir()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_haar_prints_42(capsys):
    code, out, _ = run(capsys, "haar", "--dim", "2", "--t", "5")
    assert code == 0
    assert out.strip() == "42"


def test_haar_json_with_mc(capsys):
    code, doc = run_json(capsys, "haar", "--dim", "3", "--t", "2", "--mc", "2000", "--seed", "4")
    assert code == 0
    assert doc["haar_moment"] == "2"
    assert isinstance(doc["mc"]["mean_float"], float)


def test_moment_missing_file(capsys):
    code, _, err = run(capsys, "moment", "--group", "missing.json")
    assert code == 2
    assert "missing.json" in err


def test_moment_missing_file_json(capsys):
    code, doc = run_json(capsys, "moment", "--group", "missing.json")
    assert code == 2 and doc["exit_code"] == "2"


def test_moment(capsys):
    code, doc = run_json(capsys, "moment", "--group", str(DATA / "sl2_3_dim2.json"), "--t", "3")
    assert code == 0
    assert doc["moment"] == "6" and doc["order"] == "24"


def test_certify_sl2_5(capsys):
    code, out, _ = run(capsys, "certify", "--group", str(DATA / "sl2_5_dim2.json"), "--tmax", "6")
    assert code == 0
    assert "unitary 5-group" in out
    code, doc = run_json(capsys, "certify", "--group", str(DATA / "sl2_5_dim2.json"), "--tmax", "6")
    assert [r["equal"] for r in doc["rows"]] == [True] * 5 + [False]
    assert doc["max_t"] == "5"


def test_certify_expectation_mismatch(capsys, tmp_path):
    src = DATA / "sl2_3_dim2.json"
    (tmp_path / "g.json").write_text(src.read_text())
    (tmp_path / "g.expected.json").write_text(json.dumps({"format": "udk-group/1", "name": "g",
                                                          "expected": {"order": 25}}))
    code, _, _ = run(capsys, "certify", "--group", str(tmp_path / "g.json"), "--tmax", "3")
    assert code == 1


def test_certify_cap(capsys):
    code, doc = run_json(capsys, "certify", "--group", str(DATA / "sl2_5_dim2.json"), "--cap", "50")
    assert code == 3
    assert doc["error"] == "cap_exceeded"


def test_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": "udk-group/1", "name": "bad", "dimension": 1, "conductor": 4,
                               "generators": [[["1 +* z4"]]]}))
    code, doc = run_json(capsys, "moment", "--group", str(bad))
    assert code == 2
    assert doc["error"] == "parse_error"
    assert "position" in doc["message"]


def test_format_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x"}')
    assert run(capsys, "moment", "--group", str(bad))[0] == 2
    bad.write_text("not json")
    assert run(capsys, "moment", "--group", str(bad))[0] == 2


def test_bad_arguments(capsys):
    assert run(capsys, "haar", "--dim", "two", "--t", "1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_catalog_list(capsys):
    code, doc = run_json(capsys, "catalog", "list")
    assert code == 0
    assert len(doc["entries"]) >= 14


def test_catalog_emit(capsys, tmp_path):
    out = tmp_path / "q8.json"
    code, doc = run_json(capsys, "catalog", "emit", "q8", "--out", str(out))
    assert code == 0 and out.exists()
    code, doc = run_json(capsys, "moment", "--group", str(out), "--t", "2")
    assert doc["moment"] == "4"


def test_catalog_unknown(capsys):
    code, doc = run_json(capsys, "catalog", "verify", "nope")
    assert code == 2 and doc["error"] == "unknown_name"


def test_catalog_verify_one(capsys):
    code, doc = run_json(capsys, "catalog", "verify", "sl3_2_dim3")
    assert code == 0
    assert doc["results"][0]["ok"]


def test_catalog_verify_violation(capsys, tmp_path, monkeypatch):
    import shutil

    dst = tmp_path / "data"
    shutil.copytree(DATA, dst)
    side = dst / "sl3_2_dim3.expected.json"
    data = json.loads(side.read_text())
    data["expected"]["order"] = 169
    side.write_text(json.dumps(data))
    monkeypatch.setenv("UDK_DATA_DIR", str(dst))
    code, doc = run_json(capsys, "catalog", "verify", "sl3_2_dim3")
    assert code == 1
    assert doc["results"][0]["checks"]["order"] is False


def test_orbits(capsys):
    code, doc = run_json(capsys, "orbits", "--group", str(DATA / "symplectic" / "sl2_9_in_sp4_3.json"))
    assert code == 0
    assert doc["orbit_sizes"] == ["80"] and doc["transitive"]
    assert doc["certificate"]["order"] == "720"


def test_orbits_rejects_unitary_file(capsys):
    assert run(capsys, "orbits", "--group", str(DATA / "q8.json"))[0] == 2
    assert run(capsys, "moment", "--group", str(DATA / "symplectic" / "q8_in_sp2_3.json"))[0] == 2


def test_search_transitive(capsys):
    code, doc = run_json(capsys, "search-transitive", "--p", "5")
    assert code == 0
    assert [c["order"] for c in doc["classes"]] == ["24", "120"]
    assert run(capsys, "search-transitive", "--p", "4")[0] == 2


@pytest.mark.parametrize("section", ["lemma7", "dim2", "symplectic"])
def test_reproduce_sections(capsys, section):
    code, doc = run_json(capsys, "reproduce", "--section", section)
    assert code == 0
    assert doc["rows"]
    assert all(r["status"] in ("ok", "note") for r in doc["rows"])


def test_reproduce_skips_over_cap(capsys):
    code, doc = run_json(capsys, "reproduce", "--section", "dim3", "--cap", "500")
    assert code == 0
    skipped = [r for r in doc["rows"] if r["status"] == "SKIPPED"]
    assert skipped and all("cap" in r["note"] for r in skipped)
