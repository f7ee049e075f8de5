import json

import pytest

import app
from kgc.errors import ManifestError
from kgc.report import EXIT_OK, EXIT_USAGE

from manifest_test_data import MANIFEST_JSON_DICT_1


def test_parse_params():
    params = app.parse_params(["--k", "2", "--random-words", "4", "--method", "inflation",
                               "--dichotomy", "--characters=[[1,0],[0,1]]", "--shift=-1"])
    assert params == {"k": 2, "random_words": 4, "method": "inflation", "dichotomy": True,
                      "characters": [[1, 0], [0, 1]], "shift": -1}
    with pytest.raises(ManifestError, match="Unexpected argument"):
        app.parse_params(["k", "2"])


def test_single_job(tmp_path):
    out = tmp_path / "reports.jsonl"
    code = app.main(["--out", str(out), "--seed", "3", "lyndon", "--k", "2", "--n", "3"])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 1
    jd = json.loads(lines[0])
    assert jd["command"] == "lyndon"
    assert jd["status"] == "PASS"
    assert jd["budgets"]["seed"] == 3


def test_single_job_with_subgroups(tmp_path):
    out = tmp_path / "reports.jsonl"
    code = app.main(["--out", str(out), "transfer-check", "--group", "D4", "--family", "zassenhaus:2:2",
                     "--subgroup", "center"])
    assert code == EXIT_OK
    assert json.loads(out.read_text())["status"] == "PASS"


def test_manifest_run(tmp_path):
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps(MANIFEST_JSON_DICT_1))
    out = tmp_path / "reports.jsonl"
    assert app.main(["--manifest", str(manifest), "--out", str(out)]) == EXIT_OK
    reports = [json.loads(line) for line in out.read_text().splitlines()]
    assert [r["job"] for r in reports] == [0, 1, 2]
    assert reports[0]["budgets"]["cap_order"] == 4096


def test_usage_errors(tmp_path):
    assert app.main([]) == EXIT_USAGE
    assert app.main(["--manifest", str(tmp_path / "missing.json")]) == EXIT_USAGE
    assert app.main(["--budget-prefixes", "0", "lyndon"]) == EXIT_USAGE
    assert app.main(["lyndon", "stray"]) == EXIT_USAGE
