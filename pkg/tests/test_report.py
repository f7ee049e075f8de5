import json

import pytest

from kgc import SCHEMA_VERSION, limits
from kgc.errors import CriterionDisagreement
from kgc.manifest import Job, Manifest
from kgc.report import (EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, JobReport, exit_code, identity_checks,
                        run, run_job, run_serialized)
from kgc.catalog import builtin_group, parse_family
from kgc.group import cyclic_group
from kgc.homsearch import TBundle

from manifest_test_data import JOB_FILTRATION, JOB_LYNDON, JOB_TRANSFER


def _run(jd, budgets=None):
    return run_job(0, Job.from_json_dict(jd), budgets)


def test_job_report_json():
    report = _run(JOB_FILTRATION)
    assert report.status == "OK"
    jd = report.to_json_dict()
    assert jd["schema_version"] == SCHEMA_VERSION
    assert jd["command"] == "filtration"
    assert jd["group_hash"] == builtin_group("D4").hash()
    assert jd["result"]["orders"] == [8, 2, 1]
    assert set(jd["conventions"]) == {"commutator", "section"}
    assert jd["budgets"]["cap_order"] == 8192
    assert "error" not in jd
    json.dumps(jd)
    with pytest.raises(ValueError, match="Unknown status"):
        JobReport(0, Job("lyndon"), "MAYBE")


def test_filtration_characteristic():
    report = _run({**JOB_FILTRATION, "automorphisms": 8})
    assert report.status == "PASS"
    assert report.result["automorphisms_checked"] == 8


def test_transfer_check_job():
    report = _run(JOB_TRANSFER)
    assert report.status == "PASS"
    assert report.budgets["budget_prefixes"] == 100000
    assert report.result["check"] == "transfer"


def test_h2_job():
    report = _run({"command": "h2", "group": "E:2:2"})
    assert report.status == "PASS"
    assert report.result["dim_H2"] == 3
    assert report.result["checks"] == {"elementary_abelian_dimension": True, "bockstein_is_cup_square": True}


def test_massey_job():
    report = _run({"command": "massey", "group": "E:2:2", "family": "zassenhaus:2:2"})
    assert report.status == "PASS"
    assert report.result["dwyer"]
    assert report.result["tuples"] == 16


def test_t_subgroups_job():
    report = _run({"command": "t-subgroups", "group": "D4", "family": "zassenhaus:2:2"})
    assert report.status == "PASS"
    assert report.result["checks"]["Ubar_matches_smaller_U"]


def test_identity_checks_on_standin():
    checks = identity_checks(builtin_group("Free:zassenhaus:2:2:2"), parse_family("zassenhaus:2:2"))
    assert checks["T_is_filtration_term"]
    assert all(checks.values())


def test_tbar_exponent_check_fails_on_wrong_bundle(mocker):
    # Tbar/T = Z/4 has exponent 4, so Tbar^2 [G, Tbar] is not inside T
    G = cyclic_group(4)
    fam = parse_family("lower-central:2:2")
    wrong = TBundle(fam, G.trivial(), G.whole(), [G.trivial()], [G.whole()])
    mocker.patch("kgc.report.t_bundle", return_value=wrong)
    checks = identity_checks(G, fam)
    assert not checks["tbar_exponent_p_over_T"]
    assert not checks["characters_inflate_bijectively"]


@pytest.mark.parametrize("family", ["lower-central:2:2", "zassenhaus:2:2"])
def test_quotient_identities(family):
    checks = identity_checks(builtin_group("D4"), parse_family(family), seed=3, randoms=2)
    assert checks["tbar_exponent_p_over_T"]
    assert checks["T_is_preimage_iff_kernel_inside"]
    assert checks["Tbar_is_preimage_iff_kernel_inside"]
    assert checks["characters_inflate_bijectively"]


def test_lyndon_job():
    report = _run({**JOB_LYNDON, "random_words": 4, "level": 2})
    assert report.status == "PASS"
    assert report.result["count"] == 3
    assert report.result["membership"]["samples"] == 4
    assert report.result["checks"]["magnus_multiplicative"]


def test_counterexample_skip():
    report = _run({"command": "counterexample", "example": 1, "k": 4})
    assert report.status == "SKIP"
    assert report.result["verdict"] == "hypothesis fails"


def test_error_reports():
    report = _run({"command": "h2", "group": "D5"})
    assert report.status == "ERROR"
    assert "Unknown builtin group" in report.error
    assert report.group_hash is None

    report = _run({"command": "transfer-check", "group": "D4", "family": "lower-central:2:2"})
    assert report.status == "ERROR"
    assert "needs 1 subgroup specs" in report.error
    assert report.group_hash == builtin_group("D4").hash()

    report = _run({"command": "hom-count", "group": "D4"})
    assert report.status == "ERROR"
    assert report.to_json_dict()["error"] == "hom-count needs a codomain"


def test_budget_report():
    before = limits.current()
    report = _run({"command": "hom-count", "group": "D4", "codomain": "D4"}, {"budget_prefixes": 2})
    assert report.status == "BUDGET"
    assert report.result["explored"] == 3
    assert limits.current() is before


def test_oracle_failure_report(mocker):
    mocker.patch("kgc.report.describe_group", side_effect=CriterionDisagreement("criteria disagree"))
    report = _run({"command": "group-info", "group": "Q8"})
    assert report.status == "FAIL"
    assert report.error == "criteria disagree"


def test_run_serialized():
    jd = run_serialized((3, JOB_LYNDON, {"seed": 5}))
    assert jd["job"] == 3
    assert jd["status"] == "PASS"
    assert jd["budgets"]["seed"] == 5


def test_run():
    assert run(Manifest()) == []
    reports = run(Manifest.from_json_dict({"budgets": {"seed": 1}, "jobs": [JOB_LYNDON, JOB_FILTRATION]}))
    assert [r.status for r in reports] == ["PASS", "OK"]
    assert [r.index for r in reports] == [0, 1]


@pytest.mark.parametrize("statuses, code", [
    ([], EXIT_OK),
    (["OK", "PASS", "SKIP"], EXIT_OK),
    (["PASS", "BUDGET"], EXIT_BUDGET),
    (["BUDGET", "ERROR"], EXIT_USAGE),
    (["ERROR", "FAIL", "BUDGET"], EXIT_FAIL),
])
def test_exit_code(statuses, code):
    assert exit_code(statuses) == code
