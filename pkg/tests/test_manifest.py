import json
from pathlib import Path

import pytest

from kgc.errors import ManifestError
from kgc.manifest import COMMANDS, Job, Manifest

from manifest_test_data import BAD_JOBS, JOB_FILTRATION, JOB_LYNDON, JOB_TRANSFER, MANIFEST_JSON_DICT_1

SAMPLE_MANIFEST = Path(__file__).parent.parent / "sample_manifest.json"


def test_job_from_json_dict():
    job = Job.from_json_dict(JOB_TRANSFER)
    assert job.command == "transfer-check"
    assert job.group == "D4"
    assert job.family == "lower-central:2:2"
    assert job.subgroups == ["center"]
    assert job.params == {}
    assert job.budgets == {"budget_prefixes": 100000}

    job = Job.from_json_dict(JOB_FILTRATION)
    assert job.params == {"p": 2, "kind": "lower-central", "upto": 3}
    assert job.family is None
    assert job.subgroups == []


def test_job_to_json_dict():
    for jd in (JOB_FILTRATION, JOB_TRANSFER, JOB_LYNDON):
        assert Job.from_json_dict(jd).to_json_dict() == jd


def test_job_command_setter():
    job = Job("lyndon")
    for command in COMMANDS:
        job.command = command
        assert job.command == command
    with pytest.raises(ManifestError, match="Unknown command"):
        job.command = "transfer"


@pytest.mark.parametrize("jd, match", BAD_JOBS)
def test_bad_jobs(jd, match):
    with pytest.raises(ManifestError, match=match):
        Job.from_json_dict(jd)


def test_job_limits():
    job = Job.from_json_dict(JOB_TRANSFER)
    lim = job.limits({"budget_prefixes": 5, "seed": 3})
    assert lim.budget_prefixes == 100000
    assert lim.seed == 3
    assert lim.cap_order == 8192


def test_manifest_from_json_dict(mocker):
    spy = mocker.spy(Job, "from_json_dict")

    m = Manifest.from_json_dict(MANIFEST_JSON_DICT_1)

    assert spy.call_count == 3
    assert len(m.jobs) == 3
    assert isinstance(m.jobs[0], Job)
    assert m.budgets == {"cap_order": 4096, "seed": 7}
    assert m.job_limits(m.jobs[1]).cap_order == 4096
    assert m.job_limits(m.jobs[1]).budget_prefixes == 100000
    assert m.to_json_dict() == MANIFEST_JSON_DICT_1


def test_manifest_errors():
    with pytest.raises(ManifestError, match="list of jobs"):
        Manifest.from_json_dict({"jobs": {"command": "lyndon"}})
    with pytest.raises(ManifestError, match="budgets must be an object"):
        Manifest.from_json_dict({"budgets": [], "jobs": []})
    with pytest.raises(ManifestError, match="Invalid budgets"):
        Manifest.from_json_dict({"budgets": {"seed": -1}, "jobs": [JOB_LYNDON]})
    assert Manifest.from_json_dict({}).jobs == []


def test_manifest_load(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(MANIFEST_JSON_DICT_1))
    assert len(Manifest.load(str(path)).jobs) == 3

    path.write_text("{not json")
    with pytest.raises(ManifestError, match="Cannot read manifest"):
        Manifest.load(str(path))
    with pytest.raises(ManifestError, match="Cannot read manifest"):
        Manifest.load(str(tmp_path / "missing.json"))


def test_sample_manifest():
    m = Manifest.load(str(SAMPLE_MANIFEST))
    assert {job.command for job in m.jobs} == set(COMMANDS)
