import json
import logging
from typing import List, Dict, Any

from kgc.errors import ManifestError
from kgc.limits import Limits

logger = logging.getLogger(__name__)

COMMANDS = ("group-info", "filtration", "t-subgroups", "hom-count", "h2", "massey", "pairings",
            "kernel-condition", "transfer-check", "transfer-sweep", "counterexample", "lyndon")

NEEDS_GROUP = ("group-info", "filtration", "t-subgroups", "hom-count", "h2", "massey", "pairings",
               "kernel-condition", "transfer-check")

NEEDS_FAMILY = ("t-subgroups", "massey", "pairings", "kernel-condition", "transfer-check")

_FIELDS = ("command", "group", "family", "subgroups", "budgets")


class Job:
    """One command of a manifest

    ctor params:
    command: str -- one of COMMANDS
    group: str | Dict | None -- builtin name or group document
    family: str | None -- e.g. "zassenhaus:2:3" or "mixed:3"
    subgroups: List[str] -- subgroup specs, in the order the command reads them
    params: Dict -- every other key of the job
    budgets: Dict -- overrides on top of the manifest budgets
    """

    def __init__(self, command: str, group: str | Dict | None = None, family: str | None = None,
                 subgroups: List[str] | None = None, params: Dict | None = None,
                 budgets: Dict | None = None) -> None:
        self.command = command
        self.group = group
        self.family = family
        self.subgroups = subgroups or []
        self.params = params or {}
        self.budgets = budgets or {}

    @property
    def command(self) -> str:
        return self._command

    @command.setter
    def command(self, value: str) -> None:
        if value not in COMMANDS:
            raise ManifestError(f"Unknown command {value!r}")
        self._command = value

    def validate(self) -> None:
        if self.command in NEEDS_GROUP and self.group is None:
            raise ManifestError(f"{self.command} needs a group")
        if self.command in NEEDS_FAMILY and self.family is None:
            raise ManifestError(f"{self.command} needs a family")
        if not isinstance(self.subgroups, list) or not all(isinstance(s, str) for s in self.subgroups):
            raise ManifestError("subgroups must be a list of spec strings")
        self.limits()

    def limits(self, base: Dict | None = None) -> Limits:
        """Limits for this job: defaults, then base, then the job's own budgets"""
        try:
            return Limits.from_json_dict({**(base or {}), **self.budgets})
        except (TypeError, ValueError) as ex:
            raise ManifestError(f"Invalid budgets: {ex}") from ex

    @classmethod
    def from_json_dict(cls, jd: Dict) -> "Job":
        """A job is a flat dict; keys other than the known fields become params.

        Like this:
            {
                "command": "filtration",
                "group": "D4",
                "p": 2,
                "kind": "lower-central",
                "upto": 3
            }
        """
        if not isinstance(jd, dict) or "command" not in jd:
            raise ManifestError(f"Job must be an object with a command, got {jd!r}")
        job = cls(jd["command"], jd.get("group"), jd.get("family"), jd.get("subgroups"),
                  {k: v for k, v in jd.items() if k not in _FIELDS}, jd.get("budgets"))
        job.validate()
        return job

    def to_json_dict(self) -> Dict:
        jd: Dict[str, Any] = {"command": self.command}
        if self.group is not None:
            jd["group"] = self.group
        if self.family is not None:
            jd["family"] = self.family
        if self.subgroups:
            jd["subgroups"] = self.subgroups
        if self.budgets:
            jd["budgets"] = self.budgets
        jd.update(self.params)
        return jd


class Manifest:
    """A batch of jobs sharing one budgets block"""

    def __init__(self, jobs: List[Job] | None = None, budgets: Dict | None = None) -> None:
        self.jobs = jobs or []
        self.budgets = budgets or {}

    def job_limits(self, job: Job) -> Limits:
        return job.limits(self.budgets)

    @classmethod
    def from_json_dict(cls, jd: Dict) -> "Manifest":
        if not isinstance(jd, dict) or not isinstance(jd.get("jobs", []), list):
            raise ManifestError("Manifest must be an object with a list of jobs")
        budgets = jd.get("budgets", {})
        if not isinstance(budgets, dict):
            raise ManifestError("budgets must be an object")
        manifest = cls([Job.from_json_dict(j) for j in jd.get("jobs", [])], budgets)
        for job in manifest.jobs:
            manifest.job_limits(job)
        return manifest

    @classmethod
    def load(cls, filename: str) -> "Manifest":
        try:
            with open(filename, 'r') as f:
                jd = json.load(f)
        except (OSError, json.JSONDecodeError) as ex:
            raise ManifestError(f"Cannot read manifest {filename}: {ex}") from ex
        manifest = cls.from_json_dict(jd)
        logger.info("loaded %d jobs from %s", len(manifest.jobs), filename)
        return manifest

    def to_json_dict(self) -> Dict:
        return {
            "budgets": self.budgets,
            "jobs": [job.to_json_dict() for job in self.jobs]
        }
