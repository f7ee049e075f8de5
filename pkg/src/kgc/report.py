"""Runs manifest jobs and wraps their results in versioned JSON reports.

Every report carries the schema version, the group hash, the bracket and
section conventions, and the budgets it ran under. A job's status is one of
OK (a computation with nothing to compare), PASS, FAIL, SKIP, BUDGET, ERROR.
"""
import itertools
import logging
from typing import List, Dict, Any, Callable, Tuple

import numpy as np

from kgc import SCHEMA_VERSION, limits, linalg
from kgc.catalog import (builtin_group, describe_group, group_from_json_dict, group_prime, parse_family,
                         resolve_subgroup, sweep_catalog, sweep_families)
from kgc.cohomology import (SECTION_CONVENTION, all_characters, bockstein, bockstein_cup_dichotomy, character,
                            cup, h1, h2_space, massey_pullback_set)
from kgc.errors import OracleFailure, ResourceExhausted
from kgc.filtrations import filtration, is_elementary_abelian, lower_p_central
from kgc.group import COMMUTATOR_CONVENTION, FiniteGroup, cyclic_group, power_commutator_subgroup
from kgc.homsearch import (automorphisms, characters_inflate_bijectively, enumerate_homs, quotient_bundle_check,
                           t_bundle, t_subgroup)
from kgc.magnus import (counterexample_harness, lyndon_words, magnus_image, necklace_count, random_word,
                        tau, zassenhaus_membership)
from kgc.manifest import Job, Manifest
from kgc.pairings import (CheckReport, SWEEP_CHECKS, c_pairing, example_two_shadow, filtration_transfer_check,
                          kernel_generating_condition, liftable_inflation_check, quotient_kernel_condition,
                          random_normal_subgroups, special_case_check, transfer_check, transfer_sweep)
from kgc.unitriangular import OmegaFamily, build_unitriangular

logger = logging.getLogger(__name__)

STATUSES = ("OK", "PASS", "FAIL", "SKIP", "BUDGET", "ERROR")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class JobReport:
    """The outcome of one job

    ctor params:
    index: int -- position in the manifest
    job: Job
    status: str -- one of STATUSES
    result: Dict
    group_hash: str | None
    budgets: Dict -- the limits the job ran under
    error: str | None
    """

    def __init__(self, index: int, job: Job, status: str, result: Dict | None = None,
                 group_hash: str | None = None, budgets: Dict | None = None,
                 error: str | None = None) -> None:
        if status not in STATUSES:
            raise ValueError(f"Unknown status {status!r}")
        self.index = index
        self.job = job
        self.status = status
        self.result = result or {}
        self.group_hash = group_hash
        self.budgets = budgets or {}
        self.error = error

    def to_json_dict(self) -> Dict:
        jd = {
            "schema_version": SCHEMA_VERSION,
            "job": self.index,
            "command": self.job.command,
            "status": self.status,
            "group_hash": self.group_hash,
            "conventions": {
                "commutator": COMMUTATOR_CONVENTION,
                "section": SECTION_CONVENTION
            },
            "budgets": self.budgets,
            "result": self.result
        }
        if self.error is not None:
            jd["error"] = self.error
        return jd


def _verdict(checks: Dict[str, bool]) -> str:
    return "PASS" if all(checks.values()) else "FAIL"


def _combined(reports: List[CheckReport]) -> str:
    statuses = {r.status for r in reports}
    if "FAIL" in statuses:
        return "FAIL"
    if "PASS" in statuses:
        return "PASS"
    return "SKIP" if statuses else "OK"


def _subgroups(job: Job, G: FiniteGroup, fam: OmegaFamily | None, count: int) -> List:
    if len(job.subgroups) != count:
        raise ValueError(f"{job.command} needs {count} subgroup specs, got {len(job.subgroups)}")
    return [resolve_subgroup(G, spec, fam) for spec in job.subgroups]


def _prime(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> int:
    if "p" in job.params:
        return int(job.params["p"])
    return fam.p if fam is not None else group_prime(G)


# per-command handlers: (job, G, fam) -> (status, result)

def _group_info(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    return "OK", describe_group(G)


def _filtration(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    kind = job.params.get("kind", "lower-central")
    upto = int(job.params.get("upto", 3))
    chain = filtration(G, kind, _prime(job, G, fam), upto)
    chain.verify()
    result = chain.to_json_dict()
    limit = int(job.params.get("automorphisms", 0))
    if not limit:
        return "OK", result
    auts = automorphisms(G, limit)
    characteristic = all(a.image_of(t) == t for a in auts for t in chain.terms)
    result["automorphisms_checked"] = len(auts)
    result["characteristic"] = characteristic
    return ("PASS" if characteristic else "FAIL"), result


def _free_level(G: FiniteGroup) -> Tuple[str, int, int] | None:
    """(kind, p, m) for a builtin stand-in "Free:kind:k:p:m" """
    parts = G.name.split(":")
    if len(parts) == 5 and parts[0] == "Free":
        return parts[1], int(parts[3]), int(parts[4])
    return None


def identity_checks(G: FiniteGroup, fam: OmegaFamily, seed: int = 0, randoms: int = 1) -> Dict[str, bool]:
    """T-subgroup identities that hold for every finite p-group.

    The quotient identities run over N in 1, T(G), Tbar(G), the center and
    random normal subgroups of Tbar(G).
    """
    p, n = fam.p, fam.n
    bundle = t_bundle(G, fam)
    rng = np.random.default_rng(seed)
    subs = [G.trivial(), bundle.T, bundle.Tbar, G.center()]
    for N in random_normal_subgroups(G, bundle.Tbar, randoms, rng):
        if N not in subs:
            subs.append(N)
    inside = [N for N in subs if N.is_subset(bundle.Tbar)]
    pulled = [quotient_bundle_check(G, N, fam) for N in subs]
    checks = {
        "T_Zp_is_second_term": t_subgroup(G, cyclic_group(p)) == lower_p_central(G, p, 2).term(2),
        "tbar_exponent_p_over_T": power_commutator_subgroup(G, bundle.Tbar, p).is_subset(bundle.T),
        "T_is_preimage_iff_kernel_inside": all(c["T"] for c in pulled),
        "Tbar_is_preimage_iff_kernel_inside": all(c["Tbar"] for c in pulled),
        "characters_inflate_bijectively": all(characters_inflate_bijectively(G, N, p) for N in inside)
    }
    if fam.label == "zassenhaus" and n >= 2:
        checks["Ubar_matches_smaller_U"] = \
            bundle.bar_kernels[0] == t_subgroup(G, build_unitriangular(n - 1, p))
    free = _free_level(G)
    if free is not None and free[:2] == (fam.filtration_kind, p) and free[2] >= n:
        checks["T_is_filtration_term"] = bundle.T == filtration(G, free[0], p, n + 1).term(n + 1)
    return checks


def _t_subgroups(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    checks = identity_checks(G, fam, int(job.params.get("seed", limits.current().seed)))
    return _verdict(checks), {**t_bundle(G, fam).to_json_dict(), "checks": checks}


def _hom_count(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    if "codomain" not in job.params:
        raise ValueError("hom-count needs a codomain")
    U = group_from_json_dict(job.params["codomain"])
    homs = enumerate_homs(G, U, workers=int(job.params.get("workers", 1)))
    return "OK", homs.to_json_dict()


def _h2(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    p = _prime(job, G, fam)
    space = h2_space(G, p)
    chars = h1(G, p)
    classes = [bockstein(c) for c in chars] + [cup(a, b) for a, b in itertools.combinations(chars, 2)]
    coords = np.array([space.coordinates(f) for f in classes], dtype=np.int64).reshape(len(classes),
                                                                                      space.dimension)
    independent = linalg.rank(p, coords)
    result: Dict[str, Any] = {**space.to_json_dict(), "dim_H1": len(chars),
                              "bockstein_cup_rank": independent}
    checks: Dict[str, bool] = {}
    if is_elementary_abelian(G, p):
        checks["elementary_abelian_dimension"] = independent == space.dimension
    if p == 2:
        checks["bockstein_is_cup_square"] = all(space.same_class(bockstein(c), cup(c, c))
                                                for c in all_characters(G, p))
    elif job.params.get("dichotomy", True):
        dichotomy = bockstein_cup_dichotomy(G, p)
        result["bockstein_cup_dichotomy"] = dichotomy
        checks["bockstein_cup_dichotomy"] = dichotomy["violations"] == 0
    result["checks"] = checks
    return (_verdict(checks) if checks else "OK"), result


def _massey(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    p, n = fam.p, fam.n
    space = h2_space(G, p)
    wanted = job.params.get("characters", "all")
    if wanted == "all":
        chars = all_characters(G, p)
        tuples = list(itertools.product(chars, repeat=n))
    else:
        tuples = [[character(G, p, v) for v in wanted]]
    rows = []
    dwyer = True
    for phis in tuples:
        reps = massey_pullback_set(G, phis, fam)
        entry = {
            "characters": [phi.to_json_dict()["generator_values"] for phi in phis],
            "defined": bool(reps),
            "classes": [space.coordinates(f).tolist() for f in reps]
        }
        if n == 2:
            product = cup(phis[0], phis[1])
            entry["equals_cup"] = len(reps) == 1 and (space.same_class(reps[0], product) or
                                                       space.same_class(reps[0], (-1) * product))
            dwyer = dwyer and entry["equals_cup"]
        rows.append(entry)
    result: Dict[str, Any] = {"family": fam.name, "dim_H2": space.dimension, "tuples": len(rows)}
    if n == 2:
        result["dwyer"] = dwyer
    result["products"] = rows if len(rows) <= 64 else rows[:64]
    if n != 2:
        return "OK", result
    return ("PASS" if dwyer else "FAIL"), result


def _pairings(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    N1, N2 = _subgroups(job, G, fam, 2)
    method = job.params.get("method", "lift")
    report = c_pairing(G, N1, N2, fam, method)
    extra = [liftable_inflation_check(G, N1, N2, fam, method), special_case_check(G, N2, fam, method)]
    result = {**report.to_json_dict(), "extra_checks": [r.to_json_dict() for r in extra]}
    passed = report.passed and all(r.passed for r in extra)
    return ("PASS" if passed else "FAIL"), result


def _kernel_condition(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    if not job.subgroups:
        return "OK", {"form": "quotient", **quotient_kernel_condition(G, fam).to_json_dict()}
    N1, N2 = _subgroups(job, G, fam, 2)
    condition = kernel_generating_condition(G, N1, N2, fam, job.params.get("method", "lift"))
    return "OK", {"form": "pair", **condition.to_json_dict()}


def _transfer_check(job: Job, G: FiniteGroup, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    N, = _subgroups(job, G, fam, 1)
    if job.params.get("filtration", False):
        report = filtration_transfer_check(G, N, fam)
    else:
        report = transfer_check(G, N, fam)
    return report.status, report.to_json_dict()


def _sweep(job: Job, G: FiniteGroup | None, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    seed = int(job.params.get("seed", limits.current().seed))
    if job.params.get("catalog", "builtin") != "builtin":
        raise ValueError(f"Unknown catalog {job.params['catalog']!r}")
    groups = sweep_catalog(seed)
    families = [fam] if fam is not None else sweep_families(2) + sweep_families(3)
    checks = list(job.params.get("checks", ["transfer"]))
    reports: List[CheckReport] = []
    if "identities" in checks:
        for H in groups:
            for f in families:
                if H.is_p_group(f.p):
                    c = identity_checks(H, f, seed)
                    reports.append(CheckReport("identities", all(c.values()),
                                               {"group": H.name, "family": f.name, **c}))
    reports.extend(transfer_sweep(groups, families, seed=seed, randoms=int(job.params.get("randoms", 2)),
                                  workers=int(job.params.get("workers", 1)),
                                  checks=[c for c in checks if c in SWEEP_CHECKS],
                                  lift_limit=int(job.params.get("lift_limit", 8))))
    counts = {s: sum(r.status == s for r in reports) for s in ("PASS", "FAIL", "SKIP")}
    return _combined(reports), {
        "groups": len(groups),
        "families": [f.name for f in families],
        "counts": counts,
        "reports": [r.to_json_dict() for r in reports]
    }


def _counterexample(job: Job, G: FiniteGroup | None, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    example = int(job.params.get("example", 1))
    if example == 2:
        p = int(job.params.get("p", 3))
        report = example_two_shadow(builtin_group(f"Meta:{p}"), p)
        return report.status, report.to_json_dict()
    harness = counterexample_harness(p=int(job.params.get("p", 2)), n=int(job.params.get("n", 2)),
                                     k=int(job.params.get("k", 9)),
                                     workers=int(job.params.get("workers", 1)))
    status = "SKIP" if harness.passed is None else ("PASS" if harness.passed else "FAIL")
    return status, harness.to_json_dict()


def _lyndon(job: Job, G: FiniteGroup | None, fam: OmegaFamily | None) -> Tuple[str, Dict]:
    k = int(job.params.get("k", 2))
    n = int(job.params.get("n", 3))
    p = int(job.params.get("p", 2))
    words = lyndon_words(k, n)
    count = necklace_count(k, n)
    checks = {
        "necklace_count_matches": len(words) == count,
        "increasing": all(a < b for a, b in zip(words, words[1:]))
    }
    if n >= 2:
        images = [magnus_image(tau(w.letters), k, p, n) for w in words]
        checks["tau_valuation"] = all(s.valuation() == n for s in images)
    result: Dict[str, Any] = {"k": k, "n": n, "count": len(words), "necklace_count": count,
                              "words": [w.to_json_dict() for w in words[:256]]}
    samples = int(job.params.get("random_words", 0))
    if samples:
        level = int(job.params.get("level", n))
        length = int(job.params.get("length", 8))
        rng = np.random.default_rng(limits.current().seed)
        members = 0
        multiplicative = True
        for _ in range(samples):
            u, v = random_word(k, length, rng), random_word(k, length, rng)
            members += bool(zassenhaus_membership(u, p, level, k))
            multiplicative = multiplicative and \
                magnus_image(u + v, k, p, level) == magnus_image(u, k, p, level) * magnus_image(v, k, p, level)
        checks["magnus_multiplicative"] = multiplicative
        result["membership"] = {"samples": samples, "level": level + 1, "members": members}
    result["checks"] = checks
    return _verdict(checks), result


HANDLERS: Dict[str, Callable[[Job, Any, Any], Tuple[str, Dict]]] = {
    "group-info": _group_info,
    "filtration": _filtration,
    "t-subgroups": _t_subgroups,
    "hom-count": _hom_count,
    "h2": _h2,
    "massey": _massey,
    "pairings": _pairings,
    "kernel-condition": _kernel_condition,
    "transfer-check": _transfer_check,
    "transfer-sweep": _sweep,
    "counterexample": _counterexample,
    "lyndon": _lyndon
}


def run_job(index: int, job: Job, budgets: Dict | None = None) -> JobReport:
    """Run one job under its limits; errors become FAIL, BUDGET or ERROR reports"""
    job_limits = job.limits(budgets)
    previous = limits.configure(job_limits)
    group_hash = None
    try:
        G = group_from_json_dict(job.group) if job.group is not None else None
        group_hash = G.hash() if G is not None else None
        fam = parse_family(job.family) if job.family is not None else None
        status, result = HANDLERS[job.command](job, G, fam)
        return JobReport(index, job, status, result, group_hash, job_limits.to_json_dict())
    except OracleFailure as ex:
        logger.error("job %d (%s): %s", index, job.command, ex)
        return JobReport(index, job, "FAIL", None, group_hash, job_limits.to_json_dict(), str(ex))
    except ResourceExhausted as ex:
        logger.warning("job %d (%s) ran out of budget: %s", index, job.command, ex)
        result = {"explored": getattr(ex, "explored", None)}
        return JobReport(index, job, "BUDGET", result, group_hash, job_limits.to_json_dict(), str(ex))
    except (ValueError, KeyError, TypeError) as ex:
        logger.error("job %d (%s) failed: %s", index, job.command, ex)
        return JobReport(index, job, "ERROR", None, group_hash, job_limits.to_json_dict(), str(ex))
    finally:
        limits.configure(previous)


def run_serialized(args: Tuple[int, Dict, Dict]) -> Dict:
    """Worker-process entry: (index, job dict, budgets) -> report dict"""
    index, jd, budgets = args
    return run_job(index, Job.from_json_dict(jd), budgets).to_json_dict()


def run(manifest: Manifest) -> List[JobReport]:
    return [run_job(i, job, manifest.budgets) for i, job in enumerate(manifest.jobs)]


def exit_code(statuses: List[str]) -> int:
    """1 on any FAIL, else 2 on any ERROR, else 3 on any BUDGET, else 0"""
    if "FAIL" in statuses:
        return EXIT_FAIL
    if "ERROR" in statuses:
        return EXIT_USAGE
    if "BUDGET" in statuses:
        return EXIT_BUDGET
    return EXIT_OK
