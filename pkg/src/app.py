"""Batch driver: runs a manifest of jobs, or one job from the command line,
and writes one JSON report per line.

    python src/app.py --manifest sample_manifest.json --jobs 4 --out reports.jsonl
    python src/app.py filtration --group D4 --p 2 --kind lower-central --upto 3
"""
import sys
import json
import logging
import argparse
from concurrent.futures import ProcessPoolExecutor
from typing import List, Dict, Any, TextIO

from kgc import SCHEMA_VERSION
from kgc.errors import ManifestError
from kgc.limits import Limits
from kgc.manifest import COMMANDS, Job, Manifest
from kgc.report import EXIT_USAGE, exit_code, run_serialized

logger = logging.getLogger("kgc.app")


def _value(text: str) -> Any:
    """JSON when it parses, the raw string otherwise: "2" -> 2, "[1,0]" -> [1, 0], "D4" -> "D4" """
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_params(extra: List[str]) -> Dict[str, Any]:
    """Leftover "--key value" pairs of a single-job command; a bare "--flag" is true"""
    params: Dict[str, Any] = {}
    i = 0
    while i < len(extra):
        arg = extra[i]
        if not arg.startswith("--") or len(arg) < 3:
            raise ManifestError(f"Unexpected argument {arg!r}")
        key, eq, text = arg[2:].partition("=")
        key = key.replace("-", "_")
        if eq:
            params[key] = _value(text)
            i += 1
        elif i + 1 < len(extra) and not extra[i + 1].startswith("--"):
            params[key] = _value(extra[i + 1])
            i += 2
        else:
            params[key] = True
            i += 1
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Finite-scale checks of the kernel unipotent transfer machinery.")
    parser.add_argument("--manifest", help="JSON manifest of jobs")
    parser.add_argument("--jobs", type=int, default=1, help="jobs run concurrently (default: 1)")
    parser.add_argument("--budget-prefixes", type=int, help="hom-search prefix budget")
    parser.add_argument("--cap-order", type=int, help="largest group a closure may build")
    parser.add_argument("--seed", type=int, help="seed for sampled checks")
    parser.add_argument("--out", help="JSON-lines report file (default: stdout)")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    for command in COMMANDS:
        sub = commands.add_parser(command, allow_abbrev=False,
                                  help=f"run a single {command} job; extra --key value pairs become params")
        sub.add_argument("--group", type=_value, help='builtin name like "U:3:2" or a JSON group document')
        sub.add_argument("--family", help='e.g. "zassenhaus:2:3", "lower-central:3:2", "mixed:3"')
        sub.add_argument("--subgroup", action="append", dest="subgroups", default=[],
                         help="subgroup spec, repeat for N1 and N2")
    return parser


def load_jobs(args: argparse.Namespace, extra: List[str]) -> Manifest:
    if args.command is not None:
        if args.manifest:
            raise ManifestError("Give either --manifest or a command, not both")
        jd = {"command": args.command, "subgroups": args.subgroups, **parse_params(extra)}
        if args.group is not None:
            jd["group"] = args.group
        if args.family is not None:
            jd["family"] = args.family
        return Manifest([Job.from_json_dict(jd)])
    if extra:
        raise ManifestError(f"Unexpected arguments {extra}")
    if not args.manifest:
        raise ManifestError("Nothing to run: give --manifest or a command")
    return Manifest.load(args.manifest)


def base_budgets(args: argparse.Namespace, manifest: Manifest) -> Dict:
    """CLI flags over the defaults, then the manifest's own budgets block"""
    flags = {"budget_prefixes": args.budget_prefixes, "cap_order": args.cap_order, "seed": args.seed}
    return {**{k: v for k, v in flags.items() if v is not None}, **manifest.budgets}


def run_manifest(manifest: Manifest, budgets: Dict, workers: int, out: TextIO) -> List[str]:
    """Runs every job, writes reports in manifest order, returns their statuses"""
    tasks = [(i, job.to_json_dict(), budgets) for i, job in enumerate(manifest.jobs)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = pool.map(run_serialized, tasks)
            statuses = [_emit(jd, out) for jd in reports]
    else:
        statuses = [_emit(run_serialized(t), out) for t in tasks]
    return statuses


def _emit(jd: Dict, out: TextIO) -> str:
    out.write(json.dumps(jd) + "\n")
    out.flush()
    logger.info("job %d %s: %s", jd["job"], jd["command"], jd["status"])
    return jd["status"]


def main(argv: List[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        manifest = load_jobs(args, extra)
        budgets = base_budgets(args, manifest)
        Limits.from_json_dict(budgets)
    except ValueError as ex:
        logger.error("%s", ex)
        return EXIT_USAGE
    logger.info("schema %s: %d jobs, %d workers", SCHEMA_VERSION, len(manifest.jobs), args.jobs)
    if args.out:
        with open(args.out, 'w') as f:
            statuses = run_manifest(manifest, budgets, args.jobs, f)
    else:
        statuses = run_manifest(manifest, budgets, args.jobs, sys.stdout)
    return exit_code(statuses)


if __name__ == "__main__":
    sys.exit(main())
