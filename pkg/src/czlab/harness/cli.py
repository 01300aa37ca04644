"""Command-line front end.

Verbs: ``verify`` one claim, ``decompose`` / ``apply`` pipeline stages,
``sweep`` the whole registry, ``list-claims``.  Exit status is 0 exactly
when every produced verdict is a pass.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..errors import CzlabError
from .claims import list_claims, verify_claim
from .experiment import load_config, run_experiment
from .reports import write_summary_csv


def _claim_line(rep) -> str:
    return f"{rep.claim_id}: {rep.verdict} (worst ratio {rep.worst_ratio():.6g}, config {rep.hash[:12]})"


def _cmd_list(args) -> int:
    for cid in list_claims():
        print(cid)
    return 0


def _cmd_verify(args) -> int:
    overrides = load_config(args.config) if args.config else None
    rep = verify_claim(args.claim, overrides)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rep.write_json(out / f"{args.claim}.json")
    write_summary_csv([rep], out / "summary.csv")
    print(_claim_line(rep))
    return 0 if rep.passed else 1


def _cmd_sweep(args) -> int:
    if not args.all:
        print("sweep: pass --all to run the whole registry", file=sys.stderr)
        return 2
    overrides = load_config(args.config) if args.config else {}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reports = []
    for cid in list_claims():
        rep = verify_claim(cid, overrides.get(cid))
        rep.write_json(out / f"{cid}.json")
        reports.append(rep)
        print(_claim_line(rep))
    write_summary_csv(reports, out / "summary.csv")
    failed = [r.claim_id for r in reports if not r.passed]
    if failed:
        print(f"failed: {', '.join(failed)}")
        return 1
    print(f"all {len(reports)} claims pass")
    return 0


def _cmd_run(args, mode: str) -> int:
    cfg = load_config(args.config)
    if mode != "full":
        cfg = dict(cfg)
        cfg["claims"] = {}
        if mode == "decompose":
            cfg["apply"] = {"skip": True}
    out = run_experiment(cfg, args.out)
    print(f"reports in {out}")
    verdict = json.loads((out / "run.json").read_text())["verdict"]
    print(f"run verdict: {verdict}")
    return 0 if verdict == "pass" else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="czlab",
        description="commutator workbench: claim verification and experiment runs")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("list-claims", help="print registered claim ids")
    p.set_defaults(fn=_cmd_list)

    p = sub.add_parser("verify", help="verify one claim")
    p.add_argument("--claim", required=True, choices=list_claims())
    p.add_argument("--config", help="YAML file with config overrides")
    p.add_argument("--out", default="czlab-reports/verify")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("sweep", help="verify every registered claim")
    p.add_argument("--all", action="store_true")
    p.add_argument("--config", help="YAML mapping claim id -> overrides")
    p.add_argument("--out", default="czlab-reports/sweep")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("decompose", help="run the decomposition stage of a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=lambda a: _cmd_run(a, mode="decompose"))

    p = sub.add_parser("apply", help="run decomposition plus the operator stage")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=lambda a: _cmd_run(a, mode="apply"))

    p = sub.add_parser("run", help="run a full experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=lambda a: _cmd_run(a, mode="full"))

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CzlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
