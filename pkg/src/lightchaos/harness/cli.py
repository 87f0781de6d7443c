"""Command line: list, check, reproduce."""

from __future__ import annotations

import argparse
import json
import sys

from ..detectors import (
    check_light_periodic_density,
    check_light_sensitivity,
    check_light_transitivity,
    check_periodic_density,
    check_sensitivity,
    check_transitivity,
)
from ..maps import system_from_tag
from ..subbases import SubbaseScheme, generate_family
from ..verdicts import Status
from .config import load_config
from .registry import list_experiments
from .report import EXIT_OK, EXIT_UNKNOWN, run_dir, run_experiment, verify_claims, write_report

PROPERTIES = ("transitivity", "periodic_density", "sensitivity")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lightchaos", description="Certified checks of (light) chaos properties.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list registered experiments")

    c = sub.add_parser("check", help="run one detector")
    c.add_argument("--system", required=True)
    c.add_argument("--property", required=True, choices=PROPERTIES)
    c.add_argument("--scheme", help="subbase scheme tag; omit for the full (basic-set) property")
    c.add_argument("--resolution", type=int)
    c.add_argument("--kmax", type=int)
    c.add_argument("--delta")
    c.add_argument("--config")
    c.add_argument("--seed", type=int)

    r = sub.add_parser("reproduce", help="run registered experiments and write reports")
    r.add_argument("experiment", help="experiment name or 'all'")
    r.add_argument("--seed", type=int)
    r.add_argument("--format", choices=("json", "md"), default="json")
    r.add_argument("--out")
    r.add_argument("--config")
    r.add_argument("--kmax", type=int)
    return p


def _check(args) -> int:
    cfg = load_config(args.config, k_max=args.kmax, resolution=args.resolution, delta=args.delta, seed=args.seed)
    f = system_from_tag(args.system)
    r = cfg.resolution or 8
    delta = cfg.delta
    if args.property == "sensitivity" and delta is None:
        raise SystemExit("--delta is required for sensitivity")
    if args.scheme is None:
        run = {
            "transitivity": lambda: check_transitivity(f, r, cfg.budget),
            "periodic_density": lambda: check_periodic_density(f, r, cfg.budget),
            "sensitivity": lambda: check_sensitivity(f, delta, cfg.budget, r),
        }[args.property]
    else:
        fam = generate_family(f.space, SubbaseScheme(args.scheme, r))
        run = {
            "transitivity": lambda: check_light_transitivity(f, fam, cfg.budget),
            "periodic_density": lambda: check_light_periodic_density(f, fam, cfg.budget),
            "sensitivity": lambda: check_light_sensitivity(f, fam, delta, cfg.budget),
        }[args.property]
    v = run()
    print(json.dumps(v.to_json(), sort_keys=True, indent=1))
    return EXIT_UNKNOWN if v.status is Status.UNKNOWN else EXIT_OK


def _reproduce(args) -> int:
    cfg = load_config(args.config, seed=args.seed, k_max=args.kmax, out_dir=args.out)
    names = [s.name for s in list_experiments()] if args.experiment == "all" else [args.experiment]
    directory = run_dir(cfg.out_dir)
    reports = []
    for name in names:
        rep = run_experiment(name, cfg)
        path = write_report(rep, directory, args.format)
        reports.append(rep)
        unknown = [c["name"] for c in rep.checks if c["status"] == "UNKNOWN"]
        bad = [c["name"] for c in rep.checks if not c["match"] and c["status"] != "UNKNOWN"]
        parts = (["MISMATCH " + ",".join(bad)] if bad else []) + (["UNKNOWN " + ",".join(unknown)] if unknown else [])
        print(f"{name}: {'; '.join(parts) or 'ok'} -> {path}")
    return verify_claims(reports)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for s in list_experiments():
            print(f"{s.name:16s} {s.expected:8s} {s.system:16s} {s.anchor}")
        return EXIT_OK
    try:
        if args.command == "check":
            return _check(args)
        return _reproduce(args)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 64


if __name__ == "__main__":
    sys.exit(main())
