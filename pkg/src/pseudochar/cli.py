"""Command-line driver: verification suites, fingerprints, expansion tables, demos, census."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import correspondence as corr
from .determinants import (ExpansionTable, amitsur_table, check_multiplicative_homogeneous, det_from_rep,
                           det_from_theta, verify_table)
from .groups_words import GROUP_NAME_HELP, FiniteGroup, Representation, builtin_group, random_representation
from .lafforgue import check_lpc1, check_lpc2, harvest_theta, lpc_from_theta
from .matrices import SquareMatrix
from .rings import RING_NAME_HELP, ring_from_json, ring_from_name
from .taylor import TaylorPC, is_taylor_pc, taylor_from_rep


class UsageError(Exception):
    """Bad names, files or option combinations (exit code 2)."""


def _group(name: str) -> FiniteGroup:
    try:
        return builtin_group(name)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"unknown group {name!r}; valid groups: {GROUP_NAME_HELP}") from exc


def _ring(name: str):
    try:
        return ring_from_name(name)
    except ValueError as exc:
        raise UsageError(f"unknown ring {name!r}; valid rings: {RING_NAME_HELP}") from exc


def _perturb(theta: dict, k: int, g: int) -> dict:
    out = dict(theta)
    out[(k, g)] = out[(k, g)] + 1
    return out


def _representations(args, group, ring):
    rng = random.Random(args.seed)
    return [random_representation(group, ring, args.d, rng) for _ in range(args.reps)]


def _suite_report(kind: str) -> corr.ConversionReport:
    return corr.ConversionReport(f"verify-{kind}")


def verify_taylor(args, group, ring) -> corr.ConversionReport:
    report = _suite_report("taylor")
    report.checks.append("taylor identity")
    for i, rho in enumerate(_representations(args, group, ring)):
        T = taylor_from_rep(rho)
        if args.corrupt and group.order > 1:
            values = list(T.values)
            values[1] = values[1] + 1
            T = TaylorPC(T.group, T.ring, T.d, tuple(values))
        v = is_taylor_pc(T, seed=args.seed + i, trials=args.trials)
        if not v.accepted:
            report.defects.append({"rep": i, **v.to_json()})
    report.counts["representations"] = args.reps
    return report


def verify_det(args, group, ring) -> corr.ConversionReport:
    report = _suite_report("det")
    report.checks += ["multiplicative and homogeneous", "data-backed agrees with rep-backed"]
    for i, rho in enumerate(_representations(args, group, ring)):
        D = det_from_rep(rho)
        theta = harvest_theta(rho)
        if args.corrupt:
            theta = _perturb(theta, 1, group.order - 1)
        data = det_from_theta(group, ring, args.d, theta)
        for name, law in (("rep", D), ("data", data)):
            v = check_multiplicative_homogeneous(law, seed=args.seed + i, trials=args.trials)
            if not v.accepted:
                report.defects.append({"rep": i, "backing": name, "witness": v.witness})
        checked, bad = corr.compare_on_supports(D, data, seed=args.seed + i, samples=args.trials)
        report.counts[f"rep{i}_evaluations"] = checked
        if bad is not None:
            report.defects.append({"rep": i, "check": "agreement", "element": repr(bad)})
    return report


def verify_lpc(args, group, ring) -> corr.ConversionReport:
    report = _suite_report("lpc")
    report.checks += ["LPC1", "LPC2"]
    for i, rho in enumerate(_representations(args, group, ring)):
        theta = harvest_theta(rho)
        if args.corrupt:
            theta = _perturb(theta, args.d, group.order - 1)
        pc = lpc_from_theta(group, ring, args.d, theta, check=False)
        for name, v in (("LPC1", check_lpc1(pc, seed=args.seed + i, trials=min(args.trials, 200))),
                        ("LPC2", check_lpc2(pc, seed=args.seed + i, trials=args.trials))):
            if not v.accepted:
                report.defects.append({"rep": i, "check": name, "witness": v.witness})
    return report


def verify_roundtrip(args, group, ring) -> corr.ConversionReport:
    report = _suite_report("roundtrip")
    for i, rho in enumerate(_representations(args, group, ring)):
        source = rho
        if args.corrupt:
            source = det_from_theta(group, ring, args.d, _perturb(harvest_theta(rho), args.d, group.order - 1))
        sub = corr.roundtrip_check(source, seed=args.seed + i, samples=args.trials)
        report.checks = sub.checks
        for key, value in sub.counts.items():
            report.counts[f"rep{i}_{key}"] = value
        report.defects += [{"rep": i, **d} for d in sub.defects]
    return report


SUITES = {"taylor": verify_taylor, "det": verify_det, "lpc": verify_lpc, "roundtrip": verify_roundtrip}


def cmd_verify(args) -> corr.ConversionReport:
    group, ring = _group(args.group), _ring(args.ring)
    if not 1 <= args.d <= 3:
        raise UsageError("--d must be 1, 2 or 3")
    report = SUITES[args.suite](args, group, ring)
    report.extra.update({"group": group.name, "ring": str(ring), "d": args.d})
    return report


def load_representation(obj, group_name=None, ring_name=None) -> Representation:
    """Parse {group, ring, images}; group and ring may be names or serialized objects."""
    g = group_name or obj.get("group")
    r = ring_name or obj.get("ring")
    if g is None or r is None:
        raise UsageError("representation file needs group and ring (or pass --group/--ring)")
    group = _group(g) if isinstance(g, str) else FiniteGroup.from_json(g)
    ring = _ring(r) if isinstance(r, str) else ring_from_json(r)
    try:
        images = [SquareMatrix.from_json(ring, m) for m in obj["images"]]
        return Representation(group, ring, images)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad representation file: {exc}") from exc


def cmd_fingerprint(args) -> corr.ConversionReport:
    try:
        with open(args.rep) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.rep}: {exc}") from exc
    rho = load_representation(obj, args.group, args.ring)
    report = corr.ConversionReport("fingerprint")
    report.fingerprint = corr.fingerprint_json(rho.group, rho.d, harvest_theta(rho))
    report.extra.update({"group": rho.group.name, "ring": str(rho.ring), "d": rho.d})
    return report


def cmd_table(args) -> corr.ConversionReport:
    report = corr.ConversionReport("table")
    if args.check:
        try:
            with open(args.check) as fh:
                table = ExpansionTable.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read table {args.check}: {exc}") from exc
        if args.d is not None and args.n is not None and (table.d, table.n) != (args.d, args.n):
            raise UsageError(f"file holds the (d={table.d}, n={table.n}) table")
        report.checks.append("symbolic and numeric identity")
        report.defects += verify_table(table, trials=args.trials, seed=args.seed)
    else:
        if args.d is None or args.n is None:
            raise UsageError("table needs --d and --n")
        try:
            table = amitsur_table(args.d, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        report.checks.append("computed and verified symbolically")
    report.extra["table"] = table.to_json()
    return report


def cmd_demo(args) -> corr.ConversionReport:
    return corr.char_p_separation_demo()


def cmd_census(args) -> corr.ConversionReport:
    group = _group(args.group)
    try:
        return corr.semisimple_bijection_check(group, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudochar", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--timing", action="store_true", help="include elapsed_ms (output is then not reproducible)")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--group", default="S3")
    v.add_argument("--ring", default="F5")
    v.add_argument("--d", type=int, default=2)
    v.add_argument("--reps", type=int, default=3, help="number of random representations")
    v.add_argument("--corrupt", action="store_true", help="plant a single-entry corruption")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fingerprint", parents=[common], help="theta tables of a representation file")
    f.add_argument("--rep", required=True)
    f.add_argument("--group")
    f.add_argument("--ring")
    f.set_defaults(func=cmd_fingerprint)

    t = sub.add_parser("table", parents=[common], help="emit or check an expansion table")
    t.add_argument("--d", type=int)
    t.add_argument("--n", type=int)
    mode = t.add_mutually_exclusive_group()
    mode.add_argument("--emit", action="store_true")
    mode.add_argument("--check", metavar="FILE")
    t.set_defaults(func=cmd_table)

    dm = sub.add_parser("demo", parents=[common], help="demonstrations")
    dm.add_argument("name", choices=["char-p"])
    dm.set_defaults(func=cmd_demo)

    c = sub.add_parser("census", parents=[common], help="semisimple 2-dimensional census over F_q")
    c.add_argument("--group", required=True)
    c.add_argument("--q", type=int, required=True)
    c.set_defaults(func=cmd_census)
    return p


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    lines = []
    for key in sorted(payload):
        value = payload[key]
        text = value if isinstance(value, (str, int, float, bool)) or value is None else json.dumps(value, sort_keys=True)
        lines.append(f"{key}\t{text}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    payload = report.to_json(timing=args.timing)
    payload["seed"] = args.seed
    payload["command"] = args.command
    text = _render(payload, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
