"""Command-line front end: tables, perfect isometry groups, case verification, normalizers."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from picard import chartab, groups, isometry, matring, picassembly

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    case: str | None = None
    max_n: int = 2
    max_p: int = 4
    fmt: str = "json"
    out: str | None = None
    verbose: bool = False

    def canonical_family(self) -> str:
        if not self.family:
            raise UsageError("--family is required")
        try:
            return groups.parse_family(self.family).canonical()
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# commands: each returns (report, ok)
# ---------------------------------------------------------------------------

def cmd_chartab(cfg: RunConfig) -> tuple[dict, bool]:
    family = cfg.canonical_family()
    block = chartab.block_data(family)
    report = {"family": family, "block": block.to_json()}
    if block.table is not None:
        outside = [block.table.labels[i] for i in range(len(block.table))
                   if i not in set(block.irr_indices)]
        report["outside_principal_block"] = outside
        report["orthogonality_defects"] = block.table.orthogonality_defects()
    report["block_check"] = block.check()
    ok = not report["block_check"] and not report.get("orthogonality_defects")
    return report, ok


def cmd_perf(cfg: RunConfig) -> tuple[dict, bool]:
    family = cfg.canonical_family()
    block = chartab.block_data(family)
    stats = isometry.EnumerationStats()
    grp = isometry.perf_enumerate(block, stats=stats)
    report = isometry.group_report(grp, block)
    report["family"] = family
    report["search"] = {"stage1_candidates": stats.stage1_candidates, "nodes": stats.nodes,
                        "pruned": stats.pruned, "verified": stats.verified}
    return report, True


def _verify_one(case) -> dict:
    rep = picassembly.verify_case(case)
    out = rep.to_json()
    out["failures"] = rep.failures()
    return out


def cmd_verify(cfg: RunConfig) -> tuple[dict, bool]:
    if not cfg.case:
        raise UsageError("--case is required (a case tag, 'sl28' or 'all')")
    try:
        if cfg.case == "all":
            cases = picassembly.default_cases(cfg.max_n, cfg.max_p)
        elif cfg.case == "sl28":
            cases = []
        else:
            cases = [picassembly.parse_case(cfg.case)]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    reports = []
    for c in cases:
        try:
            reports.append(_verify_one(c))
        except Exception as exc:  # report and continue, naming the case
            reports.append({"case": c.tag(), "passed": False, "failures": [repr(exc)]})
    bundle = {"cases": reports}
    if cfg.case in ("all", "sl28"):
        sl28 = picassembly.ingredient_report_for_sl28()
        sl28_ok = (sl28["hom_part_order"] == 3 and sl28["normalizer_quotient_order"] == 1
                   and sl28["distinct_permutations"] and sl28["generator_preserves_cells"])
        sl28["passed"] = sl28_ok
        bundle["sl28"] = sl28
    ok = all(r["passed"] for r in reports) and bundle.get("sl28", {}).get("passed", True)
    bundle["passed"] = ok
    return bundle, ok


def cmd_outgrp(cfg: RunConfig, k: int, n: int, subgroup: str, method: str) -> tuple[dict, bool]:
    if subgroup not in ("C3", "C7", "C7:C3", "singer"):
        raise UsageError(f"unknown subgroup {subgroup!r}")
    try:
        s = matring.singer_subgroup(k) if subgroup == "singer" else matring.lift_odd_subgroup(k, n, subgroup)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    nrm = matring.normalizer(s, method)
    report = matring.NormalizerReport(s, nrm).to_json()
    return report, True


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    lines: list[str] = []
    _text_lines(report, "", lines)
    return "\n".join(lines) + "\n"


def _text_lines(obj, prefix: str, lines: list[str]) -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            _text_lines(obj[key], f"{prefix}.{key}" if prefix else str(key), lines)
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            _text_lines(x, f"{prefix}[{i}]", lines)
    else:
        lines.append(f"{prefix}: {json.dumps(obj, ensure_ascii=False)}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write the report to this path instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="picard", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("chartab", parents=[common], help="character table and block data")
    p.add_argument("--family", required=True)
    p = sub.add_parser("perf", parents=[common], help="perfect self-isometry group of a block")
    p.add_argument("--family", required=True)
    p = sub.add_parser("verify", parents=[common], help="verify a Picard group realization")
    p.add_argument("--case", required=True)
    p.add_argument("--max-n", type=int, default=2)
    p.add_argument("--max-p", type=int, default=4)
    p = sub.add_parser("outgrp", parents=[common], help="normalizer quotient N_GL(S)/S")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p.add_argument("subgroup", help="C3, C7, C7:C3 or singer")
    p.add_argument("--method", choices=("auto", "exhaustive", "layered"), default="auto")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cfg = RunConfig(args.command, getattr(args, "family", None), getattr(args, "case", None),
                    getattr(args, "max_n", 2), getattr(args, "max_p", 4), args.format, args.out,
                    args.verbose)
    try:
        if cfg.command == "chartab":
            report, ok = cmd_chartab(cfg)
        elif cfg.command == "perf":
            report, ok = cmd_perf(cfg)
        elif cfg.command == "verify":
            report, ok = cmd_verify(cfg)
        else:
            report, ok = cmd_outgrp(cfg, args.k, args.n, args.subgroup, args.method)
    except UsageError as exc:
        print(f"picard: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OverflowError, isometry.EnumerationBoundError) as exc:
        print(f"picard: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
