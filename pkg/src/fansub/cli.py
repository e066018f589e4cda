"""``fansub`` command line: construct | verify | scan | infeasible.

Exit codes: 0 success, 1 verification failure, 2 configuration or input
error, 3 parameter selection exhausted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, parse_pressure_flag
from .explorer import GridCapExceeded, GridSpec, default_grid, emit_csv, emit_heatmap, scan_feasibility
from .infeasibility import GridTooLarge, ScanGrid, default_scan_grid, n_region_scan, three_region_certificate
from .pressure import PressureDomainError, QuadratureError
from .selector import SelectionExhausted, construct
from .serialize import (
    REPORT_SCHEMA_VERSION,
    SCAN_SCHEMA_VERSION,
    SchemaError,
    candidate_to_dict,
    load_candidate,
    write_json,
)
from .verifier import StructureError, VerificationReport, eigen_crosscheck, verify

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_EXHAUSTED = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration; flags override its values")
    p.add_argument("--pressure", help="polytropic:K,gamma or tabulated:PATH (default polytropic:1,2)")
    p.add_argument("--rho0", type=float, help="density of the Riemann data")
    p.add_argument("--u0", type=float, help="tangential velocity: m = (+-rho0*u0, 0) above/below")
    p.add_argument("--rho-star", type=float, help="reference density of the pressure potential (default rho0)")
    p.add_argument("--theta", type=float, help="selection safety factor in (0, 1) (default 0.1)")
    p.add_argument("--tol-eq", type=float, help="relative tolerance of equalities (default 1e-9)")
    p.add_argument("--tol-strict", type=float, help="strict-inequality tolerance factor (default 1e-12)")
    p.add_argument("--out-dir", default=".", help="directory for output files (default: current)")
    p.add_argument("--quiet", action="store_true", help="do not print the condition table")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fansub",
        description="Construct and verify fan subsolutions for 2-D barotropic Euler contact data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="select parameters, build and verify the five-region subsolution")
    _common(p)
    p.add_argument("--subsolution-out", help="candidate JSON path (default OUT_DIR/subsolution.json)")
    p.add_argument("--report-out", help="report JSON path (default OUT_DIR/report.json)")

    p = sub.add_parser("verify", help="verify a candidate subsolution JSON")
    p.add_argument("candidate", help="candidate JSON file")
    _common(p)
    p.add_argument("--report-out", help="report JSON path (default OUT_DIR/verify_report.json)")

    p = sub.add_parser("scan", help="map feasibility over (a, eps)")
    _common(p)
    p.add_argument("--a-range", nargs=2, type=float, metavar=("LOW", "HIGH"))
    p.add_argument("--eps-range", nargs=2, type=float, metavar=("LOW", "HIGH"))
    p.add_argument("--a-count", type=int, default=50)
    p.add_argument("--eps-count", type=int, default=50)
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv-out", help="default OUT_DIR/scan.csv")
    p.add_argument("--svg-out", help="default OUT_DIR/scan.svg")

    p = sub.add_parser("infeasible", help="three-region certificate (n=1) or four-region scan (n=2)")
    _common(p)
    p.add_argument("--n", type=int, default=1, help="number of interior regions (1 or 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=0, help="extra random samples on top of the grid")
    p.add_argument("--summary-out", help="default OUT_DIR/infeasible.json")
    return parser


def load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    if args.pressure:
        cfg.pressure = parse_pressure_flag(args.pressure)
    for name in ("rho0", "u0", "rho_star", "theta"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    tols = dict(cfg.tolerances) if isinstance(cfg.tolerances, dict) else cfg.tolerances
    if args.tol_eq is not None:
        tols["tol_eq"] = args.tol_eq
    if args.tol_strict is not None:
        tols["tol_strict"] = args.tol_strict
    cfg.tolerances = tols
    return cfg


def _out(args, cfg: RunConfig, flag: str, key: str, default: str) -> Path:
    value = getattr(args, flag, None) or cfg.outputs.get(key)
    return Path(value) if value else Path(args.out_dir) / default


def format_table(report: VerificationReport) -> str:
    width = max(len(c.id) for c in report.conditions)
    lines = [f"{'condition':<{width}}  {'kind':<9}  {'lhs':>13}  {'rhs':>13}  {'slack':>13}  result"]
    for c in report.conditions:
        lines.append(
            f"{c.id:<{width}}  {c.kind.value:<9}  {c.lhs:>13.5e}  {c.rhs:>13.5e}  {c.slack:>13.5e}  "
            f"{'PASS' if c.passed else 'FAIL'}"
        )
    verdict = "ALL PASS" if report.all_pass else f"{len(report.failing())} FAILING"
    lines.append(f"{len(report.conditions)} conditions, {verdict}")
    return "\n".join(lines)


def _report_doc(cfg: RunConfig, report: VerificationReport, checks, extra: dict | None = None) -> dict:
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": cfg.echo(),
        "all_pass": report.all_pass,
        "condition_count": len(report.conditions),
    }
    if extra:
        doc.update(extra)
    doc["report"] = report.to_dict()
    doc["eigen_crosscheck"] = [c.to_dict() for c in checks]
    return doc


def cmd_construct(args) -> int:
    cfg = load_config(args)
    cfg.validate()
    law = cfg.law()
    datum = cfg.datum()
    ctx = cfg.context()
    try:
        result = construct(datum, law, ctx, cfg.selector_options(), cfg.tols())
    except SelectionExhausted as exc:
        print(f"error: parameter selection exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    sub_path = write_json(candidate_to_dict(result.subsolution), _out(args, cfg, "subsolution_out", "subsolution", "subsolution.json"))
    checks = eigen_crosscheck(result.subsolution, law)
    extra = {"selection": result.selection_dict()}
    if result.internal_error:
        extra["internal_error"] = result.internal_error
    rep_path = write_json(
        _report_doc(cfg, result.report, checks, extra), _out(args, cfg, "report_out", "report", "report.json")
    )
    if not args.quiet:
        sel = result.selection_dict()
        print(
            f"b = {sel['b']:.10g}  eps = {sel['eps']:.10g}  a = {sel['a']:.10g}  "
            f"rho1 = {sel['rho1']:.10g}  rho2 = {sel['rho2']:.10g}  q1 = {sel['q1']:.10g}  q2 = {sel['q2']:.10g}"
        )
        print(format_table(result.report))
        print(f"wrote {sub_path} and {rep_path}")
    if result.internal_error:
        print(f"error: {result.internal_error}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args)
    cfg.validate(need_datum=False)
    law = cfg.law()
    candidate = load_candidate(args.candidate)
    datum = cfg.datum() if cfg.rho0 is not None else None
    ctx = cfg.context(default_rho_star=candidate.left.rho)
    report = verify(candidate, law, ctx, datum=datum, tols=cfg.tols())
    checks = eigen_crosscheck(candidate, law)
    rep_path = write_json(
        _report_doc(cfg, report, checks, {"candidate": str(args.candidate)}),
        _out(args, cfg, "report_out", "report", "verify_report.json"),
    )
    if not args.quiet:
        print(format_table(report))
        print(f"wrote {rep_path}")
    return EXIT_OK if report.all_pass else EXIT_VERIFY


def cmd_scan(args) -> int:
    cfg = load_config(args)
    cfg.validate()
    law = cfg.law()
    datum = cfg.datum()
    ctx = cfg.context()
    base = default_grid(law, datum)
    grid = GridSpec(
        a_range=(*(args.a_range or base.a_range[:2]), args.a_count),
        eps_range=(*(args.eps_range or base.eps_range[:2]), args.eps_count),
        cap=args.cap,
    )
    try:
        table = scan_feasibility(datum, law, ctx, grid, cfg.tols(), workers=args.workers)
    except GridCapExceeded as exc:
        raise ConfigError([str(exc)]) from exc
    csv_path = emit_csv(table, _out(args, cfg, "csv_out", "csv", "scan.csv"))
    svg_path = emit_heatmap(table, _out(args, cfg, "svg_out", "svg", "scan.svg"))
    feasible = sum(c.feasible for c in table)
    if not args.quiet:
        print(f"{len(table)} cells, {feasible} feasible; wrote {csv_path} and {svg_path}")
    return EXIT_OK


def cmd_infeasible(args) -> int:
    cfg = load_config(args)
    if args.n not in (1, 2):
        raise ConfigError([f"--n must be 1 or 2 (got {args.n}); five regions are handled by 'construct'"])
    cfg.validate()
    law = cfg.law()
    datum = cfg.datum()
    ctx = cfg.context()
    out = _out(args, cfg, "summary_out", "summary", "infeasible.json")
    doc = {"schema_version": SCAN_SCHEMA_VERSION, "config": cfg.echo()}
    if args.n == 1:
        cert = three_region_certificate(datum, law)
        doc["certificate"] = cert.to_dict()
        if not args.quiet:
            print("three-region partition: exact contradiction certificate")
            for name, value in cert.forced:
                print(f"  forced {name} = {value!r}")
            print(f"  second factor of the determinant condition vanishes: det lhs = {cert.det_lhs_symbolic}")
            print(f"  required 0 > U1_12**2 >= {cert.det_rhs_lower_bound}: {cert.conclusion}")
    grid = default_scan_grid(args.n, datum, law)
    if args.random:
        grid = ScanGrid(grid.ranges, n_random=args.random, cap=grid.cap)
    try:
        summary = n_region_scan(datum, law, args.n, grid, seed=args.seed, ctx=ctx, tols=cfg.tols())
    except GridTooLarge as exc:
        raise ConfigError([str(exc)]) from exc
    doc["scan"] = summary.to_dict()
    write_json(doc, out)
    if not args.quiet:
        print(f"[{summary.label}] {args.n + 2}-region symmetric scan ({summary.ansatz}):")
        print(f"  {summary.cells} cells, verdict: {summary.verdict}; best min slack {summary.best_min_slack:.3e}")
        print(f"wrote {out}")
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "infeasible": cmd_infeasible,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (SchemaError, StructureError) as exc:
        print(f"error: candidate does not match the schema: {exc}", file=sys.stderr)
    except (PressureDomainError, QuadratureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
