# lpcut/app/cli.py
# Command line surface: check, solve, sweep, oracle, gen, serve.

import argparse
import asyncio
import json
import sys
import time
from typing import List, Optional, Sequence

from app.models.pydantic_models import (
    CertificateStatus,
    EnergyFunction,
    GridShape,
    OracleSummary,
    ProblemFile,
    Report,
    Solution,
    SolutionSummary,
    SolvePolicy,
    TermPolicy,
)
from app.energy.energy_model import check_power
from app.energy.reduction import solve
from app.energy.submodularity import certify_energy
from app.oracle.generators import grid_denoise_instance, random_instance
from app.oracle.oracle import brute_force_min, brute_force_minimax
from app.shared_services.config import get_settings, parse_p_list
from app.shared_services.errors import EXIT_CERTIFICATION, EXIT_OK, EXIT_USAGE, DomainError, LpCutError
from app.shared_services.logger_setup import setup_logger
from app.shared_services.problem_file import from_energy, load_problem, to_energy, write_problem

logger = setup_logger()

MAX_LISTED_MINIMIZERS = 20


# ============================================================================
# COMMANDS
# ============================================================================

def render_raster(labeling: str, grid: GridShape) -> List[str]:
    """Rows of the labeling, '#' for 1 and '.' for 0."""
    rows = []
    for r in range(grid.height):
        row = labeling[r * grid.width:(r + 1) * grid.width]
        rows.append(row.replace("1", "#").replace("0", "."))
    return rows


def summarize(solution: Solution, wall_time_s: float, grid: Optional[GridShape]) -> SolutionSummary:
    labeling = solution.labeling.as_string()
    return SolutionSummary(
        p=solution.p,
        labeling=labeling,
        raster=render_raster(labeling, grid) if grid is not None else None,
        powered_energy=solution.powered_energy,
        lp_value=solution.lp_value,
        max_term=solution.max_term,
        flow_value=solution.flow_value,
        offset=solution.offset,
        wall_time_s=wall_time_s,
    )


def _timed_solve(e: EnergyFunction, p: float, policy: SolvePolicy, grid: Optional[GridShape]) -> SolutionSummary:
    started = time.perf_counter()
    solution = solve(e, p, policy)
    return summarize(solution, time.perf_counter() - started, grid)


def _base_report(command: str, path: Optional[str], e: EnergyFunction) -> Report:
    return Report(command=command, problem=path, vertex_count=e.vertex_count, edge_count=e.edge_count)


def check_report(problem: ProblemFile, path: Optional[str] = None,
                 p_grid: Optional[Sequence[float]] = None) -> Report:
    """Certificate for every edge; exit code 0 only when all are certified for all p."""
    e = to_energy(problem)
    grid = list(p_grid) if p_grid is not None else get_settings().violation_grid
    certificates = certify_energy(e, grid)
    report = _base_report("check", path, e)
    report.certificate_counts = {status: 0 for status in CertificateStatus}
    for entry in certificates:
        report.certificate_counts[entry.certificate.status] += 1
    report.flagged_edges = [c for c in certificates if c.certificate.status != CertificateStatus.CERTIFIED_ALL_P]
    report.exit_code = EXIT_OK if not report.flagged_edges else EXIT_CERTIFICATION
    logger.info(f"check {path or '<problem>'}: " + ", ".join(f"{k.value}={v}" for k, v in report.certificate_counts.items()))
    return report


def solve_report(problem: ProblemFile, p: float, policy: SolvePolicy = SolvePolicy.REQUIRE_CERTIFIED,
                 path: Optional[str] = None) -> Report:
    e = to_energy(problem)
    p = check_power(p)
    report = _base_report("solve", path, e)
    report.solutions = [_timed_solve(e, p, SolvePolicy(policy), problem.grid)]
    return report


async def _solve_all(e: EnergyFunction, ps: Sequence[float], policy: SolvePolicy,
                     grid: Optional[GridShape]) -> List[SolutionSummary]:
    tasks = [asyncio.to_thread(_timed_solve, e, p, policy, grid) for p in ps]
    return list(await asyncio.gather(*tasks))


def max_term_non_increasing(summaries: Sequence[SolutionSummary], rel_tol: float = 1e-9) -> bool:
    pairs = zip(summaries, summaries[1:])
    return all(later.max_term <= earlier.max_term * (1 + rel_tol) for earlier, later in pairs)


def sweep_report(problem: ProblemFile, p_list: Optional[Sequence[float]] = None,
                 policy: SolvePolicy = SolvePolicy.REQUIRE_CERTIFIED, path: Optional[str] = None) -> Report:
    """Solve for several powers; the report is ordered by p."""
    e = to_energy(problem)
    ps = sorted({check_power(p) for p in (p_list if p_list is not None else get_settings().sweep_p)})
    summaries = asyncio.run(_solve_all(e, ps, SolvePolicy(policy), problem.grid))
    report = _base_report("sweep", path, e)
    report.solutions = sorted(summaries, key=lambda s: s.p)
    report.max_term_non_increasing = max_term_non_increasing(report.solutions)
    return report


def oracle_report(problem: ProblemFile, p: float = 1.0, path: Optional[str] = None) -> Report:
    """Exhaustive minimizers of the powered energy and of the largest term."""
    e = to_energy(problem)
    p = check_power(p)
    powered = brute_force_min(e, p)
    minimax = brute_force_minimax(e)
    report = _base_report("oracle", path, e)
    report.oracle = [
        OracleSummary(objective="powered", p=p, min_value=powered.min_value,
                      minimizers=[x.as_string() for x in powered.minimizers]),
        OracleSummary(objective="minimax", min_value=minimax.min_value,
                      minimizers=[x.as_string() for x in minimax.minimizers]),
    ]
    return report


def cmd_check(path: str, p_grid: Optional[Sequence[float]] = None) -> Report:
    return check_report(load_problem(path), path, p_grid)


def cmd_solve(path: str, p: float, policy: SolvePolicy = SolvePolicy.REQUIRE_CERTIFIED) -> Report:
    return solve_report(load_problem(path), p, policy, path)


def cmd_sweep(path: str, p_list: Optional[Sequence[float]] = None,
              policy: SolvePolicy = SolvePolicy.REQUIRE_CERTIFIED) -> Report:
    return sweep_report(load_problem(path), p_list, policy, path)


def cmd_oracle(path: str, p: float = 1.0) -> Report:
    return oracle_report(load_problem(path), p, path)


def cmd_gen(kind: str, out: str, seed: int = 0, *,
            width: int = 8, height: int = 8, noise_rate: float = 0.1,
            smoothness: float = 1.0, data_weight: float = 1.0,
            n: int = 8, edge_factor: float = 1.5,
            term_policy: TermPolicy = TermPolicy.CERTIFIED) -> Report:
    """Write a generated problem file."""
    if kind == "grid_denoise":
        instance = grid_denoise_instance(width, height, noise_rate, smoothness, data_weight, seed)
        problem: ProblemFile = from_energy(instance.energy, instance.grid)
    elif kind == "random":
        problem = from_energy(random_instance(n, edge_factor, term_policy, seed))
    else:
        raise DomainError(f"unknown generator kind {kind!r}")
    write_problem(out, problem)
    return Report(command="gen", vertex_count=problem.vertex_count, edge_count=len(problem.edges), output_file=out)


# ============================================================================
# RENDERING
# ============================================================================

def _fmt(value: float) -> str:
    return f"{value:.6g}"


def render_text(report: Report) -> str:
    lines = []
    if report.problem:
        lines.append(f"problem: {report.problem} ({report.vertex_count} vertices, {report.edge_count} edges)")
    if report.command == "check":
        for status, count in report.certificate_counts.items():
            lines.append(f"  {status.value:<24} {count}")
        if report.flagged_edges:
            lines.append("flagged edges:")
            lines.append(f"  {'edge':>5} {'i':>5} {'j':>5}  {'table (a, b, c, d)':<36} {'status':<24} witness p")
            for entry in report.flagged_edges:
                table = ", ".join(_fmt(v) for v in entry.table)
                witness = _fmt(entry.certificate.witness) if entry.certificate.witness is not None else "-"
                lines.append(f"  {entry.edge_index:>5} {entry.i:>5} {entry.j:>5}  ({table:<34}) "
                             f"{entry.certificate.status.value:<24} {witness}")
        else:
            lines.append("all pairwise terms are certified submodular for every p >= 1")
    if report.solutions:
        header = f"{'p':>8}  {'powered energy':>14}  {'l_p value':>12}  {'max term':>10}  {'flow':>12}  {'offset':>12}  {'time [s]':>9}  labeling"
        lines.append(header)
        for s in report.solutions:
            labeling = s.labeling if len(s.labeling) <= 64 else s.labeling[:61] + "..."
            lines.append(f"{_fmt(s.p):>8}  {_fmt(s.powered_energy):>14}  {_fmt(s.lp_value):>12}  {_fmt(s.max_term):>10}  "
                         f"{_fmt(s.flow_value):>12}  {_fmt(s.offset):>12}  {s.wall_time_s:>9.4f}  {labeling}")
        for s in report.solutions:
            if s.raster:
                lines.append(f"p = {_fmt(s.p)}:")
                lines.extend(f"  {row}" for row in s.raster)
        if report.max_term_non_increasing is not None:
            trend = "non-increasing" if report.max_term_non_increasing else "not monotone"
            lines.append(f"max term over p: {trend}")
    for summary in report.oracle:
        label = f"p = {_fmt(summary.p)}" if summary.p is not None else "largest term"
        lines.append(f"oracle ({summary.objective}, {label}): min {_fmt(summary.min_value)}, "
                     f"{len(summary.minimizers)} minimizer(s)")
        for x in summary.minimizers[:MAX_LISTED_MINIMIZERS]:
            lines.append(f"  {x}")
        if len(summary.minimizers) > MAX_LISTED_MINIMIZERS:
            lines.append(f"  ... {len(summary.minimizers) - MAX_LISTED_MINIMIZERS} more")
    if report.output_file:
        lines.append(f"wrote {report.output_file} ({report.vertex_count} vertices, {report.edge_count} edges)")
    return "\n".join(lines)


def render(report: Report, fmt: str) -> str:
    if fmt == "structured":
        return report.model_dump_json(indent=2)
    return render_text(report)


# ============================================================================
# ARGUMENT PARSING
# ============================================================================

def _single_p(raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise DomainError(f"--p must be a real number, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpcut", description="l_p-norm binary labeling via graph cuts")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_format(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--format", choices=["text", "structured"], default="text", help="Report format")
        return p

    check = with_format(sub.add_parser("check", help="Certify every pairwise term"))
    check.add_argument("file")
    check.add_argument("--p", default=None, help="Powers scanned for uncertified edges (comma list)")

    for name, help_text in (("solve", "Minimize the l_p objective for one p"),
                            ("sweep", "Minimize the l_p objective for several p")):
        command = with_format(sub.add_parser(name, help=help_text))
        command.add_argument("file")
        command.add_argument("--p", default="1" if name == "solve" else None,
                             help="Power (solve) or comma list of powers (sweep)")
        command.add_argument("--policy", choices=[p.value for p in SolvePolicy], default=SolvePolicy.REQUIRE_CERTIFIED.value)

    oracle = with_format(sub.add_parser("oracle", help="Exhaustive minimization (n <= 20)"))
    oracle.add_argument("file")
    oracle.add_argument("--p", default="1")

    gen = with_format(sub.add_parser("gen", help="Generate a problem file"))
    gen.add_argument("kind", choices=["grid_denoise", "random"])
    gen.add_argument("--out", required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--width", type=int, default=8)
    gen.add_argument("--height", type=int, default=8)
    gen.add_argument("--noise", type=float, default=0.1, help="Pixel flip probability")
    gen.add_argument("--smoothness", type=float, default=1.0)
    gen.add_argument("--data-weight", type=float, default=1.0)
    gen.add_argument("--n", type=int, default=8)
    gen.add_argument("--edge-factor", type=float, default=1.5)
    gen.add_argument("--term-policy", choices=[t.value for t in TermPolicy], default=TermPolicy.CERTIFIED.value)

    sub.add_parser("serve", help="Run the MCP tool server")
    return parser


def run(args: argparse.Namespace) -> Report:
    if args.command == "check":
        grid = sorted(parse_p_list(args.p, "--p")) if args.p else None
        return cmd_check(args.file, grid)
    if args.command == "solve":
        return cmd_solve(args.file, _single_p(args.p), SolvePolicy(args.policy))
    if args.command == "sweep":
        ps = parse_p_list(args.p, "--p") if args.p else None
        return cmd_sweep(args.file, ps, SolvePolicy(args.policy))
    if args.command == "oracle":
        return cmd_oracle(args.file, _single_p(args.p))
    return cmd_gen(args.kind, args.out, args.seed,
                   width=args.width, height=args.height, noise_rate=args.noise,
                   smoothness=args.smoothness, data_weight=args.data_weight,
                   n=args.n, edge_factor=args.edge_factor, term_policy=TermPolicy(args.term_policy))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        from app.mcp.solver_tools_mcp import run_server
        run_server()
        return EXIT_OK
    fmt = args.format
    try:
        report = run(args)
    except LpCutError as e:
        logger.error(f"{args.command} failed: {e}")
        if fmt == "structured":
            print(json.dumps({"command": args.command, "error": e.to_dict(), "exit_code": e.exit_code}, indent=2))
        else:
            label = "usage error" if e.exit_code == EXIT_USAGE else "error"
            print(f"lpcut {args.command}: {label}: {e}", file=sys.stderr)
        return e.exit_code
    print(render(report, fmt))
    return report.exit_code
