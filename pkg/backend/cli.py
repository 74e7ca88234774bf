"""Command-line front end.

Exit codes: 0 when the verdict is positive, 1 when it is negative, 2 for usage
or input errors (the message names the first offending field).
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import TypeVar

from amalgamation import ClaimReport, amalgamate, make_request, verify_amalgamation
from config import config
from core_conditions import Condition, check_extension, validate_condition
from errors import (
    DocumentError,
    MalformedConditionError,
    NoAmalgamablePairError,
    PosetError,
    SimulationBudgetExceeded,
)
from finite_topology import find_irreducible_base, is_t0
from generic_sim import (
    SimulationConfig,
    check_p2_global,
    check_p3_global,
    kill_irreducibility_attempt,
    run_simulation,
)
from models import (
    ConditionDocument,
    DecompositionDocument,
    ExtensionDocument,
    FuzzReportDocument,
    LimitDocument,
    ReportDocument,
    SpaceDocument,
    TraceDocument,
    TwinsDocument,
    VerdictDocument,
)
from pydantic import BaseModel, ValidationError
from twins import MarkedCondition, is_twin_pair
from verifier import MUTATIONS, PROPERTIES, REQUIRED_CHECKS, GenParams, run_fuzz

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2

DocumentT = TypeVar("DocumentT", bound=BaseModel)


class InputError(Exception):
    """A command-line input could not be read or decoded"""


def _load(path: str, model: type[DocumentT]) -> DocumentT:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"{path}: cannot read file: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise InputError(f"{path}: field {location}: {first['msg']}") from e


def _load_condition(path: str) -> Condition:
    document = _load(path, ConditionDocument)
    try:
        return document.to_condition()
    except (DocumentError, MalformedConditionError) as e:
        raise InputError(f"{path}: field {e.field}: {e}") from e


def _write(path: str, document: BaseModel) -> None:
    Path(path).write_text(_dumps(document) + "\n", encoding="utf-8")


def _dumps(document: BaseModel) -> str:
    return json.dumps(document.model_dump(mode="json"), indent=2)


def _emit(args: argparse.Namespace, document: BaseModel, text: str) -> None:
    print(_dumps(document) if args.format == "json" else text)


def cmd_validate(args: argparse.Namespace) -> int:
    cond = _load_condition(args.file)
    verdict = validate_condition(cond, strict=args.strict)
    lines = ["ok"] if verdict.ok else [f"violation {v}" for v in verdict.violations]
    _emit(args, VerdictDocument.from_verdict(verdict), "\n".join(lines))
    return EXIT_OK if verdict.ok else EXIT_NEGATIVE


def cmd_leq(args: argparse.Namespace) -> int:
    q, p = _load_condition(args.file_q), _load_condition(args.file_p)
    verdict = check_extension(q, p, strict=args.strict)
    if verdict.holds:
        text = "holds"
    else:
        text = f"fails: clause ({verdict.clause}) witness {verdict.witness}"
    document = ExtensionDocument(
        holds=verdict.holds, clause=verdict.clause, witness=verdict.witness
    )
    _emit(args, document, text)
    return EXIT_OK if verdict.holds else EXIT_NEGATIVE


def cmd_twins(args: argparse.Namespace) -> int:
    p0, p1 = _load_condition(args.file0), _load_condition(args.file1)
    cert = is_twin_pair(p0, p1)
    if cert is None:
        _emit(args, TwinsDocument(twins=False), "not twins")
        return EXIT_NEGATIVE
    document = TwinsDocument(
        twins=True,
        sigma=cert.sigma,
        root=sorted(cert.root),
        smash=cert.smash,
        exchange=cert.exchange,
    )
    _emit(args, document, f"twins: sigma={cert.sigma} root={sorted(cert.root)}")
    return EXIT_OK


def _report_text(report: ClaimReport) -> str:
    lines = []
    for name, passed in report.results.items():
        line = f"{name}: {'pass' if passed else 'FAIL'}"
        if not passed:
            line += f" witness {report.witnesses.get(name)}"
        lines.append(line)
    return "\n".join(lines)


def cmd_amalgamate(args: argparse.Namespace) -> int:
    p0, p1 = _load_condition(args.file0), _load_condition(args.file1)
    request = make_request(p0, p1, args.xi0, args.k, args.m)
    trace = amalgamate(request)
    report = verify_amalgamation(trace, request, strict=args.strict)
    if args.trace:
        _write(args.trace, TraceDocument.from_trace(trace))
    _emit(args, ReportDocument.from_report(report), _report_text(report))
    failed = [name for name in report.failed if name in REQUIRED_CHECKS]
    return EXIT_NEGATIVE if failed else EXIT_OK


def cmd_kill(args: argparse.Namespace) -> int:
    if len(args.marks) != len(args.files):
        raise InputError(
            f"--marks: expected {len(args.files)} marks, got {len(args.marks)}"
        )
    family = []
    for path, mark in zip(args.files, args.marks, strict=True):
        try:
            family.append(MarkedCondition(_load_condition(path), mark))
        except MalformedConditionError as e:
            raise InputError(f"{path}: field {e.field}: {e}") from e
    try:
        trace = kill_irreducibility_attempt(family, args.k, args.m)
    except NoAmalgamablePairError as e:
        print(str(e))
        return EXIT_NEGATIVE
    if args.trace:
        _write(args.trace, TraceDocument.from_trace(trace))
    document = TraceDocument.from_trace(trace)
    _emit(args, document, f"killer move done: |A|={len(document.p.A)} n={trace.n}")
    return EXIT_OK


def cmd_fuzz(args: argparse.Namespace) -> int:
    params = GenParams(
        max_points=args.max_a,
        max_depth=args.max_n,
        universe=args.universe,
        seed=args.seed,
        trials=args.trials,
    )
    report = run_fuzz(params, args.property, mutation=args.mutation, strict=args.strict)
    lines = [
        f"{report.trials} trials, {len(report.properties)} properties, "
        f"{len(report.failures)} failures in {report.wall_time:.2f}s"
    ]
    for failure in report.failures:
        lines.append(
            f"trial {failure.trial} {failure.property_name}: {failure.shrunk_witness}"
        )
    _emit(args, FuzzReportDocument.from_report(report), "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_simulate(args: argparse.Namespace) -> int:
    sim_config = SimulationConfig(
        universe=args.points,
        depth=args.depth,
        seed=args.seed,
        budget=args.budget,
        grow_rate=args.grow_rate,
        base_repair=args.base_repair,
        amalgamations=args.amalgamations,
    )
    try:
        struct = run_simulation(sim_config)
    except SimulationBudgetExceeded as e:
        logger.warning("[cli] %s", e)
        if args.out and e.partial is not None:
            _write(args.out, LimitDocument.from_limit(e.partial))
        print(f"budget exhausted: {e}")
        return EXIT_NEGATIVE

    checks = {
        "P2": check_p2_global(struct).ok,
        "P3": check_p3_global(struct).ok,
        "restriction": True,  # limit_structure rejects any mismatch
    }
    document = LimitDocument.from_limit(struct)
    if args.out:
        _write(args.out, document)
    text = (
        f"{len(struct.points)} points, depth {struct.depth}, "
        f"{len(struct.chain) - 1} steps; "
        + ", ".join(f"{name}={'ok' if ok else 'FAIL'}" for name, ok in checks.items())
    )
    if struct.unmet:
        text += f"; {len(struct.unmet)} unmet base obligations"
    _emit(args, document, text)
    return EXIT_OK if all(checks.values()) else EXIT_NEGATIVE


def cmd_irreducible(args: argparse.Namespace) -> int:
    space = _load(args.file_space, SpaceDocument).to_space()
    result = find_irreducible_base(space)
    document = DecompositionDocument.from_result(result, is_t0(space))
    if result is None:
        text = "no irreducible base"
    else:
        base, decomposition = result
        owners = {
            x: [sorted(v) for v in fam] for x, fam in decomposition.owners.items()
        }
        text = f"irreducible base {[sorted(v) for v in base]} owners {owners}"
    _emit(args, document, text)
    return EXIT_OK if result is not None else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")

    parser = argparse.ArgumentParser(
        prog="poset-verify",
        description="Verify finite forcing conditions and their amalgamations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check membership in P")
    p.add_argument("file")
    p.add_argument("--strict", action="store_true", help="read ⊂ as proper inclusion")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("leq", parents=[common], help="decide q ≤ p")
    p.add_argument("file_q")
    p.add_argument("file_p")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(handler=cmd_leq)

    p = sub.add_parser("twins", parents=[common], help="twin certificate")
    p.add_argument("file0")
    p.add_argument("file1")
    p.set_defaults(handler=cmd_twins)

    p = sub.add_parser(
        "amalgamate", parents=[common], help="amalgamate twins and check every claim"
    )
    p.add_argument("file0")
    p.add_argument("file1")
    p.add_argument("--xi0", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trace", help="write the full trace to this file")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(handler=cmd_amalgamate)

    p = sub.add_parser("kill", parents=[common], help="killer move on a marked family")
    p.add_argument("files", nargs="+")
    p.add_argument("--marks", type=int, nargs="+", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trace")
    p.set_defaults(handler=cmd_kill)

    p = sub.add_parser("fuzz", parents=[common], help="randomized property campaign")
    p.add_argument("--trials", type=int, default=config.FUZZ_TRIALS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-a", type=int, default=config.FUZZ_MAX_POINTS)
    p.add_argument("--max-n", type=int, default=config.FUZZ_MAX_DEPTH)
    p.add_argument("--universe", type=int, default=config.FUZZ_UNIVERSE)
    p.add_argument("--property", action="append", choices=sorted(PROPERTIES))
    p.add_argument("--mutation", choices=sorted(MUTATIONS))
    p.add_argument("--strict", action="store_true")
    p.set_defaults(handler=cmd_fuzz)

    p = sub.add_parser("simulate", parents=[common], help="chain and limit structure")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--grow-rate", type=float, default=0.0)
    p.add_argument("--base-repair", action="store_true")
    p.add_argument("--amalgamations", type=int, default=0)
    p.add_argument("--budget", type=int, default=config.SIM_BUDGET)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser(
        "irreducible", parents=[common], help="search an irreducible base"
    )
    p.add_argument("file_space")
    p.set_defaults(handler=cmd_irreducible)

    return parser


def dispatch(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=config.LOG_LEVEL,
        format="%(levelname)s %(name)s %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT

    try:
        code: int = args.handler(args)
        return code
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    except PosetError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
    return EXIT_INPUT
