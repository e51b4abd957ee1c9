"""Command-line front end.

Every subcommand reads files in the documented formats, calls one library
operation and prints a deterministic report on stdout. Log records go to
stderr. Exit codes: 0 success or True, 1 definite False or a counterexample,
2 usage and input errors, 3 internal errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import pandas as pd

from .config.config import CERTIFY_CONFIG, LOG_LEVEL, OUTPUT_CONFIG, SEARCH_CONFIG
from .equiv import EquivScope, pebble_equivalent
from .evaluate import Verdict, eval_bounded, eval_lasso
from .minsky import MinskyMachine, format_machine, parse_machine, run, run_table
from .model import format_model, parse_model
from .parser import format_formula_file, parse_formula_file, print_formula
from .satsearch import SearchScope, search
from .syntax import Alphabet, Not, free_variables, size, well_formed
from .translate import (
    TranslationAlphabet,
    acceptance_horizon,
    canonical_model,
    certify,
    chi_zero_parts,
    instruction_rules,
    translate_machine,
)
from .utils.error_handler import ValidationError, handle_error
from .utils.logging_utils import configure_logging, log_command_execution
from .utils.report_formatter import format_csv, format_report


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(
            f"cannot read '{path}': {e.strerror}", {"path": path}
        ) from e


def _write(path: str, content: str) -> None:
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as e:
        raise ValidationError(
            f"cannot write '{path}': {e.strerror}", {"path": path}
        ) from e


def _assignment(pairs: list[str]) -> dict[str, str]:
    env = {}
    for pair in pairs:
        name, eq, element = pair.partition("=")
        if not eq or not name.strip() or not element.strip():
            raise ValidationError(
                f"assignment '{pair}' must be written var=element", {"assign": pair}
            )
        env[name.strip()] = element.strip()
    return env


def _translation_file(m: MinskyMachine) -> str:
    f = translate_machine(m)
    declared = TranslationAlphabet.for_machine(m).as_alphabet()
    return format_formula_file(declared.merge(Alphabet.infer(f)), f)


def _verdict_line(verdict: Verdict, mode: str, position: int) -> str:
    return f"{verdict}  [mode={mode} position={position}]"


@log_command_execution
def cmd_parse(args: argparse.Namespace) -> tuple[int, str]:
    """Print the formula with its size, free variables and diagnostics.

    Exits 2 when the formula is not well formed against its alphabet.
    """
    alphabet, f = parse_formula_file(_read(args.formula))
    diagnostics = well_formed(f, alphabet)
    body = {
        "formula": print_formula(f),
        "size": size(f),
        "free_variables": sorted(free_variables(f)),
        "sentence": not free_variables(f),
        "constants": sorted(alphabet.constants),
        "predicates": [
            f"{name}/{n}" for name, n in sorted(alphabet.predicates.items())
        ],
        "diagnostics": [str(d) for d in diagnostics],
    }
    return (2 if diagnostics else 0), format_report(body, args.format)


@log_command_execution
def cmd_eval(args: argparse.Namespace) -> tuple[int, str]:
    """Evaluate a formula on a model; lasso mode for lassos, bounded otherwise."""
    M = parse_model(_read(args.model))
    _, f = parse_formula_file(_read(args.formula))
    env = _assignment(args.assign)
    mode = args.mode or ("lasso" if M.is_lasso else "bounded")
    if mode == "lasso":
        verdict = eval_lasso(M, f, env, args.at)
    else:
        verdict = eval_bounded(M, f, env, args.at)
    line = _verdict_line(verdict, mode, args.at)
    if args.format == "json":
        body = {"verdict": verdict, "mode": mode, "position": args.at}
        report = format_report(body, "json")
    else:
        report = line + "\n"
    return (1 if verdict is Verdict.FALSE else 0), report


@log_command_execution
def cmd_equiv(args: argparse.Namespace) -> tuple[int, str]:
    """Compare two models and report the first difference, if any."""
    M1, M2 = parse_model(_read(args.left)), parse_model(_read(args.right))
    result = pebble_equivalent(M1, M2, EquivScope(args.horizon))
    body = {
        "equivalent": result.equivalent,
        "bounded": result.bounded,
        "moments_checked": result.moments,
    }
    if result.witness is not None:
        body["witness_moment"] = result.witness.moment
        body["witness_symbol"] = result.witness.symbol
        body["witness_tuple"] = result.witness.tuple
    return (0 if result else 1), format_report(body, args.format)


@log_command_execution
def cmd_minsky_run(args: argparse.Namespace) -> tuple[int, str]:
    """Run a machine for at most ``--steps`` steps."""
    m = parse_machine(_read(args.machine))
    r = run(m, args.steps)
    body = {
        "machine": format_machine(m),
        "halted": r.halted,
        "states": len(r.states),
        "run": run_table(m, r),
    }
    return 0, format_report(body, args.format)


@log_command_execution
def cmd_translate(args: argparse.Namespace) -> tuple[int, str]:
    """Print the translation as a formula file, or its named rules."""
    m = parse_machine(_read(args.machine))
    alpha = TranslationAlphabet.for_machine(m)
    if not args.rules:
        return 0, _translation_file(m)
    body = {name: print_formula(f) for name, f, _ in chi_zero_parts(alpha)}
    for label in range(1, m.L):
        for name, rule in instruction_rules(label, m.instruction(label), alpha):
            body[name] = print_formula(rule)
    return 0, format_report(body, args.format)


@log_command_execution
def cmd_certify(args: argparse.Namespace) -> tuple[int, str]:
    """Certify each machine's translation on its canonical model.

    The ``--emit-*`` options write the model, the formula file and the rule
    matrix CSV. Exits 1 when any machine's report is inconsistent.
    """
    if len(args.machines) > 1 and (args.emit_model or args.emit_formula):
        raise ValidationError(
            "--emit-model and --emit-formula take a single machine file",
            {"machines": len(args.machines)},
        )
    reports, matrices, exit_code = [], {}, 0
    for path in args.machines:
        m = parse_machine(_read(path))
        horizon = args.horizon if args.horizon is not None else acceptance_horizon(m)
        report = certify(m, horizon, name=Path(path).stem)
        if not report.consistent:
            exit_code = 1
        body = report.summary()
        violations = report.violations()
        if violations:
            body["violations"] = [f"{rule}@{n}" for rule, n in violations]
        reports.append(format_report(body, args.format))
        matrices[report.machine] = report.matrix()
        if args.emit_model:
            _write(args.emit_model, format_model(canonical_model(m, horizon)))
        if args.emit_formula:
            _write(args.emit_formula, _translation_file(m))
    if args.emit_matrix:
        frame = pd.concat(matrices, names=["machine", "rule"])
        _write(args.emit_matrix, format_csv(frame))
    return exit_code, "\n".join(reports)


@log_command_execution
def cmd_search(args: argparse.Namespace) -> tuple[int, str]:
    """Search a small scope for a model, or a counterexample with ``--valid``."""
    _, f = parse_formula_file(_read(args.formula))
    scope = SearchScope(
        max_domain_size=args.domain,
        max_prefix=args.prefix,
        max_period=args.period,
        pruned=not args.no_prune,
        workers=args.workers,
    )
    target = Not(f) if args.valid else f
    result = search(target, scope)
    body = {
        "query": "valid" if args.valid else "sat",
        "formula": print_formula(f),
        "candidates": result.candidates,
        "found": result.found,
    }
    if result.refuted_by is not None:
        body["refuted_by"] = print_formula(result.refuted_by)
    if result.model is not None:
        key = "counterexample" if args.valid else "model"
        body[key] = format_model(result.model)
    elif args.valid:
        body["note"] = "no counterexample in scope (evidence, not a proof)"
    else:
        body["note"] = "no model in scope (not a proof of unsatisfiability)"
    # Exit 1 on a counterexample to validity or on an empty search for a model.
    exit_code = 1 if result.found == args.valid else 0
    return exit_code, format_report(body, args.format)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per handler."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=OUTPUT_CONFIG["formats"],
        default=OUTPUT_CONFIG["default_format"],
        help="report format",
    )
    common.add_argument("--log-level", default=LOG_LEVEL, help="stderr log level")

    parser = argparse.ArgumentParser(
        prog="pebble",
        description="Temporal logic with flexible constants and predicate abstraction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and print a formula")
    p.add_argument("formula", help="formula file")
    p.set_defaults(handler=cmd_parse)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula on a model")
    p.add_argument("model", help="model file")
    p.add_argument("formula", help="formula file")
    p.add_argument("--at", type=int, default=0, help="moment to evaluate at")
    p.add_argument(
        "--mode",
        choices=["lasso", "bounded"],
        help="defaults to lasso for looping models, bounded otherwise",
    )
    p.add_argument(
        "--assign",
        action="append",
        default=[],
        metavar="VAR=ELEMENT",
        help="value of a free variable (repeatable)",
    )
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("equiv", parents=[common], help="decide pebble equivalence")
    p.add_argument("left", help="model file")
    p.add_argument("right", help="model file")
    p.add_argument(
        "--horizon",
        type=int,
        default=CERTIFY_CONFIG["default_horizon"],
        help="moments to compare when a model has no loop",
    )
    p.set_defaults(handler=cmd_equiv)

    p = sub.add_parser("minsky-run", parents=[common], help="run a Minsky machine")
    p.add_argument("machine", help="machine file")
    p.add_argument(
        "--steps",
        type=int,
        default=CERTIFY_CONFIG["non_halting_horizon"],
        help="maximum number of states",
    )
    p.set_defaults(handler=cmd_minsky_run)

    p = sub.add_parser("translate", parents=[common], help="translate a machine")
    p.add_argument("machine", help="machine file")
    p.add_argument("--rules", action="store_true", help="list the named rule bodies")
    p.set_defaults(handler=cmd_translate)

    p = sub.add_parser(
        "certify", parents=[common], help="check a canonical model against its rules"
    )
    p.add_argument("machines", nargs="+", help="machine file(s)")
    p.add_argument("--horizon", type=int, help="defaults to twice the halting time")
    p.add_argument("--emit-model", help="write the canonical model to this file")
    p.add_argument("--emit-formula", help="write the translation to this file")
    p.add_argument("--emit-matrix", help="write the rule matrices as CSV")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("search", parents=[common], help="small-scope model search")
    query = p.add_mutually_exclusive_group(required=True)
    query.add_argument("--sat", action="store_true", help="look for a model")
    query.add_argument("--valid", action="store_true", help="look for a counterexample")
    p.add_argument("formula", help="formula file")
    p.add_argument("--domain", type=int, default=SEARCH_CONFIG["default_domain"])
    p.add_argument("--prefix", type=int, default=SEARCH_CONFIG["default_prefix"])
    p.add_argument("--period", type=int, default=SEARCH_CONFIG["default_period"])
    p.add_argument("--workers", type=int, default=SEARCH_CONFIG["workers"])
    p.add_argument(
        "--no-prune", action="store_true", help="disable isomorphism pruning"
    )
    p.set_defaults(handler=cmd_search)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand.

    Args:
        argv: Arguments without the program name; ``sys.argv`` when None

    Returns:
        The exit code

    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        exit_code, report = args.handler(args)
    except Exception as e:
        exit_code, report = handle_error(e, {"command": args.command})
        print(report, file=sys.stderr)
        return exit_code
    sys.stdout.write(report if report.endswith("\n") else report + "\n")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
