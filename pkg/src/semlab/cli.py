#!/usr/bin/env python3
"""
semlab CLI entry point.

Batch front end for the experiments. Each subcommand writes one report; the
exit status is 0 when the predicted outcome was observed, 1 when it was not,
and 2 on resource or usage errors.
"""

import argparse
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from semlab.adversary import (
    EMULATOR_NAMES,
    ReplayMismatchError,
    make_emulator,
    query_complexity_experiment,
    refutation_trials,
    run_adversary,
)
from semlab.config import ExperimentConfig, LanguageSpec, default_budget
from semlab.emulation import emulate_eq, emulate_rel
from semlab.languages import LANGUAGE_NAMES, LeqVariant
from semlab.logging_config import get_logger, setup_logging
from semlab.modal import diamond_counterexample, sweep_diamond, verify_box_theorem
from semlab.models.reports import AdversaryBatch, DiamondExample, EmulationPayload, Outcome, Report
from semlab.oracle import EQUALITY, AssertionOracle, BudgetExhaustedError, get_relation
from semlab.semantics import ResourceLimitError, check_strong_transparency

EXIT_EXPECTED = 0
EXIT_UNEXPECTED = 1
EXIT_ERROR = 2

PRECHECK_BOUND = 1

logger = get_logger(__name__)


def _report(config: ExperimentConfig, outcome: Outcome, payload=None, **extra) -> Report:
    return Report(command=config.command, config=config.echo(), outcome=outcome, payload=payload, **extra)


def _exit_code(outcome: Outcome) -> int:
    return {Outcome.EXPECTED: EXIT_EXPECTED, Outcome.UNEXPECTED: EXIT_UNEXPECTED}.get(outcome, EXIT_ERROR)


def cmd_emulate(config: ExperimentConfig) -> Report:
    """Canonical index (or relation table) of one expression, with a transparency precheck."""
    language = config.language.build()
    relation = get_relation(config.relation) if config.relation else EQUALITY
    expression = config.expression

    warnings = []
    if not language.transparent_by_construction:
        precheck = check_strong_transparency(language, PRECHECK_BOUND, PRECHECK_BOUND, budget=config.budget)
        if not precheck.passed:
            warnings.append(
                f"{language.name} failed the transparency precheck ({len(precheck.witnesses)} witnesses); "
                "emulation results are not meaningful"
            )
            logger.warning(warnings[-1])

    oracle = AssertionOracle(language, relation, budget=config.budget)
    canonical = table = None
    try:
        if relation.name == EQUALITY.name:
            canonical = emulate_eq(expression, oracle)
        else:
            table = emulate_rel(expression, oracle)
    except ResourceLimitError as e:
        logger.error(f"Emulation stopped: {e}")
        payload = EmulationPayload(
            language=language.name,
            expression=expression,
            relation=relation.name,
            queries=oracle.query_count,
            transcript=oracle.read_transcript(),
            partial=True,
        )
        return _report(config, Outcome.ERROR, payload, warnings=warnings, error=str(e))

    payload = EmulationPayload(
        language=language.name,
        expression=expression,
        relation=relation.name,
        canonical=canonical,
        table=table,
        queries=oracle.query_count,
        transcript=oracle.read_transcript(),
    )
    return _report(config, Outcome.EXPECTED, payload, warnings=warnings)


def cmd_transparency(config: ExperimentConfig) -> Report:
    """Bounded strong-transparency check; transparent languages should pass, LEQ languages should not."""
    language = config.language.build()
    report = check_strong_transparency(language, config.expr_len, config.ctx_len, budget=config.budget)

    if language.transparent_by_construction:
        expected = report.passed
    else:
        expected = LeqVariant.LEQ_CALL.value in report.witness_expressions()
    return _report(config, Outcome.EXPECTED if expected else Outcome.UNEXPECTED, report)


def cmd_adversary(config: ExperimentConfig) -> Report:
    """Refute an emulator on L_inf versus L_m'."""
    if config.emulator == "random" and config.trials > 1:
        reports = refutation_trials(config.trials, seed=config.seed, budget=config.budget)
        batch = AdversaryBatch(
            trials=len(reports),
            all_refuted_once=all(report.refuted_count == 1 for report in reports),
            reports=tuple(reports),
        )
        return _report(config, Outcome.EXPECTED if batch.all_refuted_once else Outcome.UNEXPECTED, batch)

    emulator = make_emulator(config.emulator, n_max=config.n_max, seed=config.seed, bit=config.bit)
    report = run_adversary(emulator, budget=config.budget)
    expected = report.replay_identical and report.refuted_count == 1
    return _report(config, Outcome.EXPECTED if expected else Outcome.UNEXPECTED, report)


def cmd_modal(config: ExperimentConfig) -> Report:
    """The BOX sweep should find no counterexample; the DIAMOND sweep and example should."""
    if config.modal_command == "diamond-example":
        left, right, check = diamond_counterexample()
        outcome = Outcome.EXPECTED if check.reproduces_ambiguity else Outcome.UNEXPECTED
        return _report(config, outcome, DiamondExample(left=left, right=right, check=check))

    bounds = (config.worlds, config.exprs, config.ctxs)
    if config.modal_command == "verify-box":
        report = verify_box_theorem(*bounds, include_null=config.include_null, budget=config.budget)
        expected = report.counterexample_count == 0
    else:
        report = sweep_diamond(*bounds, include_null=config.include_null, budget=config.budget)
        expected = report.counterexample_count > 0
    return _report(config, Outcome.EXPECTED if expected else Outcome.UNEXPECTED, report)


def cmd_complexity(config: ExperimentConfig) -> Report:
    """Binary search against a linear scan for each N."""
    table = query_complexity_experiment(config.ns, samples=config.samples, seed=config.seed, ms=config.m_values)
    return _report(config, Outcome.EXPECTED if table.within_bounds else Outcome.UNEXPECTED, table)


COMMANDS: Dict[str, Callable[[ExperimentConfig], Report]] = {
    "emulate": cmd_emulate,
    "transparency": cmd_transparency,
    "adversary": cmd_adversary,
    "modal": cmd_modal,
    "complexity": cmd_complexity,
}


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_language_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--language", choices=LANGUAGE_NAMES, default="arith", help="Language (default: arith)")
    parser.add_argument("--m", help="Bound for leq: a decimal natural or 'inf'")
    parser.add_argument("--set", dest="members", help="Members for leq-in, comma-separated")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="Write the report here instead of stdout")
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--budget", type=int, help="Query/node budget (default: $SEMLAB_BUDGET or 50000000)")
    common.add_argument("--timing", action="store_true", help="Add elapsed milliseconds to the report")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")
    common.add_argument("--log-file", help="Also log to this file")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semlab", description="Assertion-query emulation experiments")
    common = _common_options()
    commands = parser.add_subparsers(dest="command", required=True)

    emulate = commands.add_parser("emulate", parents=[common], help="Emulate one expression from assertion queries")
    _add_language_arguments(emulate)
    emulate.add_argument("--expr", dest="expression", required=True, help="Expression to emulate")
    emulate.add_argument("--rel", dest="relation", help="Relation name (eq, leq, contrary); builds a relation table")

    transparency = commands.add_parser("transparency", parents=[common], help="Bounded strong-transparency check")
    _add_language_arguments(transparency)
    transparency.add_argument("--expr-len", type=int, default=2, help="Maximum expression length (default: 2)")
    transparency.add_argument("--ctx-len", type=int, default=2, help="Maximum |left|+|right| (default: 2)")

    adversary = commands.add_parser("adversary", parents=[common], help="Refute an emulator on the LEQ family")
    adversary.add_argument("--emulator", choices=EMULATOR_NAMES, default="naive")
    adversary.add_argument("--N", dest="n_max", type=int, default=100, help="Search range for binary-search")
    adversary.add_argument("--seed", type=int, default=0)
    adversary.add_argument("--trials", type=int, default=1, help="Number of seeded random emulators")
    adversary.add_argument("--bit", type=int, choices=(0, 1), default=0, help="Answer of the constant emulator")

    modal = commands.add_parser("modal", parents=[common], help="Possible-worlds experiments")
    modal.add_argument("modal_command", choices=("verify-box", "diamond-example", "sweep-diamond"))
    modal.add_argument("--worlds", type=int, default=3)
    modal.add_argument("--exprs", type=int, default=2)
    modal.add_argument("--ctxs", type=int, default=2)
    modal.add_argument("--no-null", dest="include_null", action="store_false", help="Skip the pass with None cells")

    complexity = commands.add_parser("complexity", parents=[common], help="Binary search vs linear scan query counts")
    complexity.add_argument("--N", dest="ns", type=_int_list, required=True, help="Comma-separated Ns")
    complexity.add_argument("--m-values", type=_int_list, help="Explicit bounds m instead of samples")
    complexity.add_argument("--samples", type=int, default=3)
    complexity.add_argument("--seed", type=int, default=0)

    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = {key: value for key, value in vars(args).items() if value is not None}
    if "language" in values:
        values["language"] = LanguageSpec(name=args.language, m=args.m, members=args.members)
    values["budget"] = args.budget if args.budget is not None else default_budget()
    for key in ("output", "timing", "debug", "log_file", "m", "members"):
        values.pop(key, None)
    return ExperimentConfig(**values)


def render(report: Report, output_format: str) -> str:
    if output_format == "text":
        return report.to_text()
    if output_format == "csv" and report.payload is not None:
        return report.payload.to_csv()
    return report.to_json()


def run(args: argparse.Namespace, parser: argparse.ArgumentParser) -> Report:
    """Run the parsed command. Usage errors go through ``parser.error`` (exit 2)."""
    if args.output_format == "csv" and args.command != "complexity":
        parser.error("--format csv is only available for the complexity command")

    try:
        config = config_from_args(args)
    except ValueError as e:
        parser.error(str(e))

    started = time.perf_counter()
    try:
        report = COMMANDS[config.command](config)
    except (ValueError, KeyError) as e:
        parser.error(str(e))
    except ReplayMismatchError as e:
        logger.error(f"Replay mismatch: {e}")
        report = _report(config, Outcome.UNEXPECTED, error=str(e))
    except BudgetExhaustedError as e:
        logger.error(f"Budget exhausted: {e}")
        report = _report(config, Outcome.ERROR, e.transcript, error=str(e))
    except ResourceLimitError as e:
        logger.error(f"Resource limit: {e}")
        report = _report(config, Outcome.ERROR, error=str(e))

    if args.timing:
        elapsed = int((time.perf_counter() - started) * 1000)
        report = report.model_copy(update={"timing": {"elapsed_ms": elapsed}})
    return report


def main(argv: Optional[List[str]] = None) -> None:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Setup logging early
    setup_logging(level="DEBUG" if args.debug else "WARNING", log_file=args.log_file)
    logger.info(f"semlab starting - Args: {vars(args)}")

    report = run(args, parser)
    output_format = args.output_format if report.payload is not None else "json"
    rendered = render(report, output_format)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(rendered)

    if report.error:
        print(f"Error: {report.error}", file=sys.stderr)
    sys.exit(_exit_code(report.outcome))


if __name__ == "__main__":
    main()
