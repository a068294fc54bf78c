"""Command-line entry point ``tc-entangle``.

Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure
(including any failed verification check).
"""

import argparse
import sys
from pathlib import Path

from . import experiments, oracle
from .errors import ConfigError, DomainError, InvariantViolation, NumericalFailure, TCEntangleError
from .config import load_config

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which here means numerical failure
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="tc-entangle",
                     description="Entanglement dynamics of qubits driven by a single photon.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    run = sub.add_parser("run", help="run an experiment from a key=value config file")
    run.add_argument("config", type=Path)
    verify = sub.add_parser("verify", help="run the oracle cross-check battery")
    verify.add_argument("-v", "--verbose", action="store_true")
    verify.add_argument("--report-dir", type=Path, default=Path("."),
                        help="where verify_report.txt and verify_report.json go")
    verify.add_argument("--inject-unsquared-q44", action="store_true",
                        help="check the known-bad unsquared excited-partner q44 instead")
    sub.add_parser("list", help="print the experiment registry")
    return parser


def _run(args):
    cfg = load_config(args.config)
    workers = experiments.worker_count()
    table = experiments.run_experiment(cfg, workers)
    try:
        paths = experiments.write_outputs(cfg, table)
    except OSError as exc:
        raise ConfigError("output_dir", f"cannot write to {cfg.output_dir}: {exc.strerror}") from None
    for p in paths:
        print(p)
    return EXIT_OK


def _verify(args):
    variant = "unsquared" if args.inject_unsquared_q44 else "squared"
    rows = oracle.cross_check_report(q44_variant=variant)
    text = oracle.format_report(rows, verbose=args.verbose)
    try:
        args.report_dir.mkdir(parents=True, exist_ok=True)
        (args.report_dir / "verify_report.txt").write_text(text + "\n")
        (args.report_dir / "verify_report.json").write_text(oracle.report_json(rows))
    except OSError as exc:
        print(text)
        raise ConfigError("--report-dir", f"cannot write report: {exc.strerror}") from None
    print(text)
    failed = [r.name for r in rows if r.status != "PASS"]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _list(args):
    width = max(len(k) for k in experiments.REGISTRY)
    for name, (desc, _) in experiments.REGISTRY.items():
        print(f"{name:<{width}}  {desc}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"run": _run, "verify": _verify, "list": _list}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        # a parameter that parsed but lies outside an operation's domain
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, InvariantViolation) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (TCEntangleError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
