#!/usr/bin/env python3
"""
QCacheNet CLI - repeater network experiments with seeded, reproducible output.

Usage:
    qcachenet queue-wait --config experiment.conf
    qcachenet fidelity-sweep --out fidelity.csv
    qcachenet decode-error --trials 100000 --format json
    qcachenet optimize --decoder lut --out optimize.csv
    qcachenet reproduce-figures --out results/
    qcachenet show-config --config experiment.conf

Tables go to stdout unless --out is given; logs go to stderr.

Exit codes: 0 success, 1 runtime failure, 2 config or argument error,
3 infeasible optimization.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..config import configure_logging
from ..errors import QCacheNetError
from ..reporting import write_summary, write_table
from ..schemas import ExperimentConfig
from .commands import (
    cmd_decode_error,
    cmd_fidelity_sweep,
    cmd_optimize,
    cmd_queue_wait,
    queue_wait_summary,
    reproduce_figures,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3

COMMANDS = {
    "queue-wait": "Mean queueing delay: Markov chain vs discrete-event simulation",
    "fidelity-sweep": "Path fidelity over path length, edge count and memory units",
    "decode-error": "Logical error of the MWM and lookup-table decoders",
    "optimize": "Grid search for the best accuracy-weighted logical rate",
    "reproduce-figures": "Run every experiment into an output directory",
    "show-config": "Print the effective configuration",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', '-c', help='Experiment config file (key = value lines)')
    common.add_argument('--seed', type=int, help='Root seed for every stochastic stage')
    common.add_argument('--trials', type=int, help='Monte Carlo decoding trials')
    common.add_argument('--out', '-o', help='Output file (or directory for reproduce-figures)')
    common.add_argument('--format', choices=['csv', 'json'], help='Table format')
    common.add_argument('--decoder', choices=['mwm', 'lut'], help='Decoder for optimize')
    common.add_argument('--mapping', choices=['werner', 'bitflip'], help='Fidelity to flip probability mapping')
    common.add_argument('--queue-backend', choices=['markov', 'analytic', 'des'], help='Queue engine')
    common.add_argument('--compat-eq13b-exponent', '--compat-doubled-exponent', dest='compat_doubled_exponent',
                        action='store_true', default=None, help='Use the 2^j exponent in the swap-time sum')
    common.add_argument('--compat-literal-constraint', action='store_true', default=None,
                        help='Treat the threshold as C_T > threshold')
    common.add_argument('--replications', type=int, help='Independent DES replications')
    common.add_argument('--workers', '-w', type=int, help='Parallel workers')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug logging')

    parser = argparse.ArgumentParser(
        prog='qcachenet',
        description='Quantum repeater network simulator and rate/accuracy optimizer',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s queue-wait --config experiment.conf
  %(prog)s optimize --decoder lut --out optimize.csv
  %(prog)s reproduce-figures --seed 7 --out results/
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name, help_text in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def effective_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then the config file, then command-line flags."""
    cfg = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(
        seed=args.seed,
        trials=args.trials,
        out=args.out,
        format=args.format,
        decoder=args.decoder,
        mapping=args.mapping,
        queue_backend=args.queue_backend,
        doubled_exponent=args.compat_doubled_exponent,
        literal_constraint=args.compat_literal_constraint,
        replications=args.replications,
    )


def _summary_path(out: Optional[str]) -> Optional[Path]:
    if out is None:
        return None
    path = Path(out)
    return path.with_name(f"{path.stem}_summary.json")


def _emit_summary(summary: Dict[str, Any], out: Optional[str]) -> None:
    summary_path = _summary_path(out)
    if summary_path is None:
        sys.stderr.write(json.dumps(summary, indent=2, default=str) + "\n")
    else:
        write_summary(summary, summary_path)


def _optimize_status(summary: Dict[str, Any]) -> int:
    if summary["status"] != "infeasible":
        return EXIT_OK
    logger.error("No configuration meets the fidelity threshold")
    sys.stderr.write(json.dumps({"best_infeasible_row": summary["best_infeasible_row"]}, indent=2, default=str) + "\n")
    return EXIT_INFEASIBLE


def run(args: argparse.Namespace) -> int:
    cfg = effective_config(args)
    workers = args.workers
    logger.info(f"{args.command}: seed={cfg.seed} fingerprint={cfg.fingerprint()[:16]}")

    if args.command == "show-config":
        text = cfg.to_text()
        if cfg.out:
            Path(cfg.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_OK

    if args.command == "reproduce-figures":
        return _optimize_status(reproduce_figures(cfg, Path(cfg.out or "results"), workers))

    if args.command == "optimize":
        table, summary = cmd_optimize(cfg, workers)
        write_table(table, cfg.out, cfg.format)
        _emit_summary(summary, cfg.out)
        return _optimize_status(summary)

    if args.command == "queue-wait":
        write_table(cmd_queue_wait(cfg, workers), cfg.out, cfg.format)
        _emit_summary(queue_wait_summary(cfg), cfg.out)
        return EXIT_OK

    handlers = {
        "fidelity-sweep": cmd_fidelity_sweep,
        "decode-error": cmd_decode_error,
    }
    write_table(handlers[args.command](cfg, workers), cfg.out, cfg.format)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging("DEBUG" if args.verbose else None)

    try:
        return run(args)
    except ValueError as e:
        # Config, parse and argument errors all derive from ValueError
        logger.error(str(e))
        return EXIT_CONFIG
    except (QCacheNetError, ArithmeticError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
