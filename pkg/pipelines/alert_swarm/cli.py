"""
Alert Swarm command line.

    alert-swarm run --config <path> --seeds <n|list> --out <dir> [--format csv|json] [--workers N]
    alert-swarm validate --config <path>
    alert-swarm report --in <dir> [--out <file>]

Exit codes: 0 success, 1 run or I/O failure, 2 bad config or arguments.
Log verbosity comes from ALERT_SWARM_LOG (error, info, debug).
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config import DEFAULT_CONFIG_PATH, load_config
from .errors import InvalidConfig, ParseError
from .orchestrator import ExperimentOrchestrator, RunManifest, parse_seeds, report_directory
from .sim.metrics import FORMATS

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s | %(levelname)s | %(message)s'
LOG_LEVELS = {'error': logging.ERROR, 'info': logging.INFO, 'debug': logging.DEBUG}
LOG_ENV = 'ALERT_SWARM_LOG'

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def configure_logging(value: Optional[str] = None) -> int:
    """Configure the root handler from ALERT_SWARM_LOG; returns the level used."""
    raw = value if value is not None else os.environ.get(LOG_ENV, 'info')
    level = LOG_LEVELS.get(raw.strip().lower())
    logging.basicConfig(level=level or logging.INFO, format=LOG_FORMAT, force=True)
    if level is None:
        logger.warning("%s=%r is not one of %s; using info", LOG_ENV, raw, sorted(LOG_LEVELS))
        return logging.INFO
    return level


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='alert-swarm',
        description="Alert swarm simulator: GSO communication domains and peer threat detection",
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help="Run seeded experiments")
    run.add_argument('--config', default=str(DEFAULT_CONFIG_PATH), help="Path to configuration file")
    run.add_argument('--seeds', default='1',
                     help="Seed count N (config seed .. seed+N-1) or a comma-separated list")
    run.add_argument('--out', default='results', help="Output directory")
    run.add_argument('--format', dest='fmt', choices=FORMATS, default='csv',
                     help="Per-tick metrics format")
    run.add_argument('--workers', type=int, default=None, help="Worker processes (default: one per seed, up to CPUs)")

    validate = sub.add_parser('validate', help="Check a configuration file")
    validate.add_argument('--config', required=True, help="Path to configuration file")

    report = sub.add_parser('report', help="Re-aggregate an existing metrics directory")
    report.add_argument('--in', dest='in_dir', required=True, help="Directory holding metrics_<seed> files")
    report.add_argument('--out', default=None, help="Summary path (default: <in>/summary.json)")
    return parser


def _config_failure(exc: Exception) -> int:
    print(f"error: {exc}", file=sys.stderr)
    for issue in getattr(exc, 'issues', []):
        print(f"  - {issue}", file=sys.stderr)
    return EXIT_CONFIG


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
    except (ParseError, InvalidConfig) as exc:
        return _config_failure(exc)
    print(f"OK: {args.config} ({config.n_agents} agents, {config.ticks} ticks, seed {config.seed})")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
    except (ParseError, InvalidConfig) as exc:
        return _config_failure(exc)
    try:
        manifest = RunManifest(
            config_path=Path(args.config),
            seeds=parse_seeds(args.seeds, config.seed),
            out_dir=Path(args.out),
            fmt=args.fmt,
            workers=args.workers,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    orchestrator = ExperimentOrchestrator(config, manifest.out_dir, manifest.fmt, manifest.workers)
    try:
        results = orchestrator.run_seeds(manifest.seeds)
        summary_path = orchestrator.write_summary()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    print("\n" + "=" * 60)
    for result in results:
        line = f"seed {result.seed:>6}: {result.status.value}"
        if result.error:
            line += f" ({result.error})"
        print(line)
    print(f"summary: {summary_path}")
    print("=" * 60)
    return EXIT_OK if orchestrator.succeeded else EXIT_FAILURE


def cmd_report(args: argparse.Namespace) -> int:
    try:
        path, summary = report_directory(args.in_dir, args.out)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"Aggregated {len(summary['seeds'])} run(s) -> {path}")
    for kind, stats in summary['aggregate']['recall'].items():
        mean = 'n/a' if stats['mean'] is None else f"{stats['mean']:.3f}"
        print(f"  recall {kind:<16} {mean}")
    return EXIT_OK


COMMANDS = {'run': cmd_run, 'validate': cmd_validate, 'report': cmd_report}


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    configure_logging()
    return COMMANDS[args.command](args)


if __name__ == '__main__':
    sys.exit(main())
