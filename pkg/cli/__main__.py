"""
Command line entry point.

    python -m cli stats traces/table1_excerpt.txt
    python -m cli simulate scenarios/cbr_single.scn --scheduler dyn --events
    python -m cli sweep scenarios/jurassic_high_sweep.scn

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from cli import commands
from utils.config import Config
from utils.consts import SchedulerKind
from utils.exceptions import DOMAIN_ERRORS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog="hcca-sim",
        description="HCCA polling simulator with reference and dynamic TXOP scheduling.",
    )
    parser.add_argument("--log-level", default=None, help="Overrides LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)

    stats = sub.add_parser("stats", help="Frame statistics of a trace file")
    stats.add_argument("trace")
    stats.add_argument("--interval", type=float, default=40.0, help="Frame interval in ms")
    stats.set_defaults(handler=commands.cmd_stats)

    tspec = sub.add_parser("tspec", help="TSPEC derived from a trace file")
    tspec.add_argument("trace")
    tspec.add_argument("--interval", type=float, default=40.0, help="Frame interval in ms")
    tspec.add_argument("--msi", type=float, default=0.04, help="Maximum service interval in s")
    tspec.add_argument("--delay-bound", type=float, default=0.08, help="Delay bound in s")
    tspec.add_argument("--rate", type=float, default=11e6, help="PHY rate in bit/s")
    tspec.set_defaults(handler=commands.cmd_tspec)

    kinds = [kind.value for kind in SchedulerKind]

    simulate = sub.add_parser("simulate", help="Run one scenario")
    simulate.add_argument("scenario")
    simulate.add_argument("--scheduler", choices=kinds, default=None)
    simulate.add_argument("--stations", type=_positive_int, default=None, help="Overrides the scenario's station count")
    simulate.add_argument("--seed", type=int, default=None)
    simulate.add_argument("--output-dir", default=None)
    simulate.add_argument("--events", action="store_true", help="Also write events.csv")
    simulate.set_defaults(handler=commands.cmd_simulate)

    sweep = sub.add_parser("sweep", help="Run a scenario over its station-count range with both schedulers")
    sweep.add_argument("scenario")
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--output-dir", default=None)
    sweep.add_argument("--workers", type=_positive_int, default=None, help="Overrides SWEEP_WORKERS")
    sweep.set_defaults(handler=commands.cmd_sweep)

    gen = sub.add_parser("gen", help="Write a synthetic lognormal trace")
    gen.add_argument("--mean", type=float, default=None, help="Mean frame size in bytes")
    gen.add_argument("--cov", type=float, default=None, help="Coefficient of variation of frame size")
    gen.add_argument("--frames", type=int, required=True)
    gen.add_argument("--interval", type=float, default=40.0, help="Frame interval in ms")
    gen.add_argument("--seed", type=int, default=Config.get_default_seed())
    gen.add_argument("--profile", default=None, help="Take mean and CoV from a built-in profile")
    gen.add_argument("--max-size", type=int, default=None, help="Clamp frame sizes to this many bytes")
    gen.add_argument("-o", "--output", required=True)
    gen.set_defaults(handler=commands.cmd_gen)

    profiles = sub.add_parser("profiles", help="List built-in video profiles")
    profiles.set_defaults(handler=commands.cmd_profiles)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "gen" and args.profile is None and (args.mean is None or args.cov is None):
        parser.error("gen needs --mean and --cov unless --profile is given")

    logging.basicConfig(
        level=(args.log_level or Config.get_log_level()).upper(),
        format="%(asctime)s [%(levelname)s] %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    logger.debug(f"Configuration: {Config.get_all_config()}")

    try:
        return args.handler(args)
    except (*DOMAIN_ERRORS, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
