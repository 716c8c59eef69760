"""
Subcommand implementations. Each takes the parsed argparse namespace,
writes its report to stdout or its files to the output directory, and
returns the process exit code. Errors propagate to the entry point.
"""

import asyncio
import logging
from argparse import Namespace
from pathlib import Path
from typing import List, Optional

from helpers.results_writer import ResultsWriter, summarize
from helpers.scenario import Scenario, load_scenario
from helpers.sweep_runner import run_sweep
from simulation.engine import run
from traffic.profiles import get_profile, list_profiles
from traffic.trace import TraceStats, compute_stats, emit_trace, generate_synthetic, load_trace
from traffic.tspec import derive_tspec
from utils.consts import MICROSECONDS_PER_MILLISECOND, SchedulerKind
from utils.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


def format_stats(name: str, stats: TraceStats) -> str:
    """Frame statistics laid out one quantity per row."""
    rows = [
        ("Trace", f"{name} ({stats.frame_count} frames)"),
        ("Mean size (byte)", f"{stats.mean_size:.2f}"),
        ("Max size (byte)", f"{stats.max_size}"),
        ("CoV of frame size", f"{stats.cov:.2f}"),
        ("Mean bit rate (bit/sec)", f"{stats.mean_bit_rate:.3e}"),
        ("Peak bit rate (bit/sec)", f"{stats.peak_bit_rate:.3e}"),
        ("Peak/Mean of bit rate", f"{stats.peak_mean_ratio:.2f}"),
    ]
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {value}" for label, value in rows)


def _interval_us(args: Namespace) -> int:
    return round(args.interval * MICROSECONDS_PER_MILLISECOND)


def cmd_stats(args: Namespace) -> int:
    trace = load_trace(args.trace, _interval_us(args))
    print(format_stats(trace.name, compute_stats(trace)))
    return 0


def cmd_tspec(args: Namespace) -> int:
    trace = load_trace(args.trace, _interval_us(args))
    tspec = derive_tspec(trace, msi=args.msi, delay_bound=args.delay_bound, phy_rate=args.rate)
    rows = [
        ("Nominal MSDU size L (byte)", f"{tspec.nominal_size}"),
        ("Maximum MSDU size M (byte)", f"{tspec.max_size}"),
        ("Mean data rate (bit/sec)", f"{tspec.mean_rate:.6g}"),
        ("Delay bound (sec)", f"{tspec.delay_bound:g}"),
        ("PHY rate (bit/sec)", f"{tspec.phy_rate:.6g}"),
        ("Maximum service interval (sec)", f"{tspec.max_service_interval:g}"),
    ]
    width = max(len(label) for label, _ in rows)
    print("\n".join(f"{label:<{width}}  {value}" for label, value in rows))
    return 0


def _scenario_with_overrides(args: Namespace) -> Scenario:
    scenario = load_scenario(args.scenario)
    if getattr(args, "output_dir", None):
        scenario.output_dir = args.output_dir
    if getattr(args, "seed", None) is not None:
        scenario.seed = args.seed
    return scenario


def cmd_simulate(args: Namespace) -> int:
    scenario = _scenario_with_overrides(args)
    kind = SchedulerKind(args.scheduler) if args.scheduler else scenario.scheduler
    stations = args.stations if args.stations is not None else scenario.stations

    result = run(scenario.config_for(stations, kind))
    summary = summarize(result)

    writer = ResultsWriter(scenario.output_dir)
    paths = writer.write_simulation(summary, result.log if args.events else None)

    metrics = summary.metrics
    print(
        f"{kind.value}: {summary.admitted} admitted, {summary.rejected} rejected, SI {summary.si} us, "
        f"mean delay {metrics.mean_e2e_delay:.6g} s, throughput {metrics.aggregate_throughput:.6g} bit/s, "
        f"TXOP {metrics.aggregate_txop:.6g} s",
    )
    logger.info(f"Wrote {len(paths)} files to {writer.output_dir}")
    return 0


def cmd_sweep(args: Namespace) -> int:
    scenario = _scenario_with_overrides(args)
    writer = ResultsWriter(scenario.output_dir)
    summaries = asyncio.run(run_sweep(scenario, writer, workers=args.workers))
    print(f"{len(summaries)} runs written to {writer.output_dir}")
    return 0


def cmd_gen(args: Namespace) -> int:
    profile = get_profile(args.profile) if args.profile else None
    mean = args.mean if args.mean is not None else (profile.mean_size if profile else None)
    cov = args.cov if args.cov is not None else (profile.cov if profile else None)
    max_size: Optional[int] = args.max_size
    if mean is None or cov is None:
        raise ConfigurationError(config_key="mean", message="--mean and --cov are required without --profile")

    trace = generate_synthetic(
        mean_size=mean,
        cov=cov,
        frame_count=args.frames,
        frame_interval=_interval_us(args),
        seed=args.seed,
        max_size=max_size,
        name=Path(args.output).stem,
    )
    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(emit_trace(trace), encoding="utf-8")
    logger.info(f"Wrote {len(trace)} frames to {output}")
    return 0


def cmd_profiles(args: Namespace) -> int:
    header = f"{'name':<15}{'title':<17}{'quality':<9}{'mean (B)':>10}{'CoV':>7}{'M (B)':>8}{'mean bit/s':>12}{'peak bit/s':>12}"
    lines: List[str] = [header]
    for p in list_profiles():
        lines.append(
            f"{p.name:<15}{p.title:<17}{p.quality:<9}{p.mean_size:>10.0f}{p.cov:>7.2f}"
            f"{p.max_size:>8}{p.mean_bit_rate:>12.2g}{p.peak_bit_rate:>12.2g}"
        )
    print("\n".join(lines))
    return 0
