"""
CSV result files.

Every file has a header row and comma separators; floats are written with
six significant digits. The writer remembers what it produced so a failed
sweep can remove its partial outputs.
"""

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Sequence, Union

from simulation.engine import EVENTS_HEADER, EventLog, SimResult
from simulation.metrics import MetricsBundle, compute_metrics, delay_improvement
from utils.consts import SchedulerKind
from utils.exceptions import MetricsError

logger = logging.getLogger(__name__)

DELAY_FILE = "delay.csv"
THROUGHPUT_FILE = "throughput.csv"
TXOP_FILE = "txop.csv"
PER_SI_TXOP_FILE = "per_si_txop.csv"
RUNS_FILE = "runs.csv"
UTILIZATION_FILE = "utilization.csv"
IMPROVEMENT_FILE = "improvement.csv"
EVENTS_FILE = "events.csv"


@dataclass(frozen=True)
class RunSummary:
    """What one (scheduler, station count) run contributes to the result files."""

    scheduler: SchedulerKind
    stations: int
    seed: int
    si: int
    admitted: int
    rejected: int
    metrics: MetricsBundle


def summarize(result: SimResult) -> RunSummary:
    return RunSummary(
        scheduler=result.config.scheduler,
        stations=len(result.config.stations),
        seed=result.config.seed,
        si=result.si,
        admitted=len(result.admitted),
        rejected=len(result.rejected),
        metrics=compute_metrics(result),
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class ResultsWriter:
    """Writes result tables into one output directory."""

    def __init__(self, output_dir: Union[str, Path]) -> None:
        self.output_dir = Path(output_dir)
        self.written: List[Path] = []

    def _write(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        path = self.output_dir / name
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(value) for value in row])
        self.written.append(path)
        logger.debug(f"Wrote {path}")
        return path

    def remove_written(self) -> None:
        for path in self.written:
            path.unlink(missing_ok=True)
            logger.info(f"Removed partial output {path}")
        self.written.clear()

    # ------------------------------------------------------------------
    def write_runs(self, runs: Sequence[RunSummary]) -> Path:
        return self._write(
            RUNS_FILE,
            ("scheduler", "stations", "seed", "si_us", "admitted", "rejected"),
            ((r.scheduler.value, r.stations, r.seed, r.si, r.admitted, r.rejected) for r in runs),
        )

    def write_delay(self, runs: Sequence[RunSummary]) -> Path:
        return self._write(
            DELAY_FILE,
            ("scheduler", "stations", "mean_e2e_delay_s", "samples"),
            (
                (r.scheduler.value, r.stations, float(r.metrics.mean_e2e_delay), r.metrics.delay_samples)
                for r in runs
            ),
        )

    def write_throughput(self, runs: Sequence[RunSummary]) -> Path:
        return self._write(
            THROUGHPUT_FILE,
            ("scheduler", "stations", "aggregate_throughput_bps"),
            ((r.scheduler.value, r.stations, float(r.metrics.aggregate_throughput)) for r in runs),
        )

    def write_txop(self, runs: Sequence[RunSummary]) -> Path:
        return self._write(
            TXOP_FILE,
            ("scheduler", "stations", "aggregate_txop_s"),
            ((r.scheduler.value, r.stations, float(r.metrics.aggregate_txop)) for r in runs),
        )

    def write_utilization(self, runs: Sequence[RunSummary]) -> Path:
        return self._write(
            UTILIZATION_FILE,
            ("scheduler", "stations", "aggregate_used_s", "wasted_txop_s"),
            (
                (r.scheduler.value, r.stations, float(r.metrics.aggregate_used), float(r.metrics.wasted_txop))
                for r in runs
            ),
        )

    def write_per_si_txop(self, run: RunSummary) -> Path:
        rows = sorted(run.metrics.per_si_txop, key=lambda item: (item[1], item[0]))
        return self._write(
            PER_SI_TXOP_FILE,
            ("scheduler", "station_id", "si_index", "granted_us"),
            ((run.scheduler.value, station_id, si_index, granted) for si_index, station_id, granted in rows),
        )

    def write_improvement(self, runs: Sequence[RunSummary]) -> Path:
        """Per station count: delay and TXOP reduction of dyn against hcca, in percent."""
        by_key = {(r.scheduler, r.stations): r for r in runs}
        rows = []
        for n in sorted({r.stations for r in runs}):
            hcca = by_key.get((SchedulerKind.REFERENCE_HCCA, n))
            dyn = by_key.get((SchedulerKind.DYNAMIC_TXOP, n))
            if hcca is None or dyn is None:
                continue
            try:
                delay_pct = 100.0 * delay_improvement(hcca.metrics.mean_e2e_delay, dyn.metrics.mean_e2e_delay)
            except MetricsError:
                delay_pct = float("nan")
            if hcca.metrics.aggregate_txop > 0:
                txop_pct = 100.0 * (1.0 - dyn.metrics.aggregate_txop / hcca.metrics.aggregate_txop)
            else:
                txop_pct = float("nan")
            rows.append((n, delay_pct, txop_pct))
        return self._write(IMPROVEMENT_FILE, ("stations", "delay_improvement_pct", "txop_saving_pct"), rows)

    def write_events(self, log: EventLog) -> Path:
        return self._write(EVENTS_FILE, EVENTS_HEADER, log.to_rows())

    # ------------------------------------------------------------------
    def write_simulation(self, run: RunSummary, log: EventLog = None) -> List[Path]:
        """Result set of a single simulate run."""
        paths = [
            self.write_runs([run]),
            self.write_delay([run]),
            self.write_throughput([run]),
            self.write_txop([run]),
            self.write_utilization([run]),
            self.write_per_si_txop(run),
        ]
        if log is not None:
            paths.append(self.write_events(log))
        return paths

    def write_sweep(self, runs: Sequence[RunSummary]) -> List[Path]:
        """Result set of a sweep; rows keep the order of runs."""
        return [
            self.write_runs(runs),
            self.write_delay(runs),
            self.write_throughput(runs),
            self.write_txop(runs),
            self.write_utilization(runs),
            self.write_improvement(runs),
        ]
