"""
Station-count sweep over both schedulers.

Each (scheduler, n) pair is an independent engine run dispatched to an
executor from asyncio; results are collected and ordered by (scheduler, n)
before any CSV is written, so output is independent of completion order.
"""

import asyncio
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import List, Optional, Tuple

from helpers.results_writer import ResultsWriter, RunSummary, summarize
from helpers.scenario import Scenario
from simulation.engine import SimConfig, run
from utils.config import Config
from utils.consts import SchedulerKind
from utils.exceptions import SimulationError

logger = logging.getLogger(__name__)


def run_job(config: SimConfig) -> RunSummary:
    """Worker entry point: one engine run reduced to its summary."""
    return summarize(run(config))


class SweepRunner:
    """Runs a scenario for every station count in its sweep range under both schedulers."""

    def __init__(self, scenario: Scenario, workers: Optional[int] = None) -> None:
        self.scenario = scenario
        self.workers = workers if workers is not None else Config.get_sweep_workers()

    def jobs(self) -> List[Tuple[SchedulerKind, int]]:
        return [
            (kind, n)
            for kind in SchedulerKind
            for n in range(self.scenario.sweep_min, self.scenario.sweep_max + 1)
        ]

    async def _run_one(
        self, executor: Optional[Executor], kind: SchedulerKind, n: int
    ) -> RunSummary:
        loop = asyncio.get_running_loop()
        config = self.scenario.config_for(n, kind)
        try:
            summary = await loop.run_in_executor(executor, run_job, config)
        except Exception as e:
            raise SimulationError(operation=f"{kind.value} with {n} stations", message=str(e)) from e
        logger.info(f"Finished {kind.value} with {n} stations")
        return summary

    async def run(self) -> List[RunSummary]:
        """
        Execute all runs.

        Raises:
            SimulationError: If any run fails.
        """
        jobs = self.jobs()
        logger.info(f"Sweeping {len(jobs)} runs with {self.workers} worker(s)")

        executor = ProcessPoolExecutor(max_workers=self.workers) if self.workers > 1 else None
        try:
            summaries = await asyncio.gather(*(self._run_one(executor, kind, n) for kind, n in jobs))
        finally:
            if executor is not None:
                executor.shutdown(cancel_futures=True)

        order = {kind: index for index, kind in enumerate(SchedulerKind)}
        return sorted(summaries, key=lambda s: (order[s.scheduler], s.stations))


async def run_sweep(scenario: Scenario, writer: ResultsWriter, workers: Optional[int] = None) -> List[RunSummary]:
    """
    Sweep and write the result files. On failure nothing from this sweep
    is left in the output directory.

    Raises:
        SimulationError: If any run or file write fails.
    """
    try:
        summaries = await SweepRunner(scenario, workers).run()
        writer.write_sweep(summaries)
    except SimulationError:
        writer.remove_written()
        raise
    except OSError as e:
        writer.remove_written()
        raise SimulationError(operation="write results", message=str(e)) from e
    return summaries
