"""
conftest.py: core pytest configuration for the HCCA simulator test suite.

Includes:
- Structured logging.
- pytest-xdist parallelism driven by PYTEST_WORKERS.
- Shared trace, MAC parameter and scenario fixtures.
- Event-log CSV attached to the Allure report when a simulation test fails.
"""

import csv
import io
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Generator, List

import allure
import pytest
from allure_commons.types import AttachmentType

# Ensure package imports work regardless of execution path
sys.path.insert(0, os.path.dirname(__file__))

from scheduling.mac import PhyMacParams  # noqa: E402
from simulation.engine import EVENTS_HEADER, SimResult  # noqa: E402
from traffic.trace import VideoTrace, parse_trace  # noqa: E402
from utils.config import Config  # noqa: E402
from utils.test_helpers import FRAME_INTERVAL_US, TestHelpers, TraceBuilder  # noqa: E402

# --- Logging configuration ----------------------------------------------------
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(message)s",
    handlers=[logging.StreamHandler(sys.stdout)],
)
logger = logging.getLogger(__name__)


# --- Pytest configuration hook for parallel execution -------------------------
def pytest_addoption(parser):
    """Add custom command line options and read environment variables."""
    parser.addoption(
        "--workers",
        action="store",
        default=None,
        help="Number of workers for parallel execution (overrides PYTEST_WORKERS env var)",
    )


def pytest_configure(config):
    """
    Configure pytest based on environment variables.

    Automatically enables parallel execution if PYTEST_WORKERS is set
    and -n option is not provided on command line.
    """
    if config.getoption("numprocesses", None) is None:
        workers = config.getoption("--workers") or Config.get_pytest_workers()
        if workers and workers.lower() != "none":
            config.option.numprocesses = workers
            logger.info(f"🚀 Parallel execution enabled: {workers} workers")


# --- Shared data fixtures -----------------------------------------------------
@pytest.fixture(scope="session")
def mac() -> PhyMacParams:
    """Default 802.11b PHY / 802.11e MAC timing."""
    return PhyMacParams()


@pytest.fixture(scope="session")
def table1_text() -> str:
    return TraceBuilder.table1_text()


@pytest.fixture(scope="session")
def table1_trace(table1_text: str) -> VideoTrace:
    return parse_trace(table1_text, FRAME_INTERVAL_US, name="table1")


@pytest.fixture
def cbr_trace() -> Callable[..., VideoTrace]:
    """Factory for constant-size traces: cbr_trace(size=1000, frames=3)."""
    return TraceBuilder.cbr


@pytest.fixture
def write_scenario(tmp_path: Path) -> Callable[..., Path]:
    """Factory writing a scenario file into the test's temporary directory."""

    def _write(settings: dict, filename: str = "test.scn") -> Path:
        return TestHelpers.write_scenario(tmp_path, settings, filename)

    return _write


# --- Simulation results registry ----------------------------------------------
@pytest.fixture(scope="function")
def sim_results() -> Generator[List[SimResult], None, None]:
    """Tests append their SimResults here so failures can attach the event log."""
    registry: List[SimResult] = []
    yield registry
    registry.clear()


def _events_csv(result: SimResult, limit: int = 5000) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(EVENTS_HEADER)
    writer.writerows(result.log.to_rows()[:limit])
    return buffer.getvalue()


# --- Event log + Allure integration on failure ---------------------------------
@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Attach the event log of every registered simulation when a test fails."""
    outcome = yield
    rep = outcome.get_result()

    if rep.when == "call" and rep.failed:
        results = item.funcargs.get("sim_results", [])
        for i, result in enumerate(results):
            name = f"{item.name}_{result.config.scheduler.value}_run{i + 1}_events.csv"
            try:
                allure.attach(_events_csv(result), name=name, attachment_type=AttachmentType.CSV)
                logger.info(f"📎 Event log attached to Allure: {name}")
            except Exception as e:
                logger.error(f"Error attaching event log: {e}")
