"""
Utility functions for test data generation and common test operations.
"""

import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from simulation.engine import SimConfig, StationSpec
from traffic.trace import VideoFrame, VideoTrace
from traffic.tspec import Tspec, derive_tspec
from utils.consts import GOP_PATTERN, FrameType

TABLE1_ROWS = [
    (527, "I", 21120, 8124),
    (528, "B", 21040, 6442),
    (529, "B", 21080, 6237),
    (530, "P", 21240, 7581),
    (531, "B", 21160, 6184),
    (532, "B", 21200, 6173),
    (533, "P", 21360, 7482),
    (534, "B", 21280, 6331),
    (535, "B", 21320, 6567),
    (536, "P", 21480, 7130),
    (537, "B", 21400, 6410),
    (538, "B", 21440, 6223),
]

FRAME_INTERVAL_US = 40_000


class TraceBuilder:
    """Builders for traces and station specs used across the test suite."""

    @staticmethod
    def table1_text() -> str:
        """The twelve-frame trace excerpt in file format, in file (decode) order."""
        lines = ["# seq type time_ms size"]
        lines += [f"{seq} {kind} {time_ms} {size}" for seq, kind, time_ms, size in TABLE1_ROWS]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_sizes(
        sizes: Sequence[int], frame_interval: int = FRAME_INTERVAL_US, name: str = "test"
    ) -> VideoTrace:
        """One frame per interval starting at 0, with the given sizes."""
        frames = tuple(
            VideoFrame(
                seq=i,
                frame_type=FrameType(GOP_PATTERN[i % len(GOP_PATTERN)]),
                arrival_time=i * frame_interval,
                size=size,
            )
            for i, size in enumerate(sizes)
        )
        return VideoTrace(name=name, frames=frames, frame_interval=frame_interval)

    @staticmethod
    def cbr(size: int = 1000, frames: int = 3, frame_interval: int = FRAME_INTERVAL_US) -> VideoTrace:
        return TraceBuilder.from_sizes([size] * frames, frame_interval, name=f"cbr_{size}")

    @staticmethod
    def station(
        trace: VideoTrace,
        msi: float = 0.04,
        delay_bound: float = 0.08,
        phy_rate: float = 11e6,
        **overrides,
    ) -> StationSpec:
        tspec: Tspec = derive_tspec(trace, msi, delay_bound, phy_rate).with_overrides(**overrides)
        return StationSpec(trace=trace, tspec=tspec)

    @staticmethod
    def config(traces: Sequence[VideoTrace], **kwargs) -> SimConfig:
        """SimConfig with one station per trace; kwargs go to SimConfig."""
        return SimConfig(stations=[TraceBuilder.station(trace) for trace in traces], **kwargs)


class TestHelpers:
    """Common helper functions for tests."""

    __test__ = False

    @staticmethod
    def write_file(directory: Path, filename: str, content: str) -> Path:
        """Write content to directory/filename and return the path."""
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / filename
        path.write_text(content, encoding="utf-8")
        return path

    @staticmethod
    def write_scenario(directory: Path, settings: Dict[str, object], filename: str = "test.scn") -> Path:
        """Scenario file with one ``key = value`` line per setting."""
        lines = [f"{key} = {str(value).lower() if isinstance(value, bool) else value}" for key, value in settings.items()]
        return TestHelpers.write_file(directory, filename, "\n".join(lines) + "\n")

    @staticmethod
    def read_csv_file(file_path: Path) -> List[List[str]]:
        """Read and parse a CSV file."""
        with open(file_path, "r", encoding="utf-8", newline="") as f:
            return list(csv.reader(f))

    @staticmethod
    def read_csv_dicts(file_path: Path) -> List[Dict[str, str]]:
        with open(file_path, "r", encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f))

    @staticmethod
    def find_row(rows: List[Dict[str, str]], **match: str) -> Optional[Dict[str, str]]:
        """First row whose columns equal every given value."""
        for row in rows:
            if all(row.get(key) == str(value) for key, value in match.items()):
                return row
        return None
