"""
MPEG-4 frame-size traces: parsing, emission, statistics and synthesis.

A trace file holds one frame per line with four whitespace-separated
columns ``seq type time_ms size_bytes``; lines starting with ``#`` are
comments. Files are usually written in decode order, so frames are sorted
by arrival time when parsed. Times are kept as integer microseconds.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from utils.consts import (
    GOP_PATTERN,
    MICROSECONDS_PER_MILLISECOND,
    MICROSECONDS_PER_SECOND,
    FrameType,
)
from utils.exceptions import TraceParseError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VideoFrame:
    """One encoded video frame, transmitted as a single MSDU."""

    seq: int
    frame_type: FrameType
    arrival_time: int  # microseconds since stream start
    size: int  # bytes

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValidationError(field="size", message=f"frame {self.seq} has size {self.size}")
        if self.arrival_time < 0:
            raise ValidationError(
                field="arrival_time",
                message=f"frame {self.seq} arrives at {self.arrival_time}",
            )


@dataclass(frozen=True)
class VideoTrace:
    """Frames ordered by arrival time plus the nominal capture period."""

    name: str
    frames: Tuple[VideoFrame, ...]
    frame_interval: int  # microseconds

    def __post_init__(self) -> None:
        if self.frame_interval <= 0:
            raise ValidationError(field="frame_interval", message="must be positive")
        if not self.frames:
            raise ValidationError(field="frames", message="no frames")
        times = [frame.arrival_time for frame in self.frames]
        if any(later < earlier for earlier, later in zip(times, times[1:])):
            raise ValidationError(field="frames", message="not sorted by arrival time")

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def sizes(self) -> np.ndarray:
        return np.fromiter((frame.size for frame in self.frames), dtype=np.int64, count=len(self))

    @property
    def span(self) -> int:
        """Duration covered by one pass over the trace, used for cyclic repetition."""
        first = self.frames[0].arrival_time
        last = self.frames[-1].arrival_time
        return last - first + self.frame_interval


@dataclass(frozen=True)
class TraceStats:
    """Frame-size and bit-rate statistics of a trace."""

    mean_size: float
    max_size: int
    std_size: float
    cov: float
    mean_bit_rate: float
    peak_bit_rate: float
    peak_mean_ratio: float
    frame_count: int


def _parse_row(fields: List[str], line_no: int, source: Optional[str]) -> VideoFrame:
    if len(fields) != 4:
        raise TraceParseError(line_no, f"expected 4 columns, got {len(fields)}", source)

    seq_raw, type_raw, time_raw, size_raw = fields
    try:
        seq = int(seq_raw)
        time_ms = int(time_raw)
        size = int(size_raw)
    except ValueError as e:
        raise TraceParseError(line_no, f"non-numeric field in {fields}", source) from e

    try:
        frame_type = FrameType(type_raw)
    except ValueError as e:
        raise TraceParseError(line_no, f"unknown frame type '{type_raw}'", source) from e

    if size <= 0:
        raise TraceParseError(line_no, f"frame size must be positive, got {size}", source)
    if time_ms < 0:
        raise TraceParseError(line_no, f"frame time must be non-negative, got {time_ms}", source)

    return VideoFrame(
        seq=seq,
        frame_type=frame_type,
        arrival_time=time_ms * MICROSECONDS_PER_MILLISECOND,
        size=size,
    )


def parse_trace(
    text: Union[str, Iterable[str]],
    frame_interval: int,
    name: str = "trace",
    source: Optional[str] = None,
) -> VideoTrace:
    """
    Parse trace text into a VideoTrace sorted by arrival time.

    Args:
        text: Whole file contents or an iterable of lines.
        frame_interval: Nominal capture period in microseconds.
        name: Label stored on the trace.
        source: File name used in error messages.

    Raises:
        TraceParseError: On a malformed row or when no frames are present.
    """
    lines = text.splitlines() if isinstance(text, str) else text

    frames: List[VideoFrame] = []
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        frames.append(_parse_row(stripped.split(), line_no, source))

    if not frames:
        raise TraceParseError(message="no frames", source=source)

    # Stable sort keeps file order among frames sharing a timestamp
    frames.sort(key=lambda frame: frame.arrival_time)
    return VideoTrace(name=name, frames=tuple(frames), frame_interval=frame_interval)


def _decoded_lines(raw: bytes, source: str) -> Iterator[str]:
    for line_no, line in enumerate(raw.splitlines(), start=1):
        try:
            yield line.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TraceParseError(line_no, f"not UTF-8 text ({e.reason})", source) from e


def load_trace(path: Union[str, Path], frame_interval: int) -> VideoTrace:
    """Read and parse a trace file; parse errors name the file."""
    path = Path(path)
    lines = _decoded_lines(path.read_bytes(), str(path))
    trace = parse_trace(lines, frame_interval, name=path.stem, source=str(path))
    logger.info(f"Loaded trace {path} ({len(trace)} frames)")
    return trace


def emit_trace(trace: VideoTrace) -> str:
    """
    Serialize a trace to the text format read by parse_trace.

    Raises:
        ValidationError: If the trace is empty or a frame time is not a
            whole number of milliseconds.
    """
    if not trace.frames:
        raise ValidationError(field="frames", message="no frames")

    rows = []
    for frame in trace.frames:
        time_ms, remainder = divmod(frame.arrival_time, MICROSECONDS_PER_MILLISECOND)
        if remainder:
            raise ValidationError(
                field="arrival_time",
                message=f"frame {frame.seq} at {frame.arrival_time} us is not a whole millisecond",
            )
        rows.append(f"{frame.seq} {frame.frame_type.value} {time_ms} {frame.size}\n")
    return "".join(rows)


def compute_stats(trace: VideoTrace) -> TraceStats:
    """Frame-size statistics; population standard deviation for the CoV."""
    sizes = trace.sizes
    mean_size = float(np.mean(sizes))
    std_size = float(np.std(sizes))
    max_size = int(np.max(sizes))

    total = int(np.sum(sizes))
    # Integer numerators keep CBR rates exact (e.g. 8000 bytes/40 ms -> 200000.0)
    mean_bit_rate = 8 * total * MICROSECONDS_PER_SECOND / (len(sizes) * trace.frame_interval)
    peak_bit_rate = 8 * max_size * MICROSECONDS_PER_SECOND / trace.frame_interval

    return TraceStats(
        mean_size=mean_size,
        max_size=max_size,
        std_size=std_size,
        cov=std_size / mean_size,
        mean_bit_rate=mean_bit_rate,
        peak_bit_rate=peak_bit_rate,
        peak_mean_ratio=peak_bit_rate / mean_bit_rate,
        frame_count=len(sizes),
    )


def generate_synthetic(
    mean_size: float,
    cov: float,
    frame_count: int,
    frame_interval: int,
    seed: int,
    max_size: Optional[int] = None,
    name: str = "synthetic",
) -> VideoTrace:
    """
    Draw i.i.d. lognormal frame sizes with the requested mean and CoV.

    With cov == 0 every frame is exactly mean_size bytes. Sizes are rounded
    to whole bytes, clamped to at least one byte and, if max_size is given,
    to at most max_size. Frame types follow the GoP pattern cyclically.
    """
    if mean_size < 1:
        raise ValidationError(field="mean_size", message="must be at least 1 byte")
    if cov < 0:
        raise ValidationError(field="cov", message="must be non-negative")
    if frame_count < 1:
        raise ValidationError(field="frame_count", message="must be at least 1")

    if cov == 0:
        sizes = np.full(frame_count, round(mean_size), dtype=np.int64)
    else:
        sigma = math.sqrt(math.log1p(cov * cov))
        mu = math.log(mean_size) - sigma * sigma / 2
        rng = np.random.default_rng(seed)
        sizes = np.rint(rng.lognormal(mu, sigma, frame_count)).astype(np.int64)

    sizes = np.maximum(sizes, 1)
    if max_size is not None:
        sizes = np.minimum(sizes, max_size)

    frames = tuple(
        VideoFrame(
            seq=i,
            frame_type=FrameType(GOP_PATTERN[i % len(GOP_PATTERN)]),
            arrival_time=i * frame_interval,
            size=int(size),
        )
        for i, size in enumerate(sizes)
    )
    return VideoTrace(name=name, frames=frames, frame_interval=frame_interval)
