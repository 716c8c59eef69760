"""
Evaluation metrics computed from a simulation event log.

Mean end-to-end delay runs over every delivered frame of every flow;
throughput counts delivered payload bits over the measurement window;
aggregate TXOP sums the durations granted at each poll.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from simulation.engine import EventLog, SimResult
from utils.consts import MICROSECONDS_PER_SECOND, EventKind
from utils.exceptions import MetricsError


@dataclass(frozen=True)
class MetricsBundle:
    mean_e2e_delay: float  # seconds, nan without samples
    delay_samples: int
    aggregate_throughput: float  # bits/second
    aggregate_txop: float  # seconds
    aggregate_used: float  # seconds
    wasted_txop: float  # seconds
    per_si_txop: List[Tuple[int, int, int]]  # (si_index, station_id, granted us)
    per_station_delay: List[Tuple[int, float]]  # (station_id, mean delay s)


def _delays_us(log: EventLog, warmup: int = 0) -> List[Tuple[int, int]]:
    return [
        (record.station_id, record.time - record.frame_gen_time)
        for record in log.of_kind(EventKind.DATA_RX)
        if record.frame_gen_time >= warmup
    ]


def mean_e2e_delay(log: EventLog, warmup: int = 0) -> float:
    """
    Mean delay in seconds from frame generation to reception at the QAP,
    over all flows. Frames generated before warmup are ignored.

    Raises:
        MetricsError: If the log holds no deliveries.
    """
    delays = _delays_us(log, warmup)
    if not delays:
        raise MetricsError(metric="mean_e2e_delay", message="no samples")
    return float(np.mean([delay for _, delay in delays])) / MICROSECONDS_PER_SECOND


def per_station_delay(log: EventLog, warmup: int = 0) -> List[Tuple[int, float]]:
    """Mean delay in seconds per station, ordered by station id."""
    by_station: Dict[int, List[int]] = defaultdict(list)
    for station_id, delay in _delays_us(log, warmup):
        by_station[station_id].append(delay)
    return [
        (station_id, float(np.mean(delays)) / MICROSECONDS_PER_SECOND)
        for station_id, delays in sorted(by_station.items())
    ]


def aggregate_throughput(log: EventLog, window: float) -> float:
    """Delivered payload in bits per second over a window given in seconds."""
    if window <= 0:
        raise MetricsError(metric="aggregate_throughput", message="window must be positive")
    delivered_bytes = sum(record.payload for record in log.of_kind(EventKind.DATA_RX))
    return 8 * delivered_bytes / window


def aggregate_txop(log: EventLog) -> float:
    """Total TXOP granted to all stations, in seconds."""
    granted = sum(record.granted_txop for record in log.of_kind(EventKind.POLL))
    return granted / MICROSECONDS_PER_SECOND


def aggregate_used(log: EventLog) -> float:
    """Total channel time stations actually used inside their TXOPs, in seconds."""
    used = sum(record.used_time for record in log.of_kind(EventKind.POLL))
    return used / MICROSECONDS_PER_SECOND


def wasted_txop(log: EventLog) -> float:
    """Granted but unused TXOP time, in seconds."""
    return aggregate_txop(log) - aggregate_used(log)


def channel_utilization(log: EventLog) -> float:
    """Share of granted TXOP time that carried frame exchanges."""
    granted = aggregate_txop(log)
    if granted == 0:
        return 0.0
    return aggregate_used(log) / granted


def per_si_txop(log: EventLog, station_id: int) -> List[Tuple[int, int]]:
    """
    (si_index, granted us) pairs for one station, in SI order.

    Raises:
        MetricsError: If the station was never polled.
    """
    series = [
        (record.si_index, record.granted_txop)
        for record in log.of_kind(EventKind.POLL)
        if record.station_id == station_id
    ]
    if not series:
        raise MetricsError(metric="per_si_txop", message=f"unknown station {station_id}")
    return series


def delay_improvement(hcca_delay: float, dyn_delay: float) -> float:
    """Relative delay reduction of the dynamic scheduler (0.5 means 50% lower)."""
    if hcca_delay <= 0:
        raise MetricsError(metric="delay_improvement", message="reference delay must be positive")
    return 1.0 - dyn_delay / hcca_delay


def compute_metrics(result: SimResult) -> MetricsBundle:
    """Full metric set of one run over its post-warmup window."""
    log = result.log
    warmup = result.config.warmup
    delays = _delays_us(log, warmup)
    granted = aggregate_txop(log)
    used = aggregate_used(log)

    return MetricsBundle(
        mean_e2e_delay=mean_e2e_delay(log, warmup) if delays else float("nan"),
        delay_samples=len(delays),
        aggregate_throughput=aggregate_throughput(log, result.window_seconds),
        aggregate_txop=granted,
        aggregate_used=used,
        wasted_txop=granted - used,
        per_si_txop=[
            (record.si_index, record.station_id, record.granted_txop)
            for record in log.of_kind(EventKind.POLL)
        ],
        per_station_delay=per_station_delay(log, warmup),
    )
