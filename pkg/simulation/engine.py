"""
Discrete-event simulation of HCCA polling over an ideal 802.11b channel.

The HC runs one polling round per service interval. Each round waits PIFS,
polls every admitted station in admission order and lets it send queued
frames (data + SIFS + ACK exchanges) while the granted TXOP covers them.
Every data frame piggybacks the size of the station's next trace frame in
the QS field; the dynamic scheduler sizes the next grant from it.

Round r nominally starts at beacon (r // x) plus (r mod x) SIs. A round that
is still running when its successor's nominal start passes delays that
successor; rounds are never skipped.

Times on the timeline are integer microseconds. Offsets inside one frame
exchange are exact fractions relative to the poll instant and are rounded
up when logged.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Deque, Dict, Iterator, List, Optional, Tuple

import numpy as np

from scheduling.mac import (
    PhyMacParams,
    ack_airtime,
    ceil_us,
    data_frame_airtime,
    poll_airtime,
)
from scheduling.scheduler import (
    BaseScheduler,
    StreamEntry,
    admit_streams,
    quantize_queue_size,
    scheduler_for,
    service_interval_divisor,
)
from traffic.trace import VideoFrame, VideoTrace
from traffic.tspec import Tspec
from utils.consts import MICROSECONDS_PER_SECOND, EventKind, SchedulerKind
from utils.exceptions import AdmissionError, ValidationError

logger = logging.getLogger(__name__)

EVENTS_HEADER = (
    "time_us",
    "kind",
    "station_id",
    "si_index",
    "granted_us",
    "used_us",
    "payload",
    "frame_gen_us",
)


# ---------------------------------------------------------------------------
# Configuration and results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StationSpec:
    """One uplink video source: its trace and the TSPEC it negotiates."""

    trace: VideoTrace
    tspec: Tspec


@dataclass
class SimConfig:
    """Scenario for one simulation run. Times are microseconds."""

    stations: List[StationSpec]
    scheduler: SchedulerKind = SchedulerKind.REFERENCE_HCCA
    beacon_interval: int = 160_000
    t_cp: int = 0
    mac: PhyMacParams = field(default_factory=PhyMacParams)
    sim_duration: int = 100_000_000
    warmup: int = 0
    loss_probability: float = 0.0
    qs_quantized: bool = False
    admission_control: bool = True
    seed: int = 1

    def validate(self) -> None:
        """
        Raises:
            ValidationError: If any scenario invariant is broken.
        """
        if not self.stations:
            raise ValidationError(field="stations", message="at least one station is required")
        if self.beacon_interval <= 0:
            raise ValidationError(field="beacon_interval", message="must be positive")
        if not 0 <= self.t_cp < self.beacon_interval:
            raise ValidationError(field="t_cp", message="must be in [0, beacon_interval)")
        if not 0 <= self.warmup < self.sim_duration:
            raise ValidationError(field="warmup", message="need 0 <= warmup < sim_duration")
        if not 0.0 <= self.loss_probability <= 1.0:
            raise ValidationError(field="loss_probability", message="must be within [0, 1]")


@dataclass(frozen=True)
class EventRecord:
    time: int
    kind: EventKind
    station_id: Optional[int] = None
    si_index: int = 0
    granted_txop: int = 0
    used_time: int = 0
    payload: int = 0
    frame_gen_time: int = 0

    def to_row(self) -> Tuple:
        return (
            self.time,
            self.kind.value,
            "" if self.station_id is None else self.station_id,
            self.si_index,
            self.granted_txop,
            self.used_time,
            self.payload,
            self.frame_gen_time,
        )


class EventLog:
    """Append-only, time-ordered list of simulation records."""

    def __init__(self, records: Optional[List[EventRecord]] = None) -> None:
        self.records: List[EventRecord] = list(records or [])

    def append(self, record: EventRecord) -> None:
        if self.records and record.time < self.records[-1].time:
            raise ValidationError(
                field="time",
                message=f"record at {record.time} after {self.records[-1].time}",
            )
        self.records.append(record)

    def of_kind(self, kind: EventKind) -> List[EventRecord]:
        return [record for record in self.records if record.kind is kind]

    def to_rows(self) -> List[Tuple]:
        return [record.to_row() for record in self.records]

    def __iter__(self) -> Iterator[EventRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class StationSummary:
    station_id: int
    generated: int
    delivered: int
    queued: int


@dataclass
class SimResult:
    log: EventLog
    admitted: List[int]
    rejected: List[int]
    si: int
    config: SimConfig
    stations: List[StationSummary] = field(default_factory=list)

    @property
    def window_seconds(self) -> float:
        """Measurement window after warmup."""
        return (self.config.sim_duration - self.config.warmup) / MICROSECONDS_PER_SECOND


# ---------------------------------------------------------------------------
# Station model
# ---------------------------------------------------------------------------

@dataclass
class QueuedFrame:
    frame: VideoFrame
    enqueue_time: int  # generation time at the application layer
    trace_index: int


@dataclass
class StationState:
    """
    A QSTA replaying its trace from start_time. The trace repeats
    cyclically, each pass offset by the trace span.
    """

    id: int
    trace: VideoTrace
    tspec: Tspec
    start_time: int
    rng: np.random.Generator
    entry: Optional[StreamEntry] = None
    queue: Deque[QueuedFrame] = field(default_factory=deque)
    next_trace_index: int = 0
    cycle: int = 0
    generated: int = 0
    delivered: int = 0
    blocked_warned: bool = False

    def next_arrival(self) -> int:
        frame = self.trace.frames[self.next_trace_index]
        offset = frame.arrival_time - self.trace.frames[0].arrival_time
        return self.start_time + self.cycle * self.trace.span + offset

    def enqueue_arrivals(self, now: int, horizon: int) -> None:
        """Queue every frame generated at or before now and strictly before horizon."""
        while True:
            arrival = self.next_arrival()
            if arrival > now or arrival >= horizon:
                return
            frame = self.trace.frames[self.next_trace_index]
            self.queue.append(QueuedFrame(frame, arrival, self.next_trace_index))
            self.generated += 1
            self.next_trace_index += 1
            if self.next_trace_index == len(self.trace):
                self.next_trace_index = 0
                self.cycle += 1
                if self.cycle == 1:
                    logger.warning(f"Station {self.id}: trace '{self.trace.name}' exhausted, repeating")

    def size_after(self, trace_index: int) -> int:
        """Size of the trace frame following trace_index (the QS-field lookahead)."""
        return self.trace.frames[(trace_index + 1) % len(self.trace)].size

    def frame_lost(self, loss_probability: float) -> bool:
        if loss_probability <= 0.0:
            return False
        if loss_probability >= 1.0:
            return True
        return bool(self.rng.random() < loss_probability)


# ---------------------------------------------------------------------------
# Simulator
# ---------------------------------------------------------------------------

class HccaSimulator:
    """Runs one SimConfig to completion and collects the event log."""

    def __init__(self, config: SimConfig) -> None:
        config.validate()
        self.config = config
        self.mac: PhyMacParams = config.mac
        self.log = EventLog()

        self._poll_airtime = poll_airtime(self.mac)
        self._ack_airtime = ack_airtime(self.mac)
        self._data_airtime = lru_cache(maxsize=None)(
            lambda size: data_frame_airtime(size, self.mac)
        )

        self.stations: Dict[int, StationState] = {
            station_id: StationState(
                id=station_id,
                trace=spec.trace,
                tspec=spec.tspec,
                start_time=config.warmup,
                rng=np.random.default_rng([config.seed, station_id]),
            )
            for station_id, spec in enumerate(config.stations, start=1)
        }

        self.divisor = service_interval_divisor(
            config.beacon_interval, [station.tspec.msi_us for station in self.stations.values()]
        )
        self.si = config.beacon_interval // self.divisor
        self.scheduler: BaseScheduler = scheduler_for(config.scheduler, self.si, self.mac)

        self.entries, self.rejected = admit_streams(
            [(station.id, station.tspec) for station in self.stations.values()],
            si=self.si,
            beacon_interval=config.beacon_interval,
            t_cp=config.t_cp,
            mac=self.mac,
            enforce=config.admission_control,
        )
        if not self.entries:
            raise AdmissionError("empty polling list")
        for entry in self.entries:
            self.stations[entry.station_id].entry = entry

    # ------------------------------------------------------------------
    def nominal_start(self, round_index: int) -> int:
        beacon, slot = divmod(round_index, self.divisor)
        return beacon * self.config.beacon_interval + slot * self.si

    def first_round(self) -> int:
        """First round whose nominal start is not before warmup (TS setup)."""
        beacon, into_beacon = divmod(self.config.warmup, self.config.beacon_interval)
        slot = -(-into_beacon // self.si)
        if slot >= self.divisor:
            beacon, slot = beacon + 1, 0
        return beacon * self.divisor + slot

    # ------------------------------------------------------------------
    def _serve(
        self, station: StationState, grant: int, poll_at: int, si_index: int
    ) -> Tuple[int, List[EventRecord]]:
        """
        Frame exchanges of one TXOP. Returns the channel time used (rounded
        up) and the DataRx/Ack/Drop records, and updates HC-side feedback.
        """
        config = self.config
        sifs = self.mac.sifs
        offset: Fraction = self._poll_airtime
        used: Fraction = offset
        feedback: Optional[int] = None
        lost = False
        records: List[EventRecord] = []

        while station.queue:
            head = station.queue[0]
            data_end = offset + sifs + self._data_airtime(head.frame.size)
            ack_end = data_end + sifs + self._ack_airtime
            if ack_end > grant:
                if offset == self._poll_airtime and not station.blocked_warned:
                    logger.warning(
                        f"Station {station.id}: {head.frame.size}-byte frame does not fit a {grant} us TXOP, "
                        f"queue is blocked"
                    )
                    station.blocked_warned = True
                break

            used = ack_end
            common = dict(
                station_id=station.id,
                si_index=si_index,
                granted_txop=grant,
                used_time=ceil_us(ack_end),
                payload=head.frame.size,
                frame_gen_time=head.enqueue_time,
            )

            if station.frame_lost(config.loss_probability):
                # Head stays queued for the next SI; the station gives up the TXOP
                records.append(EventRecord(time=poll_at + ceil_us(data_end), kind=EventKind.DROP, **common))
                lost = True
                break

            station.queue.popleft()
            station.delivered += 1
            records.append(EventRecord(time=poll_at + ceil_us(data_end), kind=EventKind.DATA_RX, **common))
            records.append(EventRecord(time=poll_at + ceil_us(ack_end), kind=EventKind.ACK, **common))

            next_size = station.size_after(head.trace_index)
            feedback = quantize_queue_size(next_size) if config.qs_quantized else next_size
            offset = ack_end

        station.entry.feedback_size = None if lost else feedback
        return ceil_us(used), records

    # ------------------------------------------------------------------
    def run(self) -> SimResult:
        config = self.config
        horizon = config.sim_duration
        first = self.first_round()
        round_index = first
        clock = 0
        overbooked_rounds = 0

        logger.info(
            f"Running {config.scheduler.value} with {len(self.entries)} admitted / "
            f"{len(self.rejected)} rejected stations, SI {self.si} us"
        )

        while True:
            start = max(self.nominal_start(round_index), clock)
            if start >= horizon:
                break
            si_index = round_index - first

            if round_index % self.divisor == 0:
                self.log.append(EventRecord(time=start, kind=EventKind.BEACON, si_index=si_index))
            self.log.append(EventRecord(time=start, kind=EventKind.SI_START, si_index=si_index))

            plan = self.scheduler.plan(self.entries)
            if plan.overbooked:
                overbooked_rounds += 1

            cursor = start
            for station_id, grant in plan.grants:
                station = self.stations[station_id]
                poll_at = cursor + self.mac.pifs
                station.enqueue_arrivals(poll_at, horizon)

                used, records = self._serve(station, grant, poll_at, si_index)
                self.log.append(
                    EventRecord(
                        time=poll_at,
                        kind=EventKind.POLL,
                        station_id=station_id,
                        si_index=si_index,
                        granted_txop=grant,
                        used_time=used,
                    )
                )
                for record in records:
                    self.log.append(record)

                cursor = poll_at + self.scheduler.txop_span(grant, used)
                self.log.append(
                    EventRecord(
                        time=cursor,
                        kind=EventKind.TXOP_END,
                        station_id=station_id,
                        si_index=si_index,
                        granted_txop=grant,
                        used_time=used,
                    )
                )

            clock = cursor
            round_index += 1

        if overbooked_rounds:
            logger.warning(f"{overbooked_rounds} polling rounds granted more than one SI of TXOPs")

        summaries = []
        for entry in self.entries:
            station = self.stations[entry.station_id]
            station.enqueue_arrivals(horizon, horizon)
            summaries.append(
                StationSummary(
                    station_id=station.id,
                    generated=station.generated,
                    delivered=station.delivered,
                    queued=len(station.queue),
                )
            )

        logger.info(
            f"Run finished after {round_index - first} rounds: "
            f"{sum(s.delivered for s in summaries)} frames delivered, "
            f"{sum(s.queued for s in summaries)} still queued"
        )
        return SimResult(
            log=self.log,
            admitted=[entry.station_id for entry in self.entries],
            rejected=list(self.rejected),
            si=self.si,
            config=config,
            stations=summaries,
        )


def run(config: SimConfig) -> SimResult:
    """Simulate a scenario; deterministic for a given config and seed."""
    return HccaSimulator(config).run()
