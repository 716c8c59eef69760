"""
HCCA scheduling mathematics and the two HC schedulers.

The module-level functions are the scheduling equations: service interval
selection, MSDU count per SI, the reference TXOP, the dynamic TXOP driven
by QS-field feedback, and the admission test. The scheduler classes wrap
them behind one interface the engine polls once per SI.

Units: byte sizes are multiplied by 8 against rates in bits/second; all
durations are whole microseconds, rounded up.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from scheduling.mac import PhyMacParams, bits_airtime, ceil_us, overhead_airtime
from traffic.tspec import Tspec
from utils.consts import MICROSECONDS_PER_SECOND, QS_MAX_UNITS, QS_UNIT_BYTES, SchedulerKind
from utils.exceptions import ValidationError

logger = logging.getLogger(__name__)


@dataclass
class StreamEntry:
    """HC-side polling list entry for one admitted traffic stream."""

    station_id: int
    tspec: Tspec
    admitted_txop: int  # microseconds, frozen at admission
    feedback_size: Optional[int] = None  # bytes reported in the QS field

    def __post_init__(self) -> None:
        if self.admitted_txop <= 0:
            raise ValidationError(field="admitted_txop", message="must be positive")
        if self.feedback_size is not None and self.feedback_size < 1:
            raise ValidationError(field="feedback_size", message="must be at least 1 byte")


@dataclass(frozen=True)
class PollPlan:
    """Grants for one service interval, in polling order."""

    si: int
    grants: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)
    pifs: int = 0

    @property
    def total_txop(self) -> int:
        return sum(txop for _, txop in self.grants)

    @property
    def channel_time(self) -> int:
        """Grants plus the PIFS before each poll."""
        return self.total_txop + self.pifs * len(self.grants)

    @property
    def overbooked(self) -> bool:
        return self.channel_time > self.si


# ---------------------------------------------------------------------------
# Scheduling equations
# ---------------------------------------------------------------------------

def service_interval_divisor(beacon_interval: int, msis: Sequence[int]) -> int:
    """Smallest positive x with beacon_interval / x <= min(msis)."""
    if not msis:
        raise ValidationError(field="msis", message="at least one MSI is required")
    if beacon_interval <= 0 or any(msi <= 0 for msi in msis):
        raise ValidationError(field="msis", message="beacon interval and MSIs must be positive")
    msi_min = min(msis)
    return max(1, -(-beacon_interval // msi_min))


def compute_si(beacon_interval: int, msis: Sequence[int]) -> int:
    """Service interval: the beacon interval split x ways, floored to whole microseconds."""
    return beacon_interval // service_interval_divisor(beacon_interval, msis)


def compute_n(si: int, tspec: Tspec) -> int:
    """Number of nominal MSDUs arriving at the mean rate during one SI (at least 1)."""
    if si <= 0:
        raise ValidationError(field="si", message="must be positive")
    arrived_bits = Fraction(si) * Fraction(tspec.mean_rate) / MICROSECONDS_PER_SECOND
    return max(1, math.ceil(arrived_bits / (8 * tspec.nominal_size)))


def compute_txop_ref(tspec: Tspec, si: int, mac: PhyMacParams) -> int:
    """
    Reference HCCA TXOP: the larger of N nominal MSDUs or one maximum MSDU,
    each with its overhead, at the stream's PHY rate.
    """
    n = compute_n(si, tspec)
    payload_branch = n * bits_airtime(tspec.nominal_size, tspec.phy_rate) + overhead_airtime(n, mac)
    max_branch = bits_airtime(tspec.max_size, tspec.phy_rate) + overhead_airtime(1, mac)
    return ceil_us(max(payload_branch, max_branch))


def compute_txop_dyn(size: int, phy_rate: float, mac: PhyMacParams) -> int:
    """Dynamic TXOP sized for exactly one MSDU of the reported size."""
    if size < 1:
        raise ValidationError(field="size", message="must be at least 1 byte")
    return ceil_us(bits_airtime(size, phy_rate) + overhead_airtime(1, mac))


def admit(
    existing: Sequence[Tuple[int, int]],
    candidate_txop: int,
    si: int,
    beacon_interval: int,
    t_cp: int,
) -> bool:
    """
    Admission test: the candidate's and the admitted streams' TXOP/SI shares
    must not exceed the contention-free share of the beacon interval.
    Evaluated with exact rationals, so equality is accepted deterministically.
    """
    if si <= 0:
        raise ValidationError(field="si", message="must be positive")
    if not 0 <= t_cp < beacon_interval:
        raise ValidationError(field="t_cp", message="must be in [0, beacon_interval)")

    demand = Fraction(candidate_txop, si) + sum(
        (Fraction(txop, stream_si) for txop, stream_si in existing), Fraction(0)
    )
    return demand <= Fraction(beacon_interval - t_cp, beacon_interval)


def quantize_queue_size(size: int) -> int:
    """QS-field value as read by the HC: 256-byte units, rounded up, 8-bit cap."""
    units = min(-(-size // QS_UNIT_BYTES), QS_MAX_UNITS)
    return max(units, 1) * QS_UNIT_BYTES


# ---------------------------------------------------------------------------
# Schedulers
# ---------------------------------------------------------------------------

class BaseScheduler:
    """
    Generic HC scheduler. Subclasses decide the grant for a polling list
    entry and how much channel time a granted TXOP holds.
    """

    kind: SchedulerKind

    def __init__(self, si: int, mac: PhyMacParams) -> None:
        if si <= 0:
            raise ValidationError(field="si", message="must be positive")
        self.si = si
        self.mac = mac
        self._reference_grants: Dict[int, int] = {}

    def reference_grant(self, entry: StreamEntry) -> int:
        if entry.station_id not in self._reference_grants:
            self._reference_grants[entry.station_id] = compute_txop_ref(entry.tspec, self.si, self.mac)
        return self._reference_grants[entry.station_id]

    def grant(self, entry: StreamEntry) -> int:
        raise NotImplementedError

    def txop_span(self, granted: int, used: int) -> int:
        """Channel time between the poll and the end of the TXOP."""
        raise NotImplementedError

    def plan(self, entries: Sequence[StreamEntry]) -> PollPlan:
        """Grants for the next SI, polling entries in admission order."""
        grants = tuple((entry.station_id, self.grant(entry)) for entry in entries)
        poll_plan = PollPlan(si=self.si, grants=grants, pifs=self.mac.pifs)
        if poll_plan.overbooked:
            logger.debug(f"Poll plan overbooked: {poll_plan.channel_time} us of channel time in a {self.si} us SI")
        return poll_plan


class ReferenceHccaScheduler(BaseScheduler):
    """
    Reference HCCA scheduler: every stream keeps the TXOP computed at
    admission, and the next poll waits for the whole TXOP to elapse.
    """

    kind = SchedulerKind.REFERENCE_HCCA

    def grant(self, entry: StreamEntry) -> int:
        return entry.admitted_txop

    def txop_span(self, granted: int, used: int) -> int:
        return granted


class DynamicTxopScheduler(BaseScheduler):
    """
    Feedback-driven scheduler: the TXOP covers the next frame size reported
    in the QS field; without feedback (first CAP, loss) it falls back to the
    reference TXOP. Polls follow each other as soon as an exchange ends.
    """

    kind = SchedulerKind.DYNAMIC_TXOP

    def __init__(self, si: int, mac: PhyMacParams) -> None:
        super().__init__(si, mac)
        self._dynamic_grants: Dict[Tuple[int, float], int] = {}

    def grant(self, entry: StreamEntry) -> int:
        if entry.feedback_size is None:
            return self.reference_grant(entry)
        key = (entry.feedback_size, entry.tspec.phy_rate)
        if key not in self._dynamic_grants:
            self._dynamic_grants[key] = compute_txop_dyn(entry.feedback_size, entry.tspec.phy_rate, self.mac)
        return self._dynamic_grants[key]

    def txop_span(self, granted: int, used: int) -> int:
        return used


_SCHEDULERS = {
    ReferenceHccaScheduler.kind: ReferenceHccaScheduler,
    DynamicTxopScheduler.kind: DynamicTxopScheduler,
}


def scheduler_for(kind: SchedulerKind, si: int, mac: PhyMacParams) -> BaseScheduler:
    return _SCHEDULERS[kind](si, mac)


def next_grant(entry: StreamEntry, kind: SchedulerKind, si: int, mac: PhyMacParams) -> int:
    """TXOP the HC grants to entry at its next poll under the given scheduler."""
    return scheduler_for(kind, si, mac).grant(entry)


def admit_streams(
    tspecs: Sequence[Tuple[int, Tspec]],
    si: int,
    beacon_interval: int,
    t_cp: int,
    mac: PhyMacParams,
    enforce: bool = True,
) -> Tuple[List[StreamEntry], List[int]]:
    """
    Run admission control over (station_id, tspec) pairs in listed order.

    Each stream is charged its reference TXOP plus the PIFS that precedes
    its poll, so an admitted set always fits one SI. Returns the polling
    list and the ids of rejected stations. With enforce=False every stream
    is admitted.
    """
    admitted: List[StreamEntry] = []
    rejected: List[int] = []
    for station_id, tspec in tspecs:
        txop = compute_txop_ref(tspec, si, mac)
        existing = [(entry.admitted_txop + mac.pifs, si) for entry in admitted]
        if not enforce or admit(existing, txop + mac.pifs, si, beacon_interval, t_cp):
            admitted.append(StreamEntry(station_id=station_id, tspec=tspec, admitted_txop=txop))
            logger.info(f"Station {station_id} admitted with TXOP {txop} us (SI {si} us)")
        else:
            rejected.append(station_id)
            logger.info(f"Station {station_id} rejected: TXOP {txop} us does not fit")
    return admitted, rejected
