"""
Scheduling equations, admission control and the two HC schedulers.
"""

import allure
import pytest

from scheduling.mac import PhyMacParams
from scheduling.scheduler import (
    DynamicTxopScheduler,
    PollPlan,
    ReferenceHccaScheduler,
    StreamEntry,
    admit,
    admit_streams,
    compute_n,
    compute_si,
    compute_txop_dyn,
    compute_txop_ref,
    next_grant,
    quantize_queue_size,
    scheduler_for,
    service_interval_divisor,
)
from traffic.tspec import Tspec
from utils.consts import SchedulerKind
from utils.exceptions import ValidationError

pytestmark = pytest.mark.unit

SI = 40_000
BEACON = 160_000


def _tspec(nominal_size: int, max_size: int, mean_rate: float) -> Tspec:
    return Tspec(
        nominal_size=nominal_size,
        max_size=max_size,
        mean_rate=mean_rate,
        delay_bound=0.08,
        phy_rate=11e6,
        max_service_interval=0.04,
    )


JURASSIC_HIGH = _tspec(3800, 16745, 7.7e5)
JURASSIC_LOW = _tspec(770, 8154, 1.5e5)
CBR_1000 = _tspec(1000, 1000, 2e5)


# ============================================================================
# Service interval and MSDU count
# ============================================================================
@allure.feature("Scheduler")
@allure.story("Service interval")
@pytest.mark.parametrize(
    "beacon, msis, expected",
    [
        (160_000, [40_000, 40_000], 40_000),
        (100_000, [60_000, 50_000], 50_000),
        (100_000, [100_000], 100_000),
        (160_000, [30_000], 26_666),
    ],
)
def test_compute_si(beacon, msis, expected):
    """SI is the beacon interval split by the smallest MSI."""
    assert compute_si(beacon, msis) == expected


@allure.story("Service interval")
def test_divisor_and_bad_input():
    """Divisor edge cases and invalid inputs."""
    assert service_interval_divisor(160_000, [40_000]) == 4
    assert service_interval_divisor(100_000, [200_000]) == 1
    with pytest.raises(ValidationError):
        compute_si(160_000, [])


@allure.story("MSDU count")
@pytest.mark.parametrize("tspec, expected", [(JURASSIC_HIGH, 2), (JURASSIC_LOW, 1), (CBR_1000, 1)])
def test_compute_n(tspec: Tspec, expected: int):
    """MSDUs arriving in one SI at the mean rate."""
    assert compute_n(SI, tspec) == expected


# ============================================================================
# TXOP sizing
# ============================================================================
@allure.story("Reference TXOP")
def test_reference_txop_jurassic_high(mac: PhyMacParams):
    """Jurassic-high reference TXOP at a 40 ms SI."""
    # payload branch 5527.27 + O(2) = 7092; max branch 12178.18 + O(1) = 13201
    assert compute_txop_ref(JURASSIC_HIGH, SI, mac) == 13_201


@allure.story("Reference TXOP")
def test_reference_txop_when_l_equals_m(mac: PhyMacParams):
    """With L equal to M both branches coincide."""
    assert compute_txop_ref(CBR_1000, SI, mac) == compute_txop_dyn(1000, 11e6, mac) == 1750


@allure.story("Dynamic TXOP")
@pytest.mark.parametrize("size, expected", [(7581, 6536), (1000, 1750), (1, 1023)])
def test_dynamic_txop(mac: PhyMacParams, size: int, expected: int):
    """Dynamic TXOP for a single reported frame."""
    assert compute_txop_dyn(size, 11e6, mac) == expected


@allure.story("Dynamic TXOP")
def test_dynamic_txop_at_max_size_equals_max_branch(mac: PhyMacParams):
    """A frame of size M gets the reference TXOP."""
    assert compute_txop_dyn(JURASSIC_HIGH.max_size, 11e6, mac) == compute_txop_ref(JURASSIC_HIGH, SI, mac)


@allure.story("Dynamic TXOP")
def test_dynamic_txop_rejects_empty_frame(mac: PhyMacParams):
    """A zero-byte frame has no dynamic TXOP."""
    with pytest.raises(ValidationError):
        compute_txop_dyn(0, 11e6, mac)


# ============================================================================
# Admission control
# ============================================================================
@allure.story("Admission")
def test_admit_far_from_bound():
    """A lone small stream is admitted."""
    assert admit([], 12_000, SI, BEACON, t_cp=0)


@allure.story("Admission")
def test_admit_equality_accepts_and_one_microsecond_over_rejects():
    """Exact arithmetic at the admission bound."""
    existing = [(8000, SI)] * 4
    assert admit(existing, 8000, SI, BEACON, t_cp=0)
    assert not admit(existing, 8001, SI, BEACON, t_cp=0)


@allure.story("Admission")
def test_admit_sixth_stream_rejected():
    """A sixth 8 ms stream exceeds the bound."""
    assert not admit([(8000, SI)] * 5, 8000, SI, BEACON, t_cp=0)


@allure.story("Admission")
def test_admit_reserves_contention_period():
    """A contention period lowers the admission bound."""
    # T_CP = 16 ms leaves 90% of the beacon interval
    assert admit([], 36_000, SI, BEACON, t_cp=16_000)
    assert not admit([], 36_001, SI, BEACON, t_cp=16_000)
    with pytest.raises(ValidationError):
        admit([], 1000, SI, BEACON, t_cp=BEACON)


@allure.story("Admission")
def test_admit_streams_in_order(mac: PhyMacParams):
    """Streams are admitted in listed order until one no longer fits."""
    tspecs = [(station_id, JURASSIC_HIGH) for station_id in range(1, 5)]
    entries, rejected = admit_streams(tspecs, SI, BEACON, 0, mac)
    assert [entry.station_id for entry in entries] == [1, 2, 3]
    assert rejected == [4]
    assert all(entry.admitted_txop == 13_201 for entry in entries)

    entries, rejected = admit_streams(tspecs, SI, BEACON, 0, mac, enforce=False)
    assert len(entries) == 4 and rejected == []


@allure.story("Admission")
@pytest.mark.parametrize("frame_size, admitted", [(12_303, 4), (12_344, 3)])
def test_admit_streams_charges_pifs_per_poll(mac: PhyMacParams, frame_size: int, admitted: int):
    """Four streams fit only if their TXOPs plus one PIFS each fit the SI."""
    cbr = _tspec(frame_size, frame_size, 200 * frame_size)  # one frame per 40 ms
    entries, rejected = admit_streams([(i, cbr) for i in range(1, 5)], SI, BEACON, 0, mac)
    assert len(entries) == admitted
    assert len(rejected) == 4 - admitted
    assert sum(entry.admitted_txop + mac.pifs for entry in entries) <= SI


# ============================================================================
# Grants
# ============================================================================
@allure.story("Grants")
def test_next_grant_dynamic(mac: PhyMacParams):
    """Dynamic grant from feedback, reference grant without it."""
    entry = StreamEntry(station_id=1, tspec=JURASSIC_HIGH, admitted_txop=13_201, feedback_size=7581)
    assert next_grant(entry, SchedulerKind.DYNAMIC_TXOP, SI, mac) == 6536
    entry.feedback_size = None
    assert next_grant(entry, SchedulerKind.DYNAMIC_TXOP, SI, mac) == compute_txop_ref(JURASSIC_HIGH, SI, mac)


@allure.story("Grants")
@pytest.mark.parametrize("feedback", [None, 1, 7581, 16745])
def test_next_grant_reference_ignores_feedback(mac: PhyMacParams, feedback):
    """The reference scheduler ignores queue-size feedback."""
    entry = StreamEntry(station_id=1, tspec=JURASSIC_HIGH, admitted_txop=13_201, feedback_size=feedback)
    assert next_grant(entry, SchedulerKind.REFERENCE_HCCA, SI, mac) == 13_201


@allure.story("Grants")
def test_scheduler_spans(mac: PhyMacParams):
    """Reference TXOPs hold the channel for the grant, dynamic ones for the used time."""
    assert isinstance(scheduler_for(SchedulerKind.REFERENCE_HCCA, SI, mac), ReferenceHccaScheduler)
    assert ReferenceHccaScheduler(SI, mac).txop_span(granted=5000, used=1200) == 5000
    assert DynamicTxopScheduler(SI, mac).txop_span(granted=5000, used=1200) == 1200


@allure.story("Grants")
def test_plan_flags_overbooking(mac: PhyMacParams):
    """Four Jurassic grants overbook one SI."""
    entries = [StreamEntry(station_id=i, tspec=JURASSIC_HIGH, admitted_txop=13_201) for i in (1, 2, 3, 4)]
    plan = ReferenceHccaScheduler(SI, mac).plan(entries)
    assert plan.grants == tuple((i, 13_201) for i in (1, 2, 3, 4))
    assert plan.total_txop == 52_804
    assert plan.overbooked
    assert not PollPlan(si=SI, grants=((1, 13_201),)).overbooked
    assert plan.channel_time == 52_804 + 4 * mac.pifs


@allure.story("Grants")
def test_plan_counts_poll_gaps_as_channel_time():
    """Grants that fill the SI exactly are overbooked once the PIFS gaps are added."""
    grants = tuple((i, 10_000) for i in (1, 2, 3, 4))
    assert not PollPlan(si=SI, grants=grants).overbooked
    assert PollPlan(si=SI, grants=grants, pifs=30).overbooked
    assert not PollPlan(si=SI, grants=tuple((i, 9970) for i in (1, 2, 3, 4)), pifs=30).overbooked


@allure.story("Grants")
def test_stream_entry_validation():
    """A stream entry needs a positive TXOP."""
    with pytest.raises(ValidationError):
        StreamEntry(station_id=1, tspec=CBR_1000, admitted_txop=0)


@allure.story("Queue size field")
@pytest.mark.parametrize(
    "size, expected", [(1, 256), (256, 256), (257, 512), (1000, 1024), (100_000, 65_280)]
)
def test_quantize_queue_size(size: int, expected: int):
    """QS field rounding and cap."""
    assert quantize_queue_size(size) == expected
