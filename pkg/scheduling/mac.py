"""
802.11b PHY / 802.11e MAC timing model.

Two flavours of every duration are provided:

- ``*_airtime`` functions return the exact duration in microseconds as a
  ``Fraction``. The engine and the TXOP formulas compose these so that no
  rounding error accumulates inside a frame exchange.
- ``*_time`` functions (and ``overhead_O``) return the same duration rounded
  up to whole microseconds.

Control frames (poll, ACK) go out at the basic rate; data frames at the data
rate. Every frame carries the long PHY preamble and PLCP header sent at the
PLCP rate.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from utils.consts import MICROSECONDS_PER_SECOND
from utils.exceptions import ValidationError


@dataclass(frozen=True)
class PhyMacParams:
    """Timing constants; defaults are the 802.11b/e simulation parameters."""

    sifs: int = 10  # microseconds
    pifs: int = 30  # microseconds
    slot: int = 20  # microseconds
    preamble_len: int = 18  # bytes
    plcp_hdr_len: int = 6  # bytes
    plcp_rate: float = 1e6  # bits/second
    mac_hdr_len: int = 36  # bytes
    data_rate: float = 11e6  # bits/second
    basic_rate: float = 1e6  # bits/second
    ack_len: int = 14  # bytes
    poll_len: int = 36  # bytes, QoS Data+CF-Poll header

    def __post_init__(self) -> None:
        for field_name in ("sifs", "pifs", "slot", "plcp_rate", "data_rate", "basic_rate"):
            if getattr(self, field_name) <= 0:
                raise ValidationError(field=field_name, message="must be positive")
        for field_name in ("preamble_len", "plcp_hdr_len", "mac_hdr_len", "ack_len", "poll_len"):
            if getattr(self, field_name) < 0:
                raise ValidationError(field=field_name, message="must be non-negative")
        if self.pifs <= self.sifs:
            raise ValidationError(field="pifs", message="PIFS must be longer than SIFS")


def bits_airtime(n_bytes: int, rate: float) -> Fraction:
    """Exact time in microseconds to send n_bytes at rate bits/second."""
    return Fraction(8 * n_bytes * MICROSECONDS_PER_SECOND) / Fraction(rate)


def ceil_us(duration: Fraction) -> int:
    return math.ceil(duration)


# ---------------------------------------------------------------------------
# Exact airtimes
# ---------------------------------------------------------------------------

def phy_header_airtime(p: PhyMacParams) -> Fraction:
    return bits_airtime(p.preamble_len + p.plcp_hdr_len, p.plcp_rate)


def data_frame_airtime(payload: int, p: PhyMacParams) -> Fraction:
    if payload < 0:
        raise ValidationError(field="payload", message="must be non-negative")
    return phy_header_airtime(p) + bits_airtime(p.mac_hdr_len + payload, p.data_rate)


def ack_airtime(p: PhyMacParams) -> Fraction:
    return phy_header_airtime(p) + bits_airtime(p.ack_len, p.basic_rate)


def poll_airtime(p: PhyMacParams) -> Fraction:
    return phy_header_airtime(p) + bits_airtime(p.poll_len, p.basic_rate)


def overhead_airtime(n_msdus: int, p: PhyMacParams) -> Fraction:
    """
    Exact overhead of a TXOP carrying n_msdus data frames.

    poll + SIFS + n x (data headers + SIFS + ACK + SIFS), minus the SIFS
    that would follow the last ACK. The PIFS ahead of the poll is not part
    of the TXOP.
    """
    if n_msdus < 1:
        raise ValidationError(field="n_msdus", message="must be at least 1")
    per_msdu = data_frame_airtime(0, p) + p.sifs + ack_airtime(p) + p.sifs
    return poll_airtime(p) + p.sifs + n_msdus * per_msdu - p.sifs


# ---------------------------------------------------------------------------
# Whole-microsecond durations
# ---------------------------------------------------------------------------

def phy_header_time(p: PhyMacParams) -> int:
    """Preamble plus PLCP header at the PLCP rate (192 us with defaults)."""
    return ceil_us(phy_header_airtime(p))


def data_frame_time(payload: int, p: PhyMacParams) -> int:
    """PHY header plus MAC header and payload at the data rate, rounded up."""
    return ceil_us(data_frame_airtime(payload, p))


def ack_time(p: PhyMacParams) -> int:
    return ceil_us(ack_airtime(p))


def poll_time(p: PhyMacParams) -> int:
    return ceil_us(poll_airtime(p))


def overhead_O(n_msdus: int, p: PhyMacParams) -> int:
    """Overhead term O of the TXOP formulas, rounded up to whole microseconds."""
    return ceil_us(overhead_airtime(n_msdus, p))
