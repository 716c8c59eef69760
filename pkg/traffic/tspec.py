"""
TSPEC traffic specifications and their derivation from video traces.

Field names spell out the TSPEC symbols: nominal_size is L, max_size is M,
mean_rate is rho, delay_bound is D, phy_rate is R and max_service_interval
is MSI.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

from traffic.trace import VideoTrace, compute_stats
from utils.consts import MICROSECONDS_PER_SECOND
from utils.exceptions import ValidationError


@dataclass(frozen=True)
class Tspec:
    """Negotiated traffic specification of one uplink stream."""

    nominal_size: int  # L, bytes
    max_size: int  # M, bytes
    mean_rate: float  # rho, bits/second
    delay_bound: float  # D, seconds
    phy_rate: float  # R, bits/second
    max_service_interval: float  # MSI, seconds

    def __post_init__(self) -> None:
        if not 0 < self.nominal_size <= self.max_size:
            raise ValidationError(
                field="nominal_size",
                message=f"need 0 < L <= M, got L={self.nominal_size}, M={self.max_size}",
            )
        for field_name in ("mean_rate", "delay_bound", "phy_rate", "max_service_interval"):
            if getattr(self, field_name) <= 0:
                raise ValidationError(field=field_name, message="must be positive")
        if self.max_service_interval > self.delay_bound:
            raise ValidationError(
                field="max_service_interval",
                message=(
                    f"MSI {self.max_service_interval} s exceeds delay bound "
                    f"{self.delay_bound} s"
                ),
            )

    @property
    def msi_us(self) -> int:
        return round(self.max_service_interval * MICROSECONDS_PER_SECOND)

    def with_overrides(
        self,
        nominal_size: Optional[int] = None,
        max_size: Optional[int] = None,
        mean_rate: Optional[float] = None,
    ) -> "Tspec":
        """Copy with any of L, M or rho replaced; invariants are re-checked."""
        changes = {
            key: value
            for key, value in (
                ("nominal_size", nominal_size),
                ("max_size", max_size),
                ("mean_rate", mean_rate),
            )
            if value is not None
        }
        return replace(self, **changes)


def derive_tspec(trace: VideoTrace, msi: float, delay_bound: float, phy_rate: float) -> Tspec:
    """
    Build the TSPEC a station would request for a trace.

    L is the mean frame size rounded up to whole bytes, M the exact largest
    frame and rho the mean bit rate. MSI, D and R are supplied by the caller.

    Raises:
        ValidationError: If msi > delay_bound.
    """
    stats = compute_stats(trace)
    return Tspec(
        nominal_size=math.ceil(stats.mean_size),
        max_size=stats.max_size,
        mean_rate=stats.mean_bit_rate,
        delay_bound=delay_bound,
        phy_rate=phy_rate,
        max_service_interval=msi,
    )
