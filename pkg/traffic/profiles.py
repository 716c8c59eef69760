"""
Built-in video profiles matching the published MPEG-4 trace statistics.

Each profile pairs the frame-size statistics of a movie/quality combination
with the TSPEC parameters negotiated for it, so experiments can run on
synthetic traces when the original trace library is not available.
"""

from dataclasses import dataclass
from typing import Dict, List

from traffic.trace import VideoTrace, generate_synthetic
from traffic.tspec import Tspec
from utils.exceptions import ConfigurationError

FRAME_INTERVAL_US = 40_000
DELAY_BOUND_S = 0.08
PHY_RATE_BPS = 11e6
MSI_S = 0.04


@dataclass(frozen=True)
class VideoProfile:
    """Frame statistics and TSPEC of one encoded video."""

    name: str
    title: str
    quality: str
    mean_size: float  # bytes
    cov: float
    max_size: int  # M, bytes
    mean_bit_rate: float  # bits/second, as published
    peak_bit_rate: float  # bits/second, as published

    def tspec(self) -> Tspec:
        """The TSPEC negotiated for this profile."""
        return Tspec(
            nominal_size=round(self.mean_size),
            max_size=self.max_size,
            mean_rate=self.mean_bit_rate,
            delay_bound=DELAY_BOUND_S,
            phy_rate=PHY_RATE_BPS,
            max_service_interval=MSI_S,
        )


_PROFILES: Dict[str, VideoProfile] = {
    profile.name: profile
    for profile in (
        VideoProfile("jurassic_low", "Jurassic Park 1", "low", 770, 1.39, 8154, 1.5e5, 1.6e6),
        VideoProfile("jurassic_high", "Jurassic Park 1", "high", 3800, 0.59, 16745, 7.7e5, 3.3e6),
        VideoProfile("formula1_low", "Formula 1", "low", 870, 1.12, 7032, 1.7e5, 1.4e6),
        VideoProfile("formula1_high", "Formula 1", "high", 4200, 0.42, 14431, 8.4e5, 2.9e6),
    )
}


def list_profiles() -> List[VideoProfile]:
    return list(_PROFILES.values())


def get_profile(name: str) -> VideoProfile:
    """
    Look up a built-in profile by name.

    Raises:
        ConfigurationError: If no profile has that name.
    """
    try:
        return _PROFILES[name]
    except KeyError as e:
        known = ", ".join(_PROFILES)
        raise ConfigurationError(
            config_key="profile", message=f"unknown profile '{name}' (known: {known})"
        ) from e


def synthesize(
    profile: VideoProfile, frame_count: int, seed: int, clip_to_max: bool = False
) -> VideoTrace:
    """
    Generate a synthetic trace with the profile's mean size and CoV.

    With clip_to_max, frame sizes never exceed the profile's M.
    """
    return generate_synthetic(
        mean_size=profile.mean_size,
        cov=profile.cov,
        frame_count=frame_count,
        frame_interval=FRAME_INTERVAL_US,
        seed=seed,
        max_size=profile.max_size if clip_to_max else None,
        name=profile.name,
    )
