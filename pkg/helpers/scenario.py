"""
Scenario files: flat ``key = value`` text describing one experiment.

Lines starting with ``#`` are comments. Time values are microseconds except
the TSPEC keys, which use seconds and bits/second like the TSPEC itself.
Relative trace paths are resolved against the scenario file's directory.

Example:
    beacon_interval = 160000
    sim_duration = 100000000
    warmup = 0
    scheduler = dyn
    stations = 8
    profile = jurassic_high
    admission_control = false
"""

import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

from scheduling.mac import PhyMacParams
from simulation.engine import SimConfig, StationSpec
from traffic.profiles import get_profile, synthesize
from traffic.trace import VideoTrace, load_trace
from traffic.tspec import derive_tspec
from utils.config import Config
from utils.consts import SchedulerKind
from utils.exceptions import ConfigurationError, ValidationError

logger = logging.getLogger(__name__)

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def _parse_int(raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"'{raw}' is not a whole number")
        return int(value)


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f"'{raw}' is not a boolean")


def _parse_scheduler(raw: str) -> SchedulerKind:
    return SchedulerKind(raw.lower())


_SCALAR_KEYS: Dict[str, tuple] = {
    "beacon_interval": ("beacon_interval", _parse_int),
    "t_cp": ("t_cp", _parse_int),
    "sim_duration": ("sim_duration", _parse_int),
    "warmup": ("warmup", _parse_int),
    "loss_probability": ("loss_probability", float),
    "qs_quantized": ("qs_quantized", _parse_bool),
    "admission_control": ("admission_control", _parse_bool),
    "seed": ("seed", _parse_int),
    "scheduler": ("scheduler", _parse_scheduler),
    "stations": ("stations", _parse_int),
    "sweep_min": ("sweep_min", _parse_int),
    "sweep_max": ("sweep_max", _parse_int),
    "output_dir": ("output_dir", str),
    "frame_interval": ("frame_interval", _parse_int),
    "profile": ("profile", str),
    "profile_frames": ("profile_frames", _parse_int),
    "tspec.msi": ("msi", float),
    "tspec.delay_bound": ("delay_bound", float),
    "tspec.rate": ("phy_rate", float),
}

_TSPEC_OVERRIDE_KEYS: Dict[str, Callable[[str], Any]] = {
    "tspec.nominal_size": _parse_int,
    "tspec.max_size": _parse_int,
    "tspec.mean_rate": float,
}


@dataclass
class Scenario:
    """Simulation settings plus trace selection, outputs and sweep range."""

    beacon_interval: int = 160_000
    t_cp: int = 0
    sim_duration: int = 500_000_000
    warmup: int = 20_000_000
    loss_probability: float = 0.0
    qs_quantized: bool = False
    admission_control: bool = True
    seed: int = field(default_factory=Config.get_default_seed)
    scheduler: SchedulerKind = SchedulerKind.REFERENCE_HCCA
    stations: int = 1
    sweep_min: int = 1
    sweep_max: int = 12
    output_dir: str = field(default_factory=Config.get_output_dir)
    frame_interval: int = 40_000
    trace: Optional[Path] = None
    station_traces: Dict[int, Path] = field(default_factory=dict)
    profile: Optional[str] = None
    profile_frames: int = 2500
    msi: float = 0.04
    delay_bound: float = 0.08
    phy_rate: float = 11e6
    tspec_overrides: Dict[str, Any] = field(default_factory=dict)
    mac: PhyMacParams = field(default_factory=PhyMacParams)

    _traces: Dict[Path, VideoTrace] = field(default_factory=dict, repr=False)
    _specs: Dict[int, StationSpec] = field(default_factory=dict, repr=False)

    def validate(self) -> None:
        """
        Check ranges and that every referenced trace exists and parses.

        Raises:
            ConfigurationError: On an invalid range or missing traffic source.
            TraceParseError: If a referenced trace file is malformed.
        """
        if self.stations < 1:
            raise ConfigurationError(config_key="stations", message="must be at least 1")
        if not 1 <= self.sweep_min <= self.sweep_max:
            raise ConfigurationError(
                config_key="sweep_min",
                message=f"sweep range {self.sweep_min}..{self.sweep_max} is empty",
            )
        if self.trace is None and self.profile is None:
            needed = range(1, max(self.stations, self.sweep_max) + 1)
            missing = [i for i in needed if i not in self.station_traces]
            if missing:
                raise ConfigurationError(
                    config_key="trace",
                    message=f"no trace or profile for stations {missing}",
                )
        if self.profile is not None:
            get_profile(self.profile)

        for path in {self.trace, *self.station_traces.values()} - {None}:
            self._check_max_size(self._load(path))

    def _check_max_size(self, trace: VideoTrace) -> None:
        """An M override below the largest frame would leave that frame unservable."""
        max_size = self.tspec_overrides.get("max_size")
        largest = int(trace.sizes.max())
        if max_size is not None and max_size < largest:
            raise ConfigurationError(
                config_key="tspec.max_size",
                message=f"{max_size} is below the largest frame ({largest} bytes) of trace '{trace.name}'",
            )

    # ------------------------------------------------------------------
    def _load(self, path: Path) -> VideoTrace:
        if path not in self._traces:
            if not path.exists():
                raise ConfigurationError(config_key="trace", message=f"trace file {path} not found")
            self._traces[path] = load_trace(path, self.frame_interval)
        return self._traces[path]

    def trace_for(self, station_id: int) -> VideoTrace:
        """Trace replayed by a station: per-station file, shared file, then profile."""
        path = self.station_traces.get(station_id, self.trace)
        if path is not None:
            return self._load(path)
        profile = get_profile(self.profile)
        return synthesize(profile, self.profile_frames, seed=self.seed * 10_000 + station_id)

    def station_spec(self, station_id: int) -> StationSpec:
        if station_id not in self._specs:
            trace = self.trace_for(station_id)
            self._check_max_size(trace)
            tspec = derive_tspec(trace, self.msi, self.delay_bound, self.phy_rate)
            self._specs[station_id] = StationSpec(trace=trace, tspec=tspec.with_overrides(**self.tspec_overrides))
        return self._specs[station_id]

    def config_for(self, n_stations: int, kind: Optional[SchedulerKind] = None) -> SimConfig:
        """SimConfig with the first n_stations stations of this scenario."""
        return SimConfig(
            stations=[self.station_spec(i) for i in range(1, n_stations + 1)],
            scheduler=kind or self.scheduler,
            beacon_interval=self.beacon_interval,
            t_cp=self.t_cp,
            mac=self.mac,
            sim_duration=self.sim_duration,
            warmup=self.warmup,
            loss_probability=self.loss_probability,
            qs_quantized=self.qs_quantized,
            admission_control=self.admission_control,
            seed=self.seed,
        )


def _mac_field_parsers() -> Dict[str, Callable[[str], Any]]:
    defaults = PhyMacParams()
    return {
        f"mac.{f.name}": (_parse_int if isinstance(getattr(defaults, f.name), int) else float)
        for f in fields(PhyMacParams)
    }


def parse_scenario(text: str, base_dir: Union[str, Path] = ".") -> Scenario:
    """
    Parse scenario text. Trace paths are resolved against base_dir.

    Raises:
        ConfigurationError: On malformed lines, unknown keys or bad values.
    """
    base_dir = Path(base_dir)
    scenario = Scenario()
    mac_parsers = _mac_field_parsers()
    mac_values: Dict[str, Any] = {}

    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationError(message=f"line {line_no}: expected 'key = value'")
        key, raw = (part.strip() for part in stripped.split("=", 1))

        try:
            if key in _SCALAR_KEYS:
                attr, parser = _SCALAR_KEYS[key]
                setattr(scenario, attr, parser(raw))
            elif key in _TSPEC_OVERRIDE_KEYS:
                scenario.tspec_overrides[key.split(".", 1)[1]] = _TSPEC_OVERRIDE_KEYS[key](raw)
            elif key in mac_parsers:
                mac_values[key.split(".", 1)[1]] = mac_parsers[key](raw)
            elif key == "trace":
                scenario.trace = base_dir / raw
            elif key.startswith("trace."):
                scenario.station_traces[_parse_int(key.split(".", 1)[1])] = base_dir / raw
            else:
                raise ConfigurationError(config_key=key, message=f"line {line_no}: unknown key")
        except ValueError as e:
            raise ConfigurationError(config_key=key, message=f"line {line_no}: {e}") from e

    if mac_values:
        try:
            scenario.mac = PhyMacParams(**mac_values)
        except ValidationError as e:
            raise ConfigurationError(config_key="mac", message=str(e)) from e

    return scenario


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Read, parse and validate a scenario file.

    Raises:
        ConfigurationError: If the file is missing or invalid.
        TraceParseError: If a referenced trace is malformed.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(config_key="scenario", message=f"cannot read {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise ConfigurationError(config_key="scenario", message=f"{path} is not UTF-8 text ({e.reason})") from e

    scenario = parse_scenario(text, base_dir=path.parent)
    scenario.validate()
    logger.info(f"Loaded scenario {path}")
    return scenario
