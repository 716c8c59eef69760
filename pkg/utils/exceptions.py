"""
Custom exceptions for the HCCA TXOP simulator.

This module defines the exceptions raised by the trace parser, the scheduling
math, the simulation engine and the command line, so callers can tell a bad
input file from a rejected scenario or a failed run.
"""

from typing import Optional


class TraceParseError(Exception):
    """
    Raised when a video trace file cannot be parsed.

    Carries the offending line number (1-based) and, when known, the file
    the text came from.
    """

    def __init__(
        self,
        line: Optional[int] = None,
        message: Optional[str] = None,
        source: Optional[str] = None,
    ) -> None:
        self.line = line
        self.source = source

        location = source or "trace"
        if line is not None:
            location = f"{location}:{line}"

        if message:
            error_message = f"Trace parse error at {location}: {message}"
        else:
            error_message = f"Trace parse error at {location}"

        super().__init__(error_message)


class ValidationError(Exception):
    """
    Raised when a value object breaks one of its invariants.

    Used for TSPECs, PHY/MAC parameter sets, traces and simulation configs.
    """

    def __init__(self, field: Optional[str] = None, message: Optional[str] = None) -> None:
        self.field = field

        if field and message:
            error_message = f"Validation error for field '{field}': {message}"
        elif field:
            error_message = f"Validation error for field '{field}'"
        elif message:
            error_message = f"Validation error: {message}"
        else:
            error_message = "Validation error occurred"

        super().__init__(error_message)


class ConfigurationError(Exception):
    """
    Raised when there are configuration-related issues.

    Covers scenario files (unknown keys, unparsable values, missing traces)
    and invalid environment settings.
    """

    def __init__(self, config_key: Optional[str] = None, message: Optional[str] = None) -> None:
        self.config_key = config_key

        if config_key and message:
            error_message = f"Configuration error for '{config_key}': {message}"
        elif config_key:
            error_message = f"Configuration error: missing or invalid '{config_key}'"
        elif message:
            error_message = f"Configuration error: {message}"
        else:
            error_message = "Configuration error occurred"

        super().__init__(error_message)


class AdmissionError(Exception):
    """Raised when admission control leaves the HC with nothing to poll."""

    def __init__(self, message: str = "empty polling list") -> None:
        self.message = message
        super().__init__(self.message)


class MetricsError(Exception):
    """
    Raised when a metric cannot be computed from an event log.

    Typical causes are a log without deliveries or a station id that was
    never polled.
    """

    def __init__(self, metric: Optional[str] = None, message: Optional[str] = None) -> None:
        self.metric = metric

        if metric and message:
            error_message = f"Metrics error in '{metric}': {message}"
        elif metric:
            error_message = f"Metrics error in '{metric}'"
        elif message:
            error_message = f"Metrics error: {message}"
        else:
            error_message = "Metrics error occurred"

        super().__init__(error_message)


class SimulationError(Exception):
    """
    Raised when a simulation run or a sweep of runs fails.
    """

    def __init__(self, operation: Optional[str] = None, message: Optional[str] = None) -> None:
        self.operation = operation

        if operation and message:
            error_message = f"Simulation error during '{operation}': {message}"
        elif operation:
            error_message = f"Simulation error during '{operation}'"
        elif message:
            error_message = f"Simulation error: {message}"
        else:
            error_message = "Simulation error occurred"

        super().__init__(error_message)


DOMAIN_ERRORS = (
    TraceParseError,
    ValidationError,
    ConfigurationError,
    AdmissionError,
    MetricsError,
    SimulationError,
)
