from enum import Enum


class FrameType(Enum):
    """MPEG-4 picture types found in trace files."""
    I = "I"
    P = "P"
    B = "B"


class SchedulerKind(Enum):
    """Enumeration of the HC scheduling algorithms the engine can run."""
    REFERENCE_HCCA = "hcca"
    DYNAMIC_TXOP = "dyn"


class EventKind(Enum):
    """Enumeration of the record kinds written to the simulation event log."""
    BEACON = "Beacon"
    SI_START = "SiStart"
    POLL = "Poll"
    DATA_RX = "DataRx"
    ACK = "Ack"
    DROP = "Drop"
    TXOP_END = "TxopEnd"


# Informational GoP pattern used when synthesizing frame types
GOP_PATTERN = "IBBPBBPBBPBB"

# QS field: 8-bit queue size in 256-byte units
QS_UNIT_BYTES = 256
QS_MAX_UNITS = 255

MICROSECONDS_PER_SECOND = 1_000_000
MICROSECONDS_PER_MILLISECOND = 1_000
