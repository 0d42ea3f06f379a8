"""Master/station network: framing, stations, event rings, polling."""

from tagtrace.net import commands
from tagtrace.net.bus import BusServer, InProcessBus, MAX_STATIONS, RemoteBus, Transcript
from tagtrace.net.errors import (
    AuthFailed,
    BadAddress,
    BadLength,
    BadSof,
    CrcMismatch,
    DuplicateAddress,
    FrameError,
    NetError,
    RosterFull,
    StationTimeout,
    Truncated,
    UnknownCommand,
)
from tagtrace.net.events import EventKind, EventRecord, unpack_event
from tagtrace.net.framing import (
    BROADCAST,
    Frame,
    FrameScanner,
    MAX_PAYLOAD,
    MAX_STATION_ADDR,
    SOF,
    encode_frame,
    frame_decode,
    frame_encode,
)
from tagtrace.net.master import CommandFailed, Master, NetworkConfig, PingInfo, PollResult
from tagtrace.net.ring import RING_CAPACITY, EventRing
from tagtrace.net.station import Station

__all__ = [
    "AuthFailed",
    "BadAddress",
    "BadLength",
    "BadSof",
    "BROADCAST",
    "BusServer",
    "commands",
    "CommandFailed",
    "CrcMismatch",
    "DuplicateAddress",
    "EventKind",
    "EventRecord",
    "EventRing",
    "Frame",
    "FrameError",
    "FrameScanner",
    "InProcessBus",
    "Master",
    "MAX_PAYLOAD",
    "MAX_STATION_ADDR",
    "MAX_STATIONS",
    "NetError",
    "NetworkConfig",
    "PingInfo",
    "PollResult",
    "RemoteBus",
    "RING_CAPACITY",
    "RosterFull",
    "SOF",
    "Station",
    "StationTimeout",
    "Transcript",
    "Truncated",
    "UnknownCommand",
    "encode_frame",
    "frame_decode",
    "frame_encode",
    "unpack_event",
]
