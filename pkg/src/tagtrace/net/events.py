"""Station event records and their fixed wire layout.

On the wire one record is 21 bytes:

    seq u32 LE | kind u8 | uid 8 bytes (all-zero when absent) | timestamp u64 LE
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

WIRE_RECORD_SIZE = 21
_NO_UID = bytes(8)


class EventKind(enum.IntEnum):
    TAG_ENTER = 1
    TAG_LEAVE = 2
    ALARM = 3
    CONFIG_CHANGE = 4
    BUFFER_OVERRUN_WARNING = 5


@dataclass(frozen=True)
class EventRecord:
    seq: int
    station_addr: int
    kind: EventKind
    uid: bytes | None
    sim_timestamp_us: int

    def pack(self) -> bytes:
        return struct.pack(
            "<IB8sQ",
            self.seq,
            int(self.kind),
            self.uid if self.uid is not None else _NO_UID,
            self.sim_timestamp_us,
        )


def unpack_event(data: bytes, offset: int, station_addr: int) -> EventRecord:
    seq, kind, uid, ts = struct.unpack_from("<IB8sQ", data, offset)
    return EventRecord(
        seq=seq,
        station_addr=station_addr,
        kind=EventKind(kind),
        uid=None if uid == _NO_UID else uid,
        sim_timestamp_us=ts,
    )
