"""The network master: owns the roster, polls stations, parses responses.

Event collection is pull-based: the master remembers the highest sequence
number it has acknowledged per station and asks each station for anything
newer. Repeating a poll therefore transfers nothing; records evicted
before they were acknowledged show up as a gap between the acknowledged
sequence and the oldest record returned, which the poll result reports.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from tagtrace.net import commands as c
from tagtrace.net.errors import DuplicateAddress, RosterFull, StationTimeout
from tagtrace.net.events import EventRecord, unpack_event, WIRE_RECORD_SIZE
from tagtrace.net.framing import Frame
from tagtrace.net.bus import MAX_STATIONS


@dataclass
class NetworkConfig:
    master_id: str = "master-0"
    backhaul_range_m: int = 1000  # informational; PC<->master radio reach
    max_stations: int = MAX_STATIONS


@dataclass
class PingInfo:
    addr: int
    firmware_version: int
    event_count: int


@dataclass
class PollResult:
    events: list[EventRecord] = field(default_factory=list)
    timeouts: list[int] = field(default_factory=list)
    gaps: dict[int, tuple[int, int]] = field(default_factory=dict)  # addr -> (acked, oldest seen)


class CommandFailed(Exception):
    def __init__(self, status: int):
        super().__init__(f"station answered {c.status_name(status)}")
        self.status = status


class Master:
    def __init__(self, bus, config: NetworkConfig | None = None):
        self.bus = bus
        self.config = config or NetworkConfig()
        self.roster: list[int] = []
        self.acked_seq: dict[int, int] = {}
        self.event_sink = None  # callable(list[EventRecord]) or None

    # -- roster ---------------------------------------------------------------

    def register_station(self, addr: int) -> None:
        if len(self.roster) >= self.config.max_stations:
            raise RosterFull(f"master already manages {self.config.max_stations} stations")
        if addr in self.roster:
            raise DuplicateAddress(f"station {addr} already on the roster")
        self.roster.append(addr)
        self.acked_seq.setdefault(addr, 0)

    def drop_station(self, addr: int) -> None:
        self.roster = [a for a in self.roster if a != addr]

    # -- single commands --------------------------------------------------------

    def _exchange(self, addr: int, cmd: int, payload: bytes = b"") -> list[Frame]:
        responses = self.bus.exchange(Frame(addr, cmd, payload))
        if responses is None:
            raise StationTimeout(f"station {addr} did not answer")
        return responses

    def _simple(self, addr: int, cmd: int, payload: bytes = b"") -> bytes:
        """One-frame command; returns the payload after a passing status byte."""
        responses = self._exchange(addr, cmd, payload)
        if not responses:
            raise StationTimeout(f"station {addr} returned no frames")
        status, tail = responses[0].payload[0], responses[0].payload[1:]
        if status != c.ST_OK:
            raise CommandFailed(status)
        return tail

    def ping(self, addr: int) -> PingInfo:
        tail = self._simple(addr, c.CMD_PING)
        return PingInfo(addr=tail[0], firmware_version=tail[1], event_count=tail[2])

    def set_addr(self, addr: int, password: bytes, new_addr: int) -> None:
        self._simple(addr, c.CMD_SET_ADDR, password + bytes([new_addr]))
        if addr in self.roster:
            self.roster[self.roster.index(addr)] = new_addr
            self.acked_seq[new_addr] = self.acked_seq.pop(addr, 0)

    def set_baud(self, addr: int, password: bytes, baud_class: int) -> None:
        self._simple(addr, c.CMD_SET_BAUD, password + bytes([baud_class]))

    def set_password(self, addr: int, password: bytes, new_password: bytes) -> None:
        self._simple(addr, c.CMD_SET_PASSWORD, password + new_password)

    def clear_events(self, addr: int, password: bytes) -> None:
        self._simple(addr, c.CMD_CLEAR_EVENTS, password)
        self.acked_seq[addr] = 0

    def inventory(self, addr: int) -> list[bytes]:
        responses = self._exchange(addr, c.CMD_INVENTORY)
        if not responses:
            raise StationTimeout(f"station {addr} returned no frames")
        uids: list[bytes] = []
        total = None
        for frame in responses:
            status = frame.payload[0]
            if status != c.ST_OK:
                raise CommandFailed(status)
            total, _idx, _nframes, count = struct.unpack_from("<HBBB", frame.payload, 1)
            body = frame.payload[6:]
            uids.extend(body[i * 8 : (i + 1) * 8] for i in range(count))
        if total is not None and len(uids) != total:
            raise StationTimeout(f"station {addr} inventory incomplete: {len(uids)}/{total}")
        return uids

    def read_tag(self, addr: int, uid: bytes, first_block: int, count: int) -> list[bytes]:
        blocks: list[bytes] = []
        offset = 0
        while offset < count:
            chunk = min(c.MAX_READ_BLOCKS, count - offset)
            tail = self._simple(
                addr, c.CMD_READ_TAG, c.pack_read_tag(uid, first_block + offset, chunk)
            )
            size = len(tail) // chunk
            blocks.extend(tail[i * size : (i + 1) * size] for i in range(chunk))
            offset += chunk
        return blocks

    def write_tag(self, addr: int, uid: bytes, first_block: int, images: list[bytes]) -> None:
        offset = 0
        while offset < len(images):
            chunk = images[offset : offset + c.MAX_WRITE_BLOCKS]
            self._simple(addr, c.CMD_WRITE_TAG, c.pack_write_tag(uid, first_block + offset, chunk))
            offset += len(chunk)

    # -- event collection -------------------------------------------------------

    def get_events(self, addr: int, after_seq: int) -> tuple[list[EventRecord], int]:
        tail = self._simple(addr, c.CMD_GET_EVENTS, c.pack_get_events(after_seq))
        remaining, count = struct.unpack_from("<HB", tail, 0)
        records = [
            unpack_event(tail, 3 + i * WIRE_RECORD_SIZE, addr) for i in range(count)
        ]
        return records, remaining

    def poll_cycle(self) -> PollResult:
        """Address every rostered station in turn; collect and forward events."""
        result = PollResult()
        for addr in list(self.roster):
            acked = self.acked_seq.get(addr, 0)
            try:
                station_records: list[EventRecord] = []
                while True:
                    records, remaining = self.get_events(addr, acked)
                    station_records.extend(records)
                    if records:
                        acked = records[-1].seq
                    if remaining == 0 or not records:
                        break
            except StationTimeout:
                result.timeouts.append(addr)
                continue
            if station_records and station_records[0].seq > self.acked_seq.get(addr, 0) + 1:
                result.gaps[addr] = (self.acked_seq.get(addr, 0), station_records[0].seq)
            self.acked_seq[addr] = acked
            result.events.extend(station_records)
        if self.event_sink is not None and result.events:
            self.event_sink(result.events)
        return result
