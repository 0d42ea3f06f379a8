"""Station state machine: configuration, event journal, command dispatch.

A station owns one reader field, keeps its 255-entry event ring, and
answers frames addressed to it (or broadcast — executed silently, never
answered). Air operations advance the shared simulation clock by the
configured durations, which is what the throughput calibration measures.
"""

from __future__ import annotations

import hmac
import struct

from tagtrace.net import commands as c
from tagtrace.net.events import EventKind, EventRecord
from tagtrace.net.framing import BROADCAST, Frame, MAX_STATION_ADDR
from tagtrace.net.ring import EventRing
from tagtrace.rf.errors import BlockLocked, BlockOutOfRange, TagNotFound
from tagtrace.rf.field import Crossing, FieldChange, ReaderField
from tagtrace.rf.model import SlotTiming
from tagtrace.rf.world import SimClock


class Station:
    def __init__(
        self,
        addr: int,
        field: ReaderField,
        clock: SimClock,
        timing: SlotTiming,
        password: bytes = c.DEFAULT_PASSWORD,
        name: str = "",
    ):
        if not 0 <= addr <= MAX_STATION_ADDR:
            raise ValueError(f"station address must be 0..{MAX_STATION_ADDR}")
        if len(password) != c.PASSWORD_LEN:
            raise ValueError(f"password must be {c.PASSWORD_LEN} bytes")
        self.addr = addr
        self.name = name or f"station-{addr}"
        self.field = field
        self.clock = clock
        self.timing = timing
        self.password = bytes(password)
        self.baud_class = 0
        self.ring = EventRing()
        self.seq_counter = 0

    # -- journaling ---------------------------------------------------------

    def log_event(self, kind: EventKind, uid: bytes | None = None) -> EventRecord:
        self.seq_counter += 1
        record = EventRecord(self.seq_counter, self.addr, kind, uid, self.clock.now_us)
        crossed = self.ring.push(record)
        if crossed:
            self.seq_counter += 1
            self.ring.push(
                EventRecord(
                    self.seq_counter,
                    self.addr,
                    EventKind.BUFFER_OVERRUN_WARNING,
                    None,
                    self.clock.now_us,
                )
            )
        return record

    def note_crossings(self, changes: list[FieldChange]) -> None:
        for change in changes:
            kind = EventKind.TAG_ENTER if change.crossing is Crossing.ENTER else EventKind.TAG_LEAVE
            self.log_event(kind, change.uid)

    # -- dispatch -----------------------------------------------------------

    def dispatch(self, frame: Frame) -> list[Frame]:
        """Handle one frame; returns response frames (none for broadcast)."""
        if frame.addr != self.addr and not frame.is_broadcast:
            return []
        handler = self._HANDLERS.get(frame.cmd)
        if handler is None:
            responses = [self._status_frame(frame.cmd, c.ST_UNKNOWN_COMMAND)]
        else:
            responses = handler(self, frame.payload)
        return [] if frame.is_broadcast else responses

    def _status_frame(self, cmd: int, status: int, tail: bytes = b"") -> Frame:
        return Frame(self.addr, cmd | c.RESPONSE_FLAG, bytes([status]) + tail)

    def _check_password(self, payload: bytes) -> bool:
        return len(payload) >= c.PASSWORD_LEN and hmac.compare_digest(
            payload[: c.PASSWORD_LEN], self.password
        )

    def _handle_ping(self, payload: bytes) -> list[Frame]:
        tail = bytes([self.addr, c.FIRMWARE_MODEL_VERSION, len(self.ring)])
        return [self._status_frame(c.CMD_PING, c.ST_OK, tail)]

    def _handle_set_addr(self, payload: bytes) -> list[Frame]:
        if not self._check_password(payload):
            return [self._status_frame(c.CMD_SET_ADDR, c.ST_AUTH_FAILED)]
        if len(payload) != c.PASSWORD_LEN + 1:
            return [self._status_frame(c.CMD_SET_ADDR, c.ST_MALFORMED)]
        new_addr = payload[c.PASSWORD_LEN]
        if new_addr > MAX_STATION_ADDR:
            return [self._status_frame(c.CMD_SET_ADDR, c.ST_MALFORMED)]
        # Respond from the old address; the change applies after the reply.
        response = self._status_frame(c.CMD_SET_ADDR, c.ST_OK)
        self.addr = new_addr
        self.log_event(EventKind.CONFIG_CHANGE)
        return [response]

    def _handle_set_baud(self, payload: bytes) -> list[Frame]:
        if not self._check_password(payload):
            return [self._status_frame(c.CMD_SET_BAUD, c.ST_AUTH_FAILED)]
        if len(payload) != c.PASSWORD_LEN + 1 or payload[c.PASSWORD_LEN] not in c.BAUD_CLASSES:
            return [self._status_frame(c.CMD_SET_BAUD, c.ST_MALFORMED)]
        self.baud_class = payload[c.PASSWORD_LEN]
        self.log_event(EventKind.CONFIG_CHANGE)
        return [self._status_frame(c.CMD_SET_BAUD, c.ST_OK)]

    def _handle_set_password(self, payload: bytes) -> list[Frame]:
        if not self._check_password(payload):
            return [self._status_frame(c.CMD_SET_PASSWORD, c.ST_AUTH_FAILED)]
        if len(payload) != 2 * c.PASSWORD_LEN:
            return [self._status_frame(c.CMD_SET_PASSWORD, c.ST_MALFORMED)]
        self.password = bytes(payload[c.PASSWORD_LEN :])
        self.log_event(EventKind.CONFIG_CHANGE)
        return [self._status_frame(c.CMD_SET_PASSWORD, c.ST_OK)]

    def _handle_inventory(self, payload: bytes) -> list[Frame]:
        result = self.field.inventory(self.timing)
        self.clock.advance(result.duration_us)
        uids = result.uids
        nframes = max(1, -(-len(uids) // c.MAX_UIDS_PER_FRAME))
        frames = []
        for idx in range(nframes):
            chunk = uids[idx * c.MAX_UIDS_PER_FRAME : (idx + 1) * c.MAX_UIDS_PER_FRAME]
            tail = struct.pack("<HBBB", len(uids), idx, nframes, len(chunk)) + b"".join(chunk)
            frames.append(self._status_frame(c.CMD_INVENTORY, c.ST_OK, tail))
        return frames

    def _handle_read_tag(self, payload: bytes) -> list[Frame]:
        if len(payload) != 10:
            return [self._status_frame(c.CMD_READ_TAG, c.ST_MALFORMED)]
        uid, first, count = struct.unpack("<8sBB", payload)
        if not 1 <= count <= c.MAX_READ_BLOCKS:
            return [self._status_frame(c.CMD_READ_TAG, c.ST_MALFORMED)]
        self.clock.advance(self.timing.single_read_duration_us)
        try:
            blocks = self.field.read_blocks(uid, first, count)
        except TagNotFound:
            return [self._status_frame(c.CMD_READ_TAG, c.ST_TAG_NOT_FOUND)]
        except BlockOutOfRange:
            return [self._status_frame(c.CMD_READ_TAG, c.ST_BLOCK_OUT_OF_RANGE)]
        return [self._status_frame(c.CMD_READ_TAG, c.ST_OK, b"".join(blocks))]

    def _handle_write_tag(self, payload: bytes) -> list[Frame]:
        if len(payload) < 10:
            return [self._status_frame(c.CMD_WRITE_TAG, c.ST_MALFORMED)]
        uid, first, count = struct.unpack_from("<8sBB", payload, 0)
        data = payload[10:]
        block_size = self.field.tags[uid].block_size if uid in self.field.tags else 4
        if count < 1 or count > c.MAX_WRITE_BLOCKS or len(data) != count * block_size:
            return [self._status_frame(c.CMD_WRITE_TAG, c.ST_MALFORMED)]
        images = [data[i * block_size : (i + 1) * block_size] for i in range(count)]
        self.clock.advance(self.timing.single_read_duration_us)
        try:
            self.field.write_blocks(uid, first, images)
        except TagNotFound:
            return [self._status_frame(c.CMD_WRITE_TAG, c.ST_TAG_NOT_FOUND)]
        except BlockOutOfRange:
            return [self._status_frame(c.CMD_WRITE_TAG, c.ST_BLOCK_OUT_OF_RANGE)]
        except BlockLocked:
            return [self._status_frame(c.CMD_WRITE_TAG, c.ST_BLOCK_LOCKED)]
        return [self._status_frame(c.CMD_WRITE_TAG, c.ST_OK)]

    def _handle_get_events(self, payload: bytes) -> list[Frame]:
        if len(payload) != 4:
            return [self._status_frame(c.CMD_GET_EVENTS, c.ST_MALFORMED)]
        (after_seq,) = struct.unpack("<I", payload)
        matching = self.ring.read_after(after_seq)
        chunk = matching[: c.MAX_EVENTS_PER_FRAME]
        remaining = len(matching) - len(chunk)
        tail = struct.pack("<HB", remaining, len(chunk)) + b"".join(r.pack() for r in chunk)
        return [self._status_frame(c.CMD_GET_EVENTS, c.ST_OK, tail)]

    def _handle_clear_events(self, payload: bytes) -> list[Frame]:
        if not self._check_password(payload):
            return [self._status_frame(c.CMD_CLEAR_EVENTS, c.ST_AUTH_FAILED)]
        self.ring.clear()
        return [self._status_frame(c.CMD_CLEAR_EVENTS, c.ST_OK)]

    _HANDLERS = {
        c.CMD_PING: _handle_ping,
        c.CMD_SET_ADDR: _handle_set_addr,
        c.CMD_SET_BAUD: _handle_set_baud,
        c.CMD_SET_PASSWORD: _handle_set_password,
        c.CMD_INVENTORY: _handle_inventory,
        c.CMD_READ_TAG: _handle_read_tag,
        c.CMD_WRITE_TAG: _handle_write_tag,
        c.CMD_GET_EVENTS: _handle_get_events,
        c.CMD_CLEAR_EVENTS: _handle_clear_events,
    }
