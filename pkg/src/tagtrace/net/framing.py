"""Byte-exact master/station framing.

    SOF 0xAA | addr u8 | cmd u8 | len u8 | payload (len bytes) | crc u16 LE

The CRC is CRC-16/CCITT-FALSE over addr..payload (SOF excluded). Station
addresses are 0..29; 0xFF broadcasts. Payloads carry at most 200 bytes.

Golden fixture: PING (cmd 0x01, no payload) to address 5 encodes to
``AA 05 01 00 5D 14``.

``frame_decode`` parses one exact frame image. ``FrameScanner`` consumes a
byte stream, skipping garbage and resynchronizing on the next 0xAA after
any damaged candidate, so a corrupted frame is never mis-decoded — it is
dropped and the scanner locks onto the next valid one.
"""

from __future__ import annotations

from dataclasses import dataclass

from tagtrace.crc import crc16, crc16_bytes
from tagtrace.net.errors import BadAddress, BadLength, BadSof, CrcMismatch, Truncated

SOF = 0xAA
BROADCAST = 0xFF
MAX_STATION_ADDR = 29
MAX_PAYLOAD = 200
_OVERHEAD = 6  # SOF + addr + cmd + len + crc16


@dataclass(frozen=True)
class Frame:
    addr: int
    cmd: int
    payload: bytes = b""

    def __post_init__(self):
        if not (0 <= self.addr <= MAX_STATION_ADDR or self.addr == BROADCAST):
            raise BadAddress(f"address {self.addr} not in 0..{MAX_STATION_ADDR} or broadcast")
        if not 0 <= self.cmd <= 0xFF:
            raise ValueError(f"cmd byte out of range: {self.cmd}")
        if len(self.payload) > MAX_PAYLOAD:
            raise BadLength(f"payload of {len(self.payload)} bytes exceeds {MAX_PAYLOAD}")

    @property
    def is_broadcast(self) -> bool:
        return self.addr == BROADCAST


def frame_encode(addr: int, cmd: int, payload: bytes = b"") -> bytes:
    frame = Frame(addr, cmd, bytes(payload))
    body = bytes([frame.addr, frame.cmd, len(frame.payload)]) + frame.payload
    return bytes([SOF]) + body + crc16_bytes(body)


def encode_frame(frame: Frame) -> bytes:
    return frame_encode(frame.addr, frame.cmd, frame.payload)


def frame_decode(data: bytes) -> Frame:
    """Decode one exact frame image; raises on any defect."""
    if len(data) < 1 or data[0] != SOF:
        raise BadSof("frame does not start with 0xAA")
    if len(data) < 4:
        raise Truncated("frame shorter than its fixed header")
    addr, cmd, length = data[1], data[2], data[3]
    if length > MAX_PAYLOAD:
        raise BadLength(f"declared payload of {length} bytes exceeds {MAX_PAYLOAD}")
    if len(data) < _OVERHEAD + length:
        raise Truncated(f"frame needs {_OVERHEAD + length} bytes, got {len(data)}")
    body = data[1 : 4 + length]
    stored = int.from_bytes(data[4 + length : 6 + length], "little")
    if crc16(body) != stored:
        raise CrcMismatch("frame check sequence mismatch")
    if not (0 <= addr <= MAX_STATION_ADDR or addr == BROADCAST):
        raise BadAddress(f"address {addr} not in 0..{MAX_STATION_ADDR} or broadcast")
    return Frame(addr, cmd, bytes(data[4 : 4 + length]))


def frame_size(data: bytes) -> int:
    """Byte length of the frame starting at data[0], assuming a complete header."""
    return _OVERHEAD + data[3]


class FrameScanner:
    """Incremental stream decoder with resynchronization.

    Feed arbitrary byte chunks; complete valid frames come out in order.
    Bytes before a SOF, and any SOF candidate that fails validation, are
    discarded one byte at a time so a later genuine frame is still found.
    """

    def __init__(self):
        self._buf = bytearray()
        self.frames_out = 0
        self.bytes_discarded = 0

    def feed(self, chunk: bytes) -> list[Frame]:
        self._buf.extend(chunk)
        found: list[Frame] = []
        while True:
            sof = self._buf.find(SOF)
            if sof < 0:
                self.bytes_discarded += len(self._buf)
                self._buf.clear()
                break
            if sof > 0:
                self.bytes_discarded += sof
                del self._buf[:sof]
            if len(self._buf) < 4:
                break  # wait for the header
            length = self._buf[3]
            if length <= MAX_PAYLOAD and len(self._buf) < _OVERHEAD + length:
                break  # wait for the rest of a plausible frame
            try:
                frame = frame_decode(bytes(self._buf[: _OVERHEAD + min(length, MAX_PAYLOAD)]))
            except Exception:
                # Damaged candidate: drop the SOF byte and rescan.
                self.bytes_discarded += 1
                del self._buf[:1]
                continue
            found.append(frame)
            self.frames_out += 1
            del self._buf[: _OVERHEAD + length]
        return found

    @property
    def pending_bytes(self) -> int:
        return len(self._buf)
