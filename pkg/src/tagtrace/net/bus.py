"""Simulated multi-drop bus transports.

One logical bus carries one serialized command/response exchange at a
time; a lock enforces the discipline and the transcript records every
frame in wire order, so a transcript can never show two interleaved
exchanges.

Transcript format (one line per frame):

    <sim_us> M>S <hex bytes>
    <sim_us> S>M <hex bytes>

``InProcessBus`` dispatches directly into station objects. For running
master and stations in separate processes there is a byte-stream pair:
``BusServer`` hosts the stations behind a TCP socket and ``RemoteBus``
is the master-side client speaking raw frames over the stream.
"""

from __future__ import annotations

import socket
import struct
import threading

from tagtrace.net.errors import DuplicateAddress, RosterFull
from tagtrace.net.framing import (
    BROADCAST,
    Frame,
    FrameScanner,
    encode_frame,
)
from tagtrace.net.station import Station

MAX_STATIONS = 30


class Transcript:
    def __init__(self):
        self.lines: list[str] = []

    def log(self, sim_us: int, direction: str, raw: bytes) -> None:
        self.lines.append(f"{sim_us} {direction} {raw.hex()}")

    def dump(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


class InProcessBus:
    """Master side and stations in one process; frames stay byte-exact."""

    def __init__(self, clock=None):
        self.stations: list[Station] = []
        self.transcript = Transcript()
        self._clock = clock
        self._lock = threading.Lock()

    def _now(self) -> int:
        return self._clock.now_us if self._clock is not None else 0

    def register(self, station: Station) -> None:
        if len(self.stations) >= MAX_STATIONS:
            raise RosterFull(f"bus already carries {MAX_STATIONS} stations")
        if any(s.addr == station.addr for s in self.stations):
            raise DuplicateAddress(f"address {station.addr} already registered")
        self.stations.append(station)

    def detach(self, addr: int) -> None:
        self.stations = [s for s in self.stations if s.addr != addr]

    def station_at(self, addr: int) -> Station | None:
        for s in self.stations:
            if s.addr == addr:
                return s
        return None

    def exchange(self, frame: Frame) -> list[Frame] | None:
        """Send one frame; returns responses, or None when nobody answers.

        Broadcast reaches every station and, by design, yields no
        responses (an empty list, not None).
        """
        with self._lock:
            raw = encode_frame(frame)
            self.transcript.log(self._now(), "M>S", raw)
            if frame.is_broadcast:
                for s in list(self.stations):
                    s.dispatch(frame)
                return []
            station = self.station_at(frame.addr)
            if station is None:
                return None
            responses = station.dispatch(frame)
            for r in responses:
                self.transcript.log(self._now(), "S>M", encode_frame(r))
            return responses


class BusServer:
    """Hosts stations behind a TCP byte stream (one master connection)."""

    def __init__(self, bus: InProcessBus, host: str = "127.0.0.1", port: int = 0):
        self.bus = bus
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((host, port))
        self._sock.listen(1)
        self.address = self._sock.getsockname()
        self._thread: threading.Thread | None = None
        self._stop = threading.Event()

    def start(self) -> None:
        self._thread = threading.Thread(target=self._serve, daemon=True)
        self._thread.start()

    def _serve(self) -> None:
        self._sock.settimeout(0.2)
        while not self._stop.is_set():
            try:
                conn, _ = self._sock.accept()
            except socket.timeout:
                continue
            with conn:
                conn.settimeout(0.2)
                scanner = FrameScanner()
                while not self._stop.is_set():
                    try:
                        chunk = conn.recv(4096)
                    except socket.timeout:
                        continue
                    except OSError:
                        break
                    if not chunk:
                        break
                    for frame in scanner.feed(chunk):
                        responses = self.bus.exchange(frame)
                        for r in responses or []:
                            conn.sendall(encode_frame(r))

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2)
        self._sock.close()


class RemoteBus:
    """Master-side client for a BusServer; same exchange contract."""

    def __init__(self, host: str, port: int, timeout_s: float = 1.0):
        self.timeout_s = timeout_s
        self._sock = socket.create_connection((host, port), timeout=timeout_s)
        self._scanner = FrameScanner()
        self._inbox: list[Frame] = []
        self._lock = threading.Lock()
        self.transcript = Transcript()

    def exchange(self, frame: Frame) -> list[Frame] | None:
        with self._lock:
            self.transcript.log(0, "M>S", encode_frame(frame))
            self._sock.sendall(encode_frame(frame))
            if frame.is_broadcast:
                return []
            frames = self._read_response_set()
            for f in frames or []:
                self.transcript.log(0, "S>M", encode_frame(f))
            return frames

    def _read_one(self) -> Frame | None:
        while not self._inbox:
            try:
                chunk = self._sock.recv(4096)
            except socket.timeout:
                return None
            if not chunk:
                return None
            self._inbox.extend(self._scanner.feed(chunk))
        return self._inbox.pop(0)

    def _read_response_set(self) -> list[Frame] | None:
        from tagtrace.net.commands import CMD_INVENTORY, RESPONSE_FLAG

        first = self._read_one()
        if first is None:
            return None
        frames = [first]
        # INVENTORY responses announce their continuation count; every
        # other command answers with a single frame.
        if first.cmd == (CMD_INVENTORY | RESPONSE_FLAG) and len(first.payload) >= 6:
            _total, _idx, nframes, _count = struct.unpack_from("<HBBB", first.payload, 1)
            while len(frames) < nframes:
                nxt = self._read_one()
                if nxt is None:
                    return None
                frames.append(nxt)
        return frames

    def close(self) -> None:
        self._sock.close()
