"""Sync wire protocol: length-prefixed messages over a countable link.

Message = u32 length (little-endian) | u8 opcode | body. The length
covers opcode plus body. Control bodies are UTF-8 JSON; table transfers
carry the compact-table document plus a content digest the receiver
verifies before applying anything.

ByteLink is the in-process transport. It counts every byte per direction
and per table, keeps a running session digest over fully delivered
messages, and supports fault injection: ``cut_after(n)`` severs the link
the moment cumulative traffic would pass byte n. A message cut anywhere
inside its frame is undeliverable, so delivery is all-or-nothing per
message — exactly what a length-prefixed stream gives a real receiver.
"""

from __future__ import annotations

import hashlib
import json
import struct
from typing import Callable

from tagtrace.sync.errors import LinkCut, ProtocolError

PROTO_VERSION = 1

OP_HELLO = 1
OP_REVS = 2
OP_PLAN = 3
OP_TABLE_DATA = 4
OP_TABLE_REQ = 5
OP_TABLE_ACK = 6
OP_REBASE = 7
OP_REBASE_ACK = 8
OP_BYE = 9
OP_BYE_ACK = 10
OP_ERROR = 15

# messages addressed to a specific table; their bytes count against that
# table in the transfer ledger
_TABLE_OPS = {OP_TABLE_DATA, OP_TABLE_REQ, OP_TABLE_ACK, OP_REBASE, OP_REBASE_ACK}

OPCODE_NAMES = {
    OP_HELLO: "HELLO",
    OP_REVS: "REVS",
    OP_PLAN: "PLAN",
    OP_TABLE_DATA: "TABLE_DATA",
    OP_TABLE_REQ: "TABLE_REQ",
    OP_TABLE_ACK: "TABLE_ACK",
    OP_REBASE: "REBASE",
    OP_REBASE_ACK: "REBASE_ACK",
    OP_BYE: "BYE",
    OP_BYE_ACK: "BYE_ACK",
    OP_ERROR: "ERROR",
}


def encode_message(opcode: int, body: dict) -> bytes:
    payload = json.dumps(body, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return struct.pack("<IB", 1 + len(payload), opcode) + payload


def decode_message(data: bytes) -> tuple[int, dict]:
    if len(data) < 5:
        raise ProtocolError("message shorter than its own header")
    length, opcode = struct.unpack_from("<IB", data)
    if length != len(data) - 4:
        raise ProtocolError(f"length field {length} does not match frame of {len(data)} bytes")
    try:
        body = json.loads(data[5:].decode("utf-8"))
    except ValueError as exc:
        raise ProtocolError(f"unparseable message body: {exc}") from None
    if not isinstance(body, dict):
        raise ProtocolError("message body must be an object")
    return opcode, body


def rows_digest(rows: list[dict], revision: int) -> str:
    text = json.dumps({"revision": revision, "rows": rows},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ByteLink:
    """Synchronous request/response pipe between the central side and a
    device agent callable."""

    def __init__(self, agent: Callable[[int, dict], list[tuple[int, dict]]]):
        self.agent = agent
        self.alive = True
        self.bytes_to_device = 0
        self.bytes_to_central = 0
        self.table_bytes: dict[str, int] = {}
        self.messages = 0
        self.cut_at: int | None = None
        self._digest = hashlib.sha256()

    @property
    def bytes_total(self) -> int:
        return self.bytes_to_device + self.bytes_to_central

    def cut_after(self, total_bytes: int) -> None:
        self.cut_at = total_bytes

    def digest(self) -> str:
        return self._digest.hexdigest()

    def reset_digest(self) -> None:
        self._digest = hashlib.sha256()

    def _account(self, raw: bytes, opcode: int, body: dict, to_device: bool) -> None:
        if not self.alive:
            raise LinkCut("link is down")
        if self.cut_at is not None and self.bytes_total + len(raw) > self.cut_at:
            self.alive = False
            raise LinkCut(f"link severed at byte {self.cut_at}")
        if to_device:
            self.bytes_to_device += len(raw)
        else:
            self.bytes_to_central += len(raw)
        if opcode in _TABLE_OPS:
            table = body.get("table") or body.get("name")
            if table:
                self.table_bytes[table] = self.table_bytes.get(table, 0) + len(raw)
        self.messages += 1
        self._digest.update(raw)

    def request(self, opcode: int, body: dict) -> list[tuple[int, dict]]:
        """Send one message to the device, return its response messages.
        Raises LinkCut if the cut point lands inside any message."""
        raw = encode_message(opcode, body)
        self._account(raw, opcode, body, to_device=True)
        responses = self.agent(*decode_message(raw))
        delivered = []
        for resp_op, resp_body in responses:
            resp_raw = encode_message(resp_op, resp_body)
            self._account(resp_raw, resp_op, resp_body, to_device=False)
            delivered.append(decode_message(resp_raw))
        return delivered
