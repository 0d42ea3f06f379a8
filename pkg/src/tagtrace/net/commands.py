"""Command and status bytes, with request/response payload layouts.

Requests travel master -> station; every response echoes the command byte
with the high bit set and begins with a status byte. Password-protected
requests (SET_ADDR, SET_BAUD, SET_PASSWORD, CLEAR_EVENTS) start with the
station's current 4-byte password.

    PING          ->  status, addr, fw_version, event_count
    SET_ADDR      pw4 + new_addr                 ->  status
    SET_BAUD      pw4 + baud_class               ->  status
    SET_PASSWORD  pw4 + new_pw4                  ->  status
    INVENTORY     (empty)                        ->  status, total u16,
                  continuation frames            idx u8, nframes u8,
                                                 count u8, uids
    READ_TAG      uid8 + first u8 + count u8     ->  status, block bytes
    WRITE_TAG     uid8 + first u8 + count u8 + data  ->  status
    GET_EVENTS    after_seq u32                  ->  status, remaining u16,
                                                 count u8, 21-byte records
    CLEAR_EVENTS  pw4                            ->  status
"""

from __future__ import annotations

import struct

PASSWORD_LEN = 4
DEFAULT_PASSWORD = bytes(PASSWORD_LEN)
FIRMWARE_MODEL_VERSION = 1

CMD_PING = 0x01
CMD_SET_ADDR = 0x02
CMD_SET_BAUD = 0x03
CMD_SET_PASSWORD = 0x04
CMD_INVENTORY = 0x05
CMD_READ_TAG = 0x06
CMD_WRITE_TAG = 0x07
CMD_GET_EVENTS = 0x08
CMD_CLEAR_EVENTS = 0x09
RESPONSE_FLAG = 0x80

PROTECTED_COMMANDS = frozenset({CMD_SET_ADDR, CMD_SET_BAUD, CMD_SET_PASSWORD, CMD_CLEAR_EVENTS})

ST_OK = 0x00
ST_AUTH_FAILED = 0x01
ST_UNKNOWN_COMMAND = 0x02
ST_TAG_NOT_FOUND = 0x03
ST_BLOCK_OUT_OF_RANGE = 0x04
ST_BLOCK_LOCKED = 0x05
ST_MALFORMED = 0x06

STATUS_NAMES = {
    ST_OK: "OK",
    ST_AUTH_FAILED: "AUTH_FAILED",
    ST_UNKNOWN_COMMAND: "UNKNOWN_COMMAND",
    ST_TAG_NOT_FOUND: "TAG_NOT_FOUND",
    ST_BLOCK_OUT_OF_RANGE: "BLOCK_OUT_OF_RANGE",
    ST_BLOCK_LOCKED: "BLOCK_LOCKED",
    ST_MALFORMED: "MALFORMED",
}

# Stored configuration only; no timing effect in the simulator.
BAUD_CLASSES = {0: 9600, 1: 19200, 2: 38400, 3: 57600, 4: 115200}

# Per-frame item limits, sized so payloads stay within the 200-byte cap.
MAX_UIDS_PER_FRAME = 24       # 6 + 24*8 = 198
MAX_EVENTS_PER_FRAME = 9      # 4 + 9*21 = 193
MAX_READ_BLOCKS = 48          # 1 + 48*4 = 193
MAX_WRITE_BLOCKS = 47         # 10 + 47*4 = 198


def pack_read_tag(uid: bytes, first_block: int, count: int) -> bytes:
    return struct.pack("<8sBB", uid, first_block, count)


def pack_write_tag(uid: bytes, first_block: int, images: list[bytes]) -> bytes:
    return struct.pack("<8sBB", uid, first_block, len(images)) + b"".join(images)


def pack_get_events(after_seq: int) -> bytes:
    return struct.pack("<I", after_seq)


def status_name(status: int) -> str:
    return STATUS_NAMES.get(status, f"STATUS_{status:02X}")
