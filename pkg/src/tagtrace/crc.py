"""CRC-16/CCITT-FALSE, shared by the tag payload codec and the station framing.

Parameters: polynomial 0x1021, initial value 0xFFFF, no input/output
reflection, no final XOR. Check value: crc16(b"123456789") == 0x29B1.

Table-driven; the test suite cross-checks it against an independent
bit-by-bit implementation.
"""

from __future__ import annotations

_POLY = 0x1021


def _build_table() -> list[int]:
    table = []
    for byte in range(256):
        crc = byte << 8
        for _ in range(8):
            crc = ((crc << 1) ^ _POLY) & 0xFFFF if crc & 0x8000 else (crc << 1) & 0xFFFF
        table.append(crc)
    return table


_TABLE = _build_table()


def crc16(data: bytes, crc: int = 0xFFFF) -> int:
    """Compute the CRC over ``data``, optionally continuing from a prior value."""
    for byte in data:
        crc = ((crc << 8) & 0xFFFF) ^ _TABLE[((crc >> 8) ^ byte) & 0xFF]
    return crc


def crc16_bytes(data: bytes) -> bytes:
    """CRC over ``data`` as the 2 little-endian trailer bytes used on the wire."""
    return crc16(data).to_bytes(2, "little")
