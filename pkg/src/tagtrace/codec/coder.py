"""Byte-exact payload encoding.

Layout (everything little-endian):

    header   0x54 | template_id u16 | version u8 | body_length u16   (6 bytes)
    body     fields in declaration order:
                 CHARACTER   1 raw byte
                 STRING(n)   used-length u16, content, zero padding to n
                 INTEGER     i32 two's complement
                 REAL        IEEE 754 binary64
    trailer  CRC-16/CCITT-FALSE over header+body, 2 bytes             (2 bytes)

The layout of a template is fixed, so ``encoded_size`` is a template
constant and equals ``len(encode(t, p))`` for every payload ``p``.
"""

from __future__ import annotations

import struct

from tagtrace.codec import errors
from tagtrace.codec.model import (
    DEFAULT_TAG_CAPACITY,
    FieldKind,
    TagPayload,
    Template,
    TemplateRegistry,
)
from tagtrace.crc import crc16, crc16_bytes

MAGIC = 0x54
HEADER_SIZE = 6
TRAILER_SIZE = 2

_INT32_MIN = -(2**31)
_INT32_MAX = 2**31 - 1


def encoded_size(template: Template) -> int:
    """Total encoded byte count: header + fixed field widths + CRC trailer."""
    return HEADER_SIZE + sum(f.ftype.encoded_width for f in template.fields) + TRAILER_SIZE


def check_capacity(template: Template, capacity: int = DEFAULT_TAG_CAPACITY) -> None:
    size = encoded_size(template)
    if size > capacity:
        raise errors.CapacityExceeded(
            f"template {template.template_id}v{template.version} encodes to "
            f"{size} bytes, capacity is {capacity}"
        )


def _encode_value(ftype, value) -> bytes:
    kind = ftype.kind
    if kind is FieldKind.CHARACTER:
        if not isinstance(value, (bytes, bytearray)) or len(value) != 1:
            raise errors.TypeMismatch(f"character field needs 1 byte, got {value!r}")
        return bytes(value)
    if kind is FieldKind.STRING:
        if not isinstance(value, (bytes, bytearray)):
            raise errors.TypeMismatch(f"string field needs bytes, got {type(value).__name__}")
        if len(value) > ftype.max_len:
            raise errors.Overflow(f"string of {len(value)} bytes exceeds max_len {ftype.max_len}")
        return struct.pack("<H", len(value)) + bytes(value) + bytes(ftype.max_len - len(value))
    if kind is FieldKind.INTEGER:
        if isinstance(value, bool) or not isinstance(value, int):
            raise errors.TypeMismatch(f"integer field needs int, got {type(value).__name__}")
        if not _INT32_MIN <= value <= _INT32_MAX:
            raise errors.Overflow(f"{value} outside signed 32-bit range")
        return struct.pack("<i", value)
    # REAL
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise errors.TypeMismatch(f"real field needs float, got {type(value).__name__}")
    return struct.pack("<d", float(value))


def encode(template: Template, payload: TagPayload, capacity: int = DEFAULT_TAG_CAPACITY) -> bytes:
    """Encode ``payload`` against ``template`` into the byte-exact wire form."""
    if (payload.template_id, payload.version) != template.key:
        raise errors.TypeMismatch(
            f"payload is for template {payload.template_id}v{payload.version}, "
            f"not {template.template_id}v{template.version}"
        )
    if len(payload.values) != len(template.fields):
        raise errors.TypeMismatch(
            f"payload has {len(payload.values)} values for {len(template.fields)} fields"
        )
    check_capacity(template, capacity)
    body = b"".join(_encode_value(f.ftype, v) for f, v in zip(template.fields, payload.values))
    header = struct.pack("<BHBH", MAGIC, template.template_id, template.version, len(body))
    return header + body + crc16_bytes(header + body)


def _decode_value(ftype, body: bytes, offset: int):
    kind = ftype.kind
    if kind is FieldKind.CHARACTER:
        return body[offset : offset + 1], offset + 1
    if kind is FieldKind.STRING:
        (used,) = struct.unpack_from("<H", body, offset)
        if used > ftype.max_len:
            raise errors.MalformedBody(f"string used-length {used} exceeds max_len {ftype.max_len}")
        content = body[offset + 2 : offset + 2 + used]
        return content, offset + 2 + ftype.max_len
    if kind is FieldKind.INTEGER:
        (value,) = struct.unpack_from("<i", body, offset)
        return value, offset + 4
    (value,) = struct.unpack_from("<d", body, offset)
    return value, offset + 8


def decode(data: bytes, registry: TemplateRegistry) -> TagPayload:
    """Decode arbitrary bytes into a payload, or raise a precise codec error.

    Checks, in order: magic byte, header completeness, declared length vs
    actual bytes, CRC trailer, template registration, and body layout
    consistency. ``decode(encode(t, p)) == p`` for every valid pair.
    """
    if len(data) < 1 or data[0] != MAGIC:
        raise errors.BadMagic("payload does not start with the magic byte")
    if len(data) < HEADER_SIZE:
        raise errors.TruncatedPayload(f"{len(data)} bytes is shorter than the 6-byte header")
    _, template_id, version, body_len = struct.unpack_from("<BHBH", data, 0)
    total = HEADER_SIZE + body_len + TRAILER_SIZE
    if len(data) < total:
        raise errors.TruncatedPayload(f"header declares {total} bytes, only {len(data)} present")
    covered = data[: HEADER_SIZE + body_len]
    crc_stored = int.from_bytes(data[HEADER_SIZE + body_len : total], "little")
    if crc16(covered) != crc_stored:
        raise errors.CrcMismatch("trailer CRC does not match header+body")
    template = registry.get(template_id, version)
    if template is None:
        raise errors.UnknownTemplate(template_id, version)
    expected_body = encoded_size(template) - HEADER_SIZE - TRAILER_SIZE
    if body_len != expected_body:
        raise errors.MalformedBody(
            f"body length {body_len} inconsistent with template ({expected_body} expected)"
        )
    body = data[HEADER_SIZE : HEADER_SIZE + body_len]
    values = []
    offset = 0
    for f in template.fields:
        value, offset = _decode_value(f.ftype, body, offset)
        values.append(value)
    return TagPayload(template_id, version, values)


def blocks_for(data: bytes, block_size: int, block_count: int | None = None) -> list[bytes]:
    """Split an encoded payload into zero-padded block images for tag memory."""
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    nblocks = -(-len(data) // block_size)
    if block_count is not None and nblocks > block_count:
        raise errors.CapacityExceeded(
            f"{len(data)} bytes need {nblocks} blocks, tag has {block_count}"
        )
    padded = data + bytes(nblocks * block_size - len(data))
    return [padded[i * block_size : (i + 1) * block_size] for i in range(nblocks)]


def bytes_from_blocks(blocks: list[bytes]) -> bytes:
    """Inverse of blocks_for: strip the padding using the header's body_length."""
    joined = b"".join(blocks)
    if not joined:
        return b""
    if len(joined) < HEADER_SIZE or joined[0] != MAGIC:
        raise errors.BadMagic("block images do not hold an encoded payload")
    (body_len,) = struct.unpack_from("<H", joined, 4)
    total = HEADER_SIZE + body_len + TRAILER_SIZE
    if len(joined) < total:
        raise errors.TruncatedPayload(f"blocks hold {len(joined)} bytes, payload needs {total}")
    return joined[:total]
