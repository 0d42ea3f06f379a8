"""Payload codec: sizes, golden byte strings, roundtrips, corruption
rejection, block packing.

Golden fixtures were computed with the bit-by-bit CRC reference in
oracles.py and the layout rules, not with the codec under test.
"""

import random
import struct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import crc16_ccitt_false
from gen import random_payload, random_template
from tagtrace.codec import (
    BadMagic,
    CapacityExceeded,
    CodecError,
    CrcMismatch,
    FieldKind,
    FieldType,
    MalformedBody,
    Overflow,
    TagPayload,
    Template,
    TemplateError,
    TemplateField,
    TemplateRegistry,
    TruncatedPayload,
    TypeMismatch,
    UnknownTemplate,
    blocks_for,
    bytes_from_blocks,
    decode,
    encode,
    encoded_size,
)

S = FieldKind.STRING
I = FieldKind.INTEGER
R = FieldKind.REAL
C = FieldKind.CHARACTER


def tpl(tid, ver, *fields):
    return Template(tid, ver, f"t{tid}", tuple(TemplateField(n, FieldType(k, m)) for n, k, m in fields))


ASSET = tpl(7, 1, ("loc", S, 8), ("qty", I, None), ("price", R, None))


# -- encoded_size ------------------------------------------------------------

def test_encoded_size_empty_template():
    assert encoded_size(tpl(1, 0)) == 8


def test_encoded_size_single_integer():
    assert encoded_size(tpl(1, 0, ("qty", I, None))) == 12


def test_encoded_size_mixed_fields():
    # 6 header + (2+8) string + 4 integer + 8 real + 2 trailer
    assert encoded_size(ASSET) == 30


def test_encoded_size_matches_encode_length_for_any_payload():
    rng = random.Random(11)
    for tid in range(40):
        t = random_template(rng, tid)
        data = encode(t, random_payload(rng, t))
        assert len(data) == encoded_size(t)


# -- golden encodings --------------------------------------------------------

def test_golden_zero_field_payload():
    t = tpl(1, 0)
    data = encode(t, TagPayload(1, 0, []))
    assert data == bytes.fromhex("54010000000074d2")
    # independent trailer check
    assert data[-2:] == crc16_ccitt_false(data[:-2]).to_bytes(2, "little")


def test_golden_mixed_payload():
    data = encode(ASSET, TagPayload(7, 1, [b"A3", 12, 4.5]))
    assert data.hex() == (
        "540700011600020041330000000000000c00000000000000000012401b74"
    )
    assert data[-2:] == crc16_ccitt_false(data[:-2]).to_bytes(2, "little")


def test_golden_zero_integer_body():
    t = tpl(2, 3, ("qty", I, None))
    data = encode(t, TagPayload(2, 3, [0]))
    assert data == bytes.fromhex("54020003040000000000c4b2")
    assert data[6:10] == bytes(4)


# -- roundtrips ---------------------------------------------------------------

def _registry_with(*templates):
    reg = TemplateRegistry()
    for t in templates:
        reg.register(t)
    return reg


def test_roundtrip_golden_payloads():
    reg = _registry_with(tpl(1, 0), ASSET, tpl(2, 3, ("qty", I, None)))
    for t, payload in [
        (tpl(1, 0), TagPayload(1, 0, [])),
        (ASSET, TagPayload(7, 1, [b"A3", 12, 4.5])),
        (tpl(2, 3, ("qty", I, None)), TagPayload(2, 3, [0])),
    ]:
        assert decode(encode(t, payload), reg) == payload


def test_roundtrip_randomized():
    rng = random.Random(0xC0DEC)
    for tid in range(200):
        t = random_template(rng, tid)
        reg = _registry_with(t)
        p = random_payload(rng, t)
        assert decode(encode(t, p), reg) == p


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 0xFFFF), st.integers(0, 0xFF), st.data())
def test_roundtrip_property(tid, ver, data):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    t = random_template(rng, tid, ver)
    reg = _registry_with(t)
    p = random_payload(rng, t)
    assert decode(encode(t, p), reg) == p


# -- corruption ----------------------------------------------------------------

def test_every_single_byte_corruption_rejected():
    rng = random.Random(99)
    t = ASSET
    reg = _registry_with(t)
    p = TagPayload(7, 1, [b"A3", 12, 4.5])
    data = bytearray(encode(t, p))
    for i in range(len(data)):
        for delta in (1, 0x80):
            mutated = bytes(data[:i] + bytes([(data[i] + delta) & 0xFF]) + data[i + 1:])
            with pytest.raises(CodecError):
                decode(mutated, reg)


def test_flipped_crc_byte_is_crc_mismatch():
    reg = _registry_with(ASSET)
    data = bytearray(encode(ASSET, TagPayload(7, 1, [b"A3", 12, 4.5])))
    data[-1] ^= 0xFF
    with pytest.raises(CrcMismatch):
        decode(bytes(data), reg)


def test_bad_magic():
    reg = _registry_with(ASSET)
    data = bytearray(encode(ASSET, TagPayload(7, 1, [b"A3", 12, 4.5])))
    data[0] = 0x00
    with pytest.raises(BadMagic):
        decode(bytes(data), reg)


def test_truncated_payload():
    reg = _registry_with(ASSET)
    data = encode(ASSET, TagPayload(7, 1, [b"A3", 12, 4.5]))
    for cut in (0, 3, 5, len(data) - 1):
        with pytest.raises((TruncatedPayload, BadMagic)):
            decode(data[:cut], reg)


def test_unknown_template():
    reg = TemplateRegistry()
    data = encode(ASSET, TagPayload(7, 1, [b"A3", 12, 4.5]))
    with pytest.raises(UnknownTemplate):
        decode(data, reg)


def test_body_length_mismatch_is_malformed():
    # header claims a shorter body than the template's layout requires
    t = tpl(3, 0, ("qty", I, None))
    reg = _registry_with(t)
    body = struct.pack("<i", 5)
    header = bytes([0x54]) + struct.pack("<HBH", 3, 0, 2)
    data = header + body[:2] + crc16_ccitt_false(header + body[:2]).to_bytes(2, "little")
    with pytest.raises(MalformedBody):
        decode(data, reg)


# -- value validation -----------------------------------------------------------

def test_type_mismatch():
    t = tpl(4, 0, ("qty", I, None))
    with pytest.raises(TypeMismatch):
        encode(t, TagPayload(4, 0, [b"x"]))


def test_string_overflow():
    t = tpl(4, 0, ("loc", S, 4))
    with pytest.raises(Overflow):
        encode(t, TagPayload(4, 0, [b"12345"]))


def test_value_count_must_match_field_count():
    t = tpl(4, 0, ("qty", I, None))
    with pytest.raises(CodecError):
        encode(t, TagPayload(4, 0, []))


def test_capacity_exceeded():
    t = tpl(5, 0, ("blob", S, 200))
    p = TagPayload(5, 0, [b""])
    with pytest.raises(CapacityExceeded):
        encode(t, p, capacity=64)


# -- template validation ----------------------------------------------------------

def test_duplicate_field_names_rejected():
    with pytest.raises(TemplateError):
        tpl(6, 0, ("a", I, None), ("a", R, None))


def test_empty_field_name_rejected():
    with pytest.raises(TemplateError):
        tpl(6, 0, ("", I, None))


def test_long_field_name_rejected():
    with pytest.raises(TemplateError):
        tpl(6, 0, ("x" * 33, I, None))


def test_string_length_bounds():
    with pytest.raises(TemplateError):
        FieldType(S, 0)
    with pytest.raises(TemplateError):
        FieldType(S, 209)
    FieldType(S, 208)  # largest allowed


def test_registry_rejects_duplicate_key():
    reg = _registry_with(tpl(9, 2))
    with pytest.raises(TemplateError):
        reg.register(tpl(9, 2, ("qty", I, None)))


# -- block packing -----------------------------------------------------------------

def test_blocks_for_sizes():
    assert [len(b) for b in blocks_for(bytes(10), 4)] == [4, 4, 4]
    assert blocks_for(bytes(10), 4)[-1] == bytes(4)
    assert [len(b) for b in blocks_for(bytes(8), 4)] == [4, 4]
    assert blocks_for(b"", 4) == []


def test_blocks_for_capacity():
    with pytest.raises(CapacityExceeded):
        blocks_for(bytes(100), 4, block_count=24)
    blocks_for(bytes(96), 4, block_count=24)


def test_block_roundtrip_on_encoded_payloads():
    rng = random.Random(0xB10C)
    reg = TemplateRegistry()
    for tid in range(50):
        t = random_template(rng, tid)
        reg.register(t)
        p = random_payload(rng, t)
        data = encode(t, p)
        rebuilt = bytes_from_blocks(blocks_for(data, 4))
        assert decode(rebuilt, reg) == p
