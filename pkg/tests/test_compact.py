"""Compact-format conversion: binary32 narrowing with loss flags, the
255-byte text limit, and the exact inverse."""

from __future__ import annotations

import math
import random
import struct

import pytest

from tagtrace.store.schema import TABLES
from tagtrace.sync import ConversionLoss
from tagtrace.sync.compact import (
    MAX_TEXT_BYTES,
    CompactTable,
    compact_from_doc,
    compact_to_doc,
    convert_table,
    invert_table,
    narrow_real,
)

F32_MAX = 3.4028234663852886e38  # (2 - 2**-23) * 2**127
F32_MIN_NORMAL = 2.0**-126
F32_MIN_SUBNORMAL = 2.0**-149


# -- narrowing ----------------------------------------------------------------


@pytest.mark.parametrize("value", [
    0.0, -0.0, 1.0, -1.0, 0.5, 1.5, -2.25, 123456.0,
    F32_MAX, -F32_MAX, F32_MIN_NORMAL, F32_MIN_SUBNORMAL, -F32_MIN_SUBNORMAL,
    float("inf"), float("-inf"),
])
def test_narrow_real_exact_values(value):
    narrowed, exact = narrow_real(value)
    assert exact
    assert narrowed == value


@pytest.mark.parametrize("value,expected", [
    (0.1, struct.unpack("<f", struct.pack("<f", 0.1))[0]),
    (1/3, struct.unpack("<f", struct.pack("<f", 1/3))[0]),
    (2.0**-150, 0.0),          # below the smallest subnormal: rounds to zero
    (1e-300, 0.0),
])
def test_narrow_real_inexact_values(value, expected):
    narrowed, exact = narrow_real(value)
    assert not exact
    assert narrowed == expected


@pytest.mark.parametrize("value", [1e39, 3.5e38, 1e308, -1e39, -1e308])
def test_narrow_real_overflow_rounds_to_infinity(value):
    narrowed, exact = narrow_real(value)
    assert not exact
    assert math.isinf(narrowed)
    assert (narrowed > 0) == (value > 0)


def test_narrowed_value_survives_a_second_narrowing_exactly():
    rng = random.Random(31)
    for _ in range(300):
        raw = struct.unpack("<d", struct.pack("<Q", rng.getrandbits(64)))[0]
        if math.isnan(raw):
            continue
        once, _ = narrow_real(raw)
        twice, exact = narrow_real(once)
        assert exact
        assert twice == once


# -- table conversion ----------------------------------------------------------


def _transponder(i, last_seen=12.5, payload="aa" * 4):
    return {"uid": f"e0{i:014x}", "template_id": 1, "version": 0,
            "last_payload": payload, "last_station": 3, "last_seen": last_seen}


def _station(i, name="dock"):
    return {"addr": i, "name": name, "baud_class": 1, "status": "idle"}


def test_convert_invert_identity_for_exact_rows():
    schema = TABLES["transponders"]
    rows = [_transponder(1, last_seen=0.5), _transponder(2, last_seen=42.0)]
    compact = convert_table(schema, rows, revision=7, modified=3.25)
    assert compact.name == "transponders"
    assert compact.revision == 7
    assert compact.modified == 3.25
    assert compact.approx == [{}, {}]
    assert invert_table(schema, compact) == rows


def test_inexact_real_is_narrowed_and_flagged_per_field():
    schema = TABLES["transponders"]
    rows = [_transponder(1, last_seen=0.1), _transponder(2, last_seen=2.0)]
    compact = convert_table(schema, rows, revision=1)
    narrowed = struct.unpack("<f", struct.pack("<f", 0.1))[0]
    assert compact.rows[0]["last_seen"] == narrowed
    assert compact.approx == [{"last_seen": False}, {}]
    # widening what was stored is exact, so a second conversion is clean
    back = invert_table(schema, compact)
    assert back[0]["last_seen"] == narrowed
    again = convert_table(schema, back, revision=1)
    assert again.rows == compact.rows
    assert again.approx == [{}, {}]


def test_text_over_255_bytes_reports_every_offender():
    schema = TABLES["stations"]
    ok = "x" * MAX_TEXT_BYTES
    rows = [
        _station(1, name="y" * (MAX_TEXT_BYTES + 1)),
        _station(2, name=ok),
        _station(3, name="z" * 400),
    ]
    with pytest.raises(ConversionLoss) as excinfo:
        convert_table(schema, rows, revision=1)
    err = excinfo.value
    assert err.table == "stations"
    assert err.losses == [((1,), "name"), ((3,), "name")]
    assert "2 value(s)" in str(err)


def test_text_limit_counts_utf8_bytes_not_characters():
    schema = TABLES["stations"]
    # 128 two-byte characters: 128 chars but 256 bytes
    with pytest.raises(ConversionLoss):
        convert_table(schema, [_station(1, name="é" * 128)], revision=1)
    # 127 of them (254 bytes) fit
    compact = convert_table(schema, [_station(1, name="é" * 127)], revision=1)
    assert compact.rows[0]["name"] == "é" * 127


def test_conversion_loss_message_truncates_long_lists():
    schema = TABLES["stations"]
    rows = [_station(i, name="q" * 300) for i in range(8)]
    with pytest.raises(ConversionLoss) as excinfo:
        convert_table(schema, rows, revision=1)
    assert len(excinfo.value.losses) == 8
    assert "(+3 more)" in str(excinfo.value)


def test_blob_and_json_columns_are_exempt_from_the_text_limit():
    # a 300-byte payload image (blob) and an oversized json value both pass
    schema = TABLES["transponders"]
    compact = convert_table(schema, [_transponder(1, payload="ab" * 300)], revision=1)
    assert compact.rows[0]["last_payload"] == "ab" * 300

    rules = TABLES["alarm_rules"]
    big = {"name": "r", "kind": "watchlist",
           "params": {"uids": ["e0" + "00" * 7] * 40}, "enabled": True}
    out = convert_table(rules, [big], revision=2)
    assert out.rows[0]["params"] == big["params"]


def test_integers_bools_and_blobs_pass_through_unchanged():
    schema = TABLES["users"]
    row = {"username": "ada", "role": "ADMIN", "password_hash": "pbkdf2$1$00$00",
           "enabled": True}
    compact = convert_table(schema, [row], revision=1)
    assert compact.rows == [row]
    assert invert_table(schema, compact) == [row]


def test_real_column_holding_an_int_narrows_cleanly():
    schema = TABLES["transponders"]
    compact = convert_table(schema, [_transponder(1, last_seen=42)], revision=1)
    assert compact.rows[0]["last_seen"] == 42.0
    assert compact.approx == [{}]


# -- document form --------------------------------------------------------------


def test_compact_doc_roundtrip():
    schema = TABLES["transponders"]
    compact = convert_table(
        schema, [_transponder(1, last_seen=0.1), _transponder(2)], revision=5,
        modified=9.0)
    doc = compact_to_doc(compact)
    assert doc["name"] == "transponders"
    assert doc["revision"] == 5
    back = compact_from_doc(doc)
    assert back == compact


def test_compact_from_doc_defaults_missing_approx():
    doc = {"name": "stations", "revision": 2,
           "rows": [{"addr": 1, "name": "a", "baud_class": 0, "status": "idle"}]}
    back = compact_from_doc(doc)
    assert back == CompactTable("stations", 2, 0.0, doc["rows"], [{}])
