"""The 255-entry station event journal and its 90% occupancy warning."""

import pytest

from tagtrace.net import EventKind, EventRecord, EventRing, RING_CAPACITY, unpack_event


def record(seq, kind=EventKind.TAG_ENTER, uid=None, ts=0):
    return EventRecord(seq, 3, kind, uid, ts)


def test_capacity_is_255():
    assert RING_CAPACITY == 255


def test_eviction_keeps_newest_255():
    ring = EventRing()
    for seq in range(1, 301):
        ring.push(record(seq))
    assert len(ring) == 255
    assert ring.oldest_seq() == 46
    assert ring.newest_seq() == 300
    got = ring.read_after(0)
    assert [r.seq for r in got] == list(range(46, 301))


def test_read_after_filters_by_sequence():
    ring = EventRing()
    for seq in range(1, 11):
        ring.push(record(seq))
    assert [r.seq for r in ring.read_after(7)] == [8, 9, 10]
    assert ring.read_after(10) == []
    assert [r.seq for r in ring.read_after(0, limit=4)] == [1, 2, 3, 4]


def test_warning_fires_exactly_once_at_ninety_percent():
    ring = EventRing()
    crossings = [seq for seq in range(1, 301) if ring.push(record(seq))]
    # ceil(0.9 * 255) = 230: the push that reaches 230 records reports, and
    # only that one, even as eviction churns the full ring afterwards
    assert crossings == [230]


def test_warning_rearms_after_clear():
    ring = EventRing()
    assert [s for s in range(1, 231) if ring.push(record(s))] == [230]
    ring.clear()
    assert len(ring) == 0 and ring.oldest_seq() is None
    assert [s for s in range(1, 231) if ring.push(record(s))] == [230]


def test_small_capacity_threshold():
    ring = EventRing(capacity=10)
    crossings = [seq for seq in range(1, 21) if ring.push(record(seq))]
    assert crossings == [9]  # ceil(0.9 * 10)
    assert [r.seq for r in ring.read_after(0)] == list(range(11, 21))


def test_capacity_must_be_positive():
    with pytest.raises(ValueError):
        EventRing(capacity=0)


def test_wire_record_roundtrip():
    uid = bytes.fromhex("e004010203040506")
    rec = EventRecord(700, 9, EventKind.TAG_LEAVE, uid, 123_456_789)
    packed = rec.pack()
    assert len(packed) == 21
    assert unpack_event(packed, 0, 9) == rec
    bare = EventRecord(1, 9, EventKind.CONFIG_CHANGE, None, 5)
    assert unpack_event(bare.pack(), 0, 9) == bare
