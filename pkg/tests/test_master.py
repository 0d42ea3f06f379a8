"""Master roster, command round-trips, poll discipline, and the socket
transport.
"""

import struct

import pytest

from gen import random_uid
from tagtrace.net import (
    BusServer,
    CommandFailed,
    DuplicateAddress,
    EventKind,
    InProcessBus,
    Master,
    RemoteBus,
    RosterFull,
    Station,
    StationTimeout,
)
from tagtrace.net import commands as c
from tagtrace.rf import DEFAULT_TIMING, PROFILE_MAX, ReaderField, SimClock, TagEmulation

UID = bytes.fromhex("e004010203040506")


def build_net(addrs=(0, 1, 2)):
    clock = SimClock()
    bus = InProcessBus(clock=clock)
    stations = {}
    for addr in addrs:
        st = Station(addr, ReaderField(PROFILE_MAX), clock, DEFAULT_TIMING)
        bus.register(st)
        stations[addr] = st
    master = Master(bus)
    for addr in addrs:
        master.register_station(addr)
    return master, bus, stations, clock


# -- roster ---------------------------------------------------------------------

def test_thirty_stations_is_the_limit():
    master, bus, _, clock = build_net(addrs=range(30))
    with pytest.raises(RosterFull):
        master.register_station(29)
    with pytest.raises(RosterFull):
        bus.register(Station(29, ReaderField(PROFILE_MAX), clock, DEFAULT_TIMING))


def test_duplicate_address_rejected():
    master, bus, _, clock = build_net(addrs=(1, 2))
    with pytest.raises(DuplicateAddress):
        master.register_station(2)
    with pytest.raises(DuplicateAddress):
        bus.register(Station(2, ReaderField(PROFILE_MAX), clock, DEFAULT_TIMING))


# -- single commands ---------------------------------------------------------------

def test_ping_roundtrip():
    master, _, stations, _ = build_net()
    info = master.ping(1)
    assert (info.addr, info.event_count) == (1, 0)


def test_ping_unknown_address_times_out():
    master, _, _, _ = build_net()
    with pytest.raises(StationTimeout):
        master.ping(9)


def test_read_write_tag_spanning_many_frames():
    master, _, stations, _ = build_net()
    tag = TagEmulation(UID, position_cm=5.0)
    stations[1].field.add_tag(tag)
    images = [bytes([i, i, i, i]) for i in range(60)]  # > one frame each way
    master.write_tag(1, UID, 0, images)
    assert master.read_tag(1, UID, 0, 60) == images


def test_command_failure_carries_status():
    master, _, stations, _ = build_net()
    with pytest.raises(CommandFailed) as err:
        master.read_tag(1, UID, 0, 1)
    assert err.value.status == c.ST_TAG_NOT_FOUND


def test_set_addr_updates_roster_and_acks():
    master, bus, stations, _ = build_net(addrs=(1,))
    stations[1].log_event(EventKind.TAG_ENTER, UID)
    master.poll_cycle()
    master.set_addr(1, bytes(4), 8)
    assert master.roster == [8]
    assert master.ping(8).addr == 8
    # the acknowledged sequence followed the station to its new address:
    # only the CONFIG_CHANGE journaled by SET_ADDR itself shows up, the
    # already-acked TAG_ENTER is not re-delivered
    catchup = master.poll_cycle()
    assert [(r.station_addr, r.kind) for r in catchup.events] == [
        (8, EventKind.CONFIG_CHANGE)
    ]
    assert master.poll_cycle().events == []


# -- polling ------------------------------------------------------------------------

def test_poll_collects_events_grouped_and_ordered():
    master, _, stations, _ = build_net(addrs=(0, 1, 2))
    for addr in (0, 1, 2):
        for _ in range(2):
            stations[addr].log_event(EventKind.TAG_ENTER, UID)
    result = master.poll_cycle()
    assert len(result.events) == 6
    assert [(r.station_addr, r.seq) for r in result.events] == [
        (0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)
    ]
    assert result.timeouts == [] and result.gaps == {}


def test_poll_is_exactly_once():
    master, _, stations, _ = build_net()
    stations[1].log_event(EventKind.TAG_ENTER, UID)
    first = master.poll_cycle()
    assert len(first.events) == 1
    assert master.poll_cycle().events == []
    stations[1].log_event(EventKind.TAG_LEAVE, UID)
    second = master.poll_cycle()
    assert [r.kind for r in second.events] == [EventKind.TAG_LEAVE]


def test_poll_paginates_large_backlogs_without_loss():
    master, _, stations, _ = build_net(addrs=(1,))
    for _ in range(40):  # > MAX_EVENTS_PER_FRAME
        stations[1].log_event(EventKind.TAG_ENTER, UID)
    result = master.poll_cycle()
    assert [r.seq for r in result.events] == list(range(1, 41))
    assert master.poll_cycle().events == []


def test_detached_station_skipped_not_fatal():
    master, bus, stations, _ = build_net(addrs=(0, 1, 2))
    stations[0].log_event(EventKind.TAG_ENTER, UID)
    stations[2].log_event(EventKind.TAG_ENTER, UID)
    bus.detach(1)
    result = master.poll_cycle()
    assert result.timeouts == [1]
    assert sorted(r.station_addr for r in result.events) == [0, 2]


def test_eviction_loss_reported_as_gap():
    master, _, stations, _ = build_net(addrs=(1,))
    for _ in range(300):  # ring keeps 46..300 (+ overrun marker)
        stations[1].log_event(EventKind.TAG_ENTER, UID)
    result = master.poll_cycle()
    assert 1 in result.gaps
    acked, first_seen = result.gaps[1]
    assert acked == 0 and first_seen == stations[1].ring.oldest_seq()


def test_event_sink_receives_poll_batches():
    master, _, stations, _ = build_net(addrs=(1,))
    seen = []
    master.event_sink = seen.extend
    stations[1].log_event(EventKind.TAG_ENTER, UID)
    master.poll_cycle()
    assert [r.kind for r in seen] == [EventKind.TAG_ENTER]


def test_transcript_never_interleaves_exchanges():
    master, bus, stations, _ = build_net(addrs=(0, 1))
    stations[0].field.add_tag(TagEmulation(UID, position_cm=5.0))
    master.inventory(0)
    master.ping(1)
    master.poll_cycle()
    lines = bus.transcript.dump().splitlines()
    # every master transmission is answered before the next one starts:
    # directions must follow the pattern (M>S, S>M*)+
    directions = [line.split()[1] for line in lines]
    assert directions[0] == "M>S"
    for prev, cur in zip(directions, directions[1:]):
        if cur == "M>S":
            continue
        assert prev in ("M>S", "S>M")
    # and each M>S is followed by at least one S>M (all these commands reply)
    for i, d in enumerate(directions[:-1]):
        if d == "M>S":
            assert directions[i + 1] == "S>M"


def test_enter_leave_alternate_per_station_and_uid():
    master, _, stations, _ = build_net(addrs=(1,))
    field = stations[1].field
    field.add_tag(TagEmulation(UID, position_cm=90.0))
    import random
    rng = random.Random(4)
    for _ in range(200):
        stations[1].note_crossings(field.move_tag(UID, rng.uniform(0, 80)))
    records = [r for r in stations[1].ring.read_after(0)
               if r.kind in (EventKind.TAG_ENTER, EventKind.TAG_LEAVE)]
    for prev, cur in zip(records, records[1:]):
        assert cur.kind != prev.kind


# -- socket transport ------------------------------------------------------------------

def test_master_over_byte_stream_socket():
    clock = SimClock()
    bus = InProcessBus(clock=clock)
    station = Station(3, ReaderField(PROFILE_MAX), clock, DEFAULT_TIMING)
    station.field.add_tag(TagEmulation(UID, position_cm=5.0))
    bus.register(station)
    server = BusServer(bus)
    server.start()
    try:
        remote = RemoteBus(*server.address, timeout_s=2.0)
        master = Master(remote)
        master.register_station(3)
        assert master.ping(3).addr == 3
        master.write_tag(3, UID, 0, [b"\x01\x02\x03\x04"])
        assert master.read_tag(3, UID, 0, 1) == [b"\x01\x02\x03\x04"]
        assert master.inventory(3) == [UID]
        station.log_event(EventKind.TAG_ENTER, UID)
        assert [r.seq for r in master.poll_cycle().events] == [
            r.seq for r in station.ring.read_after(0)
        ]
        remote.close()
    finally:
        server.stop()
