"""Alarm rules: validation, watchlist sightings, station-silence timing
with re-arm on contact, and the no-cascade guarantee."""

from __future__ import annotations

import pytest

from tagtrace.store import AlarmEngine, SchemaViolation, check_rule

UID_A = "e0040112a64b7c01"
UID_B = "e0040112a64b7c02"


def _watchlist(name="watch", uids=None, stations=None, enabled=True):
    return {"name": name, "kind": "watchlist",
            "params": {"uids": uids or [UID_A],
                       **({"stations": stations} if stations is not None else {})},
            "enabled": enabled}


def _silent(name="quiet", duration_s=30, stations=None, enabled=True):
    return {"name": name, "kind": "station_silent",
            "params": {"duration_s": duration_s,
                       **({"stations": stations} if stations is not None else {})},
            "enabled": enabled}


def _sighting(station, uid=UID_A, kind="TAG_ENTER"):
    return {"station": station, "seq": 1, "kind": kind, "uid": uid,
            "sim_timestamp": 0, "ingest_time": 0.0, "detail": ""}


# -- rule validation ---------------------------------------------------------


def test_check_rule_accepts_each_kind():
    check_rule(_watchlist())
    check_rule(_silent())
    check_rule({"name": "b", "kind": "buffer_overrun", "params": {}, "enabled": True})
    check_rule(_silent(duration_s=0.5))
    check_rule(_watchlist(stations=[0, 29]))


@pytest.mark.parametrize("rule", [
    {"name": "x", "kind": "motion", "params": {}, "enabled": True},
    {"name": "x", "kind": "watchlist", "params": [], "enabled": True},
    {"name": "x", "kind": "watchlist", "params": {"uids": []}, "enabled": True},
    {"name": "x", "kind": "watchlist", "params": {"uids": ["e004"]}, "enabled": True},
    {"name": "x", "kind": "watchlist", "params": {"uids": [UID_A], "stations": [30]},
     "enabled": True},
    {"name": "x", "kind": "watchlist", "params": {"uids": [UID_A], "stations": [True]},
     "enabled": True},
    {"name": "x", "kind": "station_silent", "params": {}, "enabled": True},
    {"name": "x", "kind": "station_silent", "params": {"duration_s": 0}, "enabled": True},
    {"name": "x", "kind": "station_silent", "params": {"duration_s": -5}, "enabled": True},
    {"name": "x", "kind": "station_silent", "params": {"duration_s": True}, "enabled": True},
    {"name": "x", "kind": "buffer_overrun", "params": {"stations": "all"}, "enabled": True},
])
def test_check_rule_rejections(rule):
    with pytest.raises(SchemaViolation):
        check_rule(rule)


def test_set_rules_validates_before_replacing():
    engine = AlarmEngine()
    engine.set_rules([_watchlist()])
    with pytest.raises(SchemaViolation):
        engine.set_rules([_watchlist(), _silent(duration_s=0)])
    # the bad batch must not have clobbered the active rules
    assert list(engine.rules) == ["watch"]


# -- watchlist ---------------------------------------------------------------


def test_watchlist_fires_on_enter_and_leave_of_listed_uid():
    engine = AlarmEngine()
    engine.set_rules([_watchlist()])
    for kind in ("TAG_ENTER", "TAG_LEAVE"):
        fired = engine.on_event(_sighting(3, kind=kind))
        assert len(fired) == 1
        assert fired[0]["rule"] == "watch"
        assert fired[0]["station"] == 3
        assert fired[0]["uid"] == UID_A
    assert engine.on_event(_sighting(3, uid=UID_B)) == []
    assert engine.on_event(_sighting(3, kind="CONFIG_CHANGE")) == []


def test_watchlist_station_scope():
    engine = AlarmEngine()
    engine.set_rules([_watchlist(stations=[3, 7])])
    assert engine.on_event(_sighting(3))[0]["station"] == 3
    assert engine.on_event(_sighting(5)) == []
    # empty scope means every station
    engine.set_rules([_watchlist(stations=[])])
    assert len(engine.on_event(_sighting(12))) == 1


def test_disabled_rule_stays_quiet():
    engine = AlarmEngine()
    engine.set_rules([_watchlist(enabled=False), _silent(enabled=False)])
    assert engine.on_event(_sighting(3)) == []
    engine.note_station(3, 0.0)
    assert engine.tick(1000.0) == []


def test_one_event_can_fire_several_rules():
    engine = AlarmEngine()
    engine.set_rules([_watchlist("a"), _watchlist("b", uids=[UID_A, UID_B])])
    fired = engine.on_event(_sighting(4))
    assert sorted(f["rule"] for f in fired) == ["a", "b"]


# -- station silence ----------------------------------------------------------


def test_station_silent_timeline_with_rearm():
    # hand-stepped clock: contact at t=0, 30 s threshold
    engine = AlarmEngine()
    engine.set_rules([_silent(duration_s=30)])
    engine.on_contact(3, 0.0)

    assert engine.tick(10.0) == []
    assert engine.tick(30.0) == []  # exactly at the threshold: not yet overdue
    fired = engine.tick(30.5)
    assert [(f["rule"], f["station"]) for f in fired] == [("quiet", 3)]
    # stays silent until something re-arms it
    assert engine.tick(60.0) == []
    assert engine.tick(600.0) == []

    engine.on_contact(3, 600.0)
    assert engine.tick(620.0) == []
    refired = engine.tick(631.0)
    assert [(f["rule"], f["station"]) for f in refired] == [("quiet", 3)]


def test_station_silent_tracks_each_station_independently():
    engine = AlarmEngine()
    engine.set_rules([_silent(duration_s=10)])
    engine.on_contact(1, 0.0)
    engine.on_contact(2, 5.0)
    fired = engine.tick(12.0)
    assert [f["station"] for f in fired] == [1]
    fired = engine.tick(16.0)
    assert [f["station"] for f in fired] == [2]
    assert engine.tick(20.0) == []


def test_station_silent_explicit_scope_and_unknown_station():
    engine = AlarmEngine()
    engine.set_rules([_silent(stations=[1])])
    engine.on_contact(1, 0.0)
    engine.on_contact(2, 0.0)
    fired = engine.tick(100.0)
    # station 2 is just as overdue but out of scope; station 5 was never
    # contacted so there is nothing to measure silence from
    assert [f["station"] for f in fired] == [1]


def test_note_station_registers_without_refreshing_contact():
    engine = AlarmEngine()
    engine.set_rules([_silent(duration_s=10)])
    engine.note_station(4, 0.0)
    engine.note_station(4, 9.0)  # must not push the contact time forward
    fired = engine.tick(11.0)
    assert [f["station"] for f in fired] == [4]


def test_removing_and_restoring_a_rule_resets_its_silence_latch():
    engine = AlarmEngine()
    engine.set_rules([_silent(duration_s=10)])
    engine.on_contact(3, 0.0)
    assert len(engine.tick(20.0)) == 1
    engine.set_rules([])
    engine.set_rules([_silent(duration_s=10)])
    assert len(engine.tick(21.0)) == 1  # latch dropped with the rule


# -- buffer overrun and cascade protection ------------------------------------


def test_buffer_overrun_passthrough_once_per_report():
    engine = AlarmEngine()
    engine.set_rules([{"name": "full", "kind": "buffer_overrun",
                       "params": {"stations": [3]}, "enabled": True}])
    warning = _sighting(3, uid="", kind="BUFFER_OVERRUN_WARNING")
    first = engine.on_event(warning)
    assert [(f["rule"], f["station"], f["uid"]) for f in first] == [("full", 3, "")]
    # a repeated report is a new alarm, there is no latch here
    assert len(engine.on_event(warning)) == 1
    assert engine.on_event(_sighting(5, uid="", kind="BUFFER_OVERRUN_WARNING")) == []


def test_alarm_events_never_cascade():
    engine = AlarmEngine()
    engine.set_rules([
        _watchlist(),
        {"name": "full", "kind": "buffer_overrun", "params": {}, "enabled": True},
    ])
    # an ALARM record carrying a watchlisted uid must not trigger anything
    assert engine.on_event(_sighting(3, uid=UID_A, kind="ALARM")) == []
