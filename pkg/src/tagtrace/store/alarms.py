"""Alarm rules and their evaluation engine.

Three trigger kinds:

* ``watchlist``      — a listed uid is seen (enter/leave) at a watched
                       station; fires once per sighting.
* ``station_silent`` — a station has not been contacted for longer than
                       the configured duration at evaluation time; fires
                       once, then stays quiet until a new contact re-arms
                       that station.
* ``buffer_overrun`` — a station reported its event buffer crossing the
                       warning level; fires once per report.

The engine only decides; it never writes. Callers turn the returned
alarm dicts into journal entries. Incoming ALARM events are ignored by
every rule, so alarms cannot cascade.
"""

from __future__ import annotations

from tagtrace.store.errors import SchemaViolation

KIND_WATCHLIST = "watchlist"
KIND_STATION_SILENT = "station_silent"
KIND_BUFFER_OVERRUN = "buffer_overrun"
RULE_KINDS = (KIND_WATCHLIST, KIND_STATION_SILENT, KIND_BUFFER_OVERRUN)

# event kind names as stored in the events table
_SIGHTING_KINDS = ("TAG_ENTER", "TAG_LEAVE")
_OVERRUN_KIND = "BUFFER_OVERRUN_WARNING"
_ALARM_KIND = "ALARM"


def check_rule(rule: dict) -> None:
    kind = rule.get("kind")
    if kind not in RULE_KINDS:
        raise SchemaViolation(f"alarm kind must be one of {RULE_KINDS}, got {kind!r}")
    params = rule.get("params")
    if not isinstance(params, dict):
        raise SchemaViolation("alarm params must be an object")
    if kind == KIND_WATCHLIST:
        uids = params.get("uids")
        if not isinstance(uids, list) or not uids:
            raise SchemaViolation("watchlist rule needs a non-empty uids list")
        for u in uids:
            if not isinstance(u, str) or len(u) != 16:
                raise SchemaViolation(f"watchlist uid must be 16 hex chars, got {u!r}")
        _check_stations(params)
    elif kind == KIND_STATION_SILENT:
        duration = params.get("duration_s")
        if not isinstance(duration, (int, float)) or isinstance(duration, bool) or duration <= 0:
            raise SchemaViolation("station_silent rule needs duration_s > 0")
        _check_stations(params)
    else:
        _check_stations(params)


def _check_stations(params: dict) -> None:
    stations = params.get("stations", [])
    if not isinstance(stations, list):
        raise SchemaViolation("stations must be a list of addresses")
    for s in stations:
        if not isinstance(s, int) or isinstance(s, bool) or not 0 <= s <= 29:
            raise SchemaViolation(f"station address out of range: {s!r}")


class AlarmEngine:
    def __init__(self):
        self.rules: dict[str, dict] = {}
        self._last_contact: dict[int, float] = {}
        # (rule name, station) pairs that fired silent and await re-arm
        self._silenced: set[tuple[str, int]] = set()

    def set_rules(self, rules: list[dict]) -> None:
        for rule in rules:
            check_rule(rule)
        self.rules = {r["name"]: dict(r) for r in rules}
        self._silenced = {
            (name, addr) for (name, addr) in self._silenced if name in self.rules
        }

    def note_station(self, addr: int, now: float) -> None:
        """Register a station for silence tracking without marking a
        contact twice."""
        self._last_contact.setdefault(addr, now)

    def on_contact(self, addr: int, now: float) -> None:
        self._last_contact[addr] = now
        self._silenced = {(n, a) for (n, a) in self._silenced if a != addr}

    def _watched(self, params: dict, station: int) -> bool:
        stations = params.get("stations", [])
        return not stations or station in stations

    def on_event(self, event: dict) -> list[dict]:
        """Alarms triggered by one incoming journal event."""
        kind = event["kind"]
        if kind == _ALARM_KIND:
            return []
        fired = []
        for rule in self.rules.values():
            if not rule.get("enabled", True):
                continue
            params = rule["params"]
            if rule["kind"] == KIND_WATCHLIST:
                if (
                    kind in _SIGHTING_KINDS
                    and event.get("uid") in params["uids"]
                    and self._watched(params, event["station"])
                ):
                    fired.append({
                        "rule": rule["name"],
                        "station": event["station"],
                        "uid": event["uid"],
                        "detail": f"watchlisted tag {event['uid']} at station {event['station']}",
                    })
            elif rule["kind"] == KIND_BUFFER_OVERRUN:
                if kind == _OVERRUN_KIND and self._watched(params, event["station"]):
                    fired.append({
                        "rule": rule["name"],
                        "station": event["station"],
                        "uid": "",
                        "detail": f"event buffer near capacity at station {event['station']}",
                    })
        return fired

    def tick(self, now: float) -> list[dict]:
        """Evaluate time-based rules. Call periodically."""
        fired = []
        for rule in self.rules.values():
            if rule["kind"] != KIND_STATION_SILENT or not rule.get("enabled", True):
                continue
            params = rule["params"]
            scope = params.get("stations") or sorted(self._last_contact)
            for addr in scope:
                last = self._last_contact.get(addr)
                if last is None or now - last <= params["duration_s"]:
                    continue
                if (rule["name"], addr) in self._silenced:
                    continue
                self._silenced.add((rule["name"], addr))
                fired.append({
                    "rule": rule["name"],
                    "station": addr,
                    "uid": "",
                    "detail": f"station {addr} silent for over {params['duration_s']} s",
                })
        return fired
