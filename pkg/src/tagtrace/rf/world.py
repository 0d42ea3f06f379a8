"""The simulation world: one clock, one field per station, a global uid registry.

All mutating operations go through the world owner; the world itself is a
single logical timeline with a microsecond clock that air operations
advance deterministically.

World description file (line-oriented, ``#`` comments allowed):

    profile <name> read_range=<cm> [write_range=<cm>] [cap=<n>]
    station <addr> profile=<name> [name=<text>]
    tag <uid 16 hex digits> station=<addr> position=<cm>

Profiles must be declared before the stations that use them; stations
before their tags.
"""

from __future__ import annotations

import shlex

from tagtrace.rf.errors import DuplicateUid, RfError, TagNotFound, WorldFileError
from tagtrace.rf.field import FieldChange, ReaderField
from tagtrace.rf.model import (
    DEFAULT_TIMING,
    FieldGeometry,
    PROFILE_DEFAULT,
    SlotTiming,
    TagEmulation,
)


class SimClock:
    def __init__(self, start_us: int = 0):
        self.now_us = start_us

    def advance(self, delta_us: int) -> int:
        if delta_us < 0:
            raise ValueError("clock cannot run backwards")
        self.now_us += delta_us
        return self.now_us


class SimWorld:
    """Fields keyed by station address, sharing a clock and uid uniqueness."""

    def __init__(self, timing: SlotTiming = DEFAULT_TIMING):
        self.clock = SimClock()
        self.timing = timing
        self.fields: dict[int, ReaderField] = {}
        self.profiles: dict[str, FieldGeometry] = {}
        self._uid_home: dict[bytes, int] = {}  # uid -> station addr

    def add_field(self, station_addr: int, geometry: FieldGeometry = PROFILE_DEFAULT) -> ReaderField:
        if station_addr in self.fields:
            raise RfError(f"station {station_addr} already has a field")
        field = ReaderField(geometry)
        self.fields[station_addr] = field
        return field

    def field_for(self, station_addr: int) -> ReaderField:
        try:
            return self.fields[station_addr]
        except KeyError:
            raise RfError(f"no field for station {station_addr}") from None

    def place_tag(self, station_addr: int, tag: TagEmulation) -> None:
        if tag.uid in self._uid_home:
            raise DuplicateUid(f"uid {tag.uid.hex()} already placed in this world")
        self.field_for(station_addr).add_tag(tag)
        self._uid_home[tag.uid] = station_addr

    def move_tag(self, uid: bytes, new_position_cm: float) -> list[FieldChange]:
        home = self._uid_home.get(uid)
        if home is None:
            raise TagNotFound(f"uid {uid.hex()} not in this world")
        return self.fields[home].move_tag(uid, new_position_cm)

    def remove_tag(self, uid: bytes) -> list[FieldChange]:
        """Take the tag out of the world entirely (e.g. before re-placing
        it at another station). Emits the LEAVE crossing if it was in range."""
        home = self._uid_home.pop(uid, None)
        if home is None:
            raise TagNotFound(f"uid {uid.hex()} not in this world")
        return self.fields[home].remove_tag(uid)

    def station_of(self, uid: bytes) -> int | None:
        return self._uid_home.get(uid)

    def tags(self) -> list[tuple[int, TagEmulation]]:
        out = []
        for addr in sorted(self.fields):
            for uid in sorted(self.fields[addr].tags):
                out.append((addr, self.fields[addr].tags[uid]))
        return out


def _kv(tokens: list[str], lineno: int) -> dict[str, str]:
    out = {}
    for token in tokens:
        if "=" not in token:
            raise WorldFileError(f"line {lineno}: expected key=value, got {token!r}")
        key, value = token.split("=", 1)
        out[key] = value
    return out


def parse_world(text: str, timing: SlotTiming = DEFAULT_TIMING) -> tuple[SimWorld, dict[int, dict]]:
    """Build a SimWorld from a world file.

    Returns (world, station_info) where station_info maps station address
    to the ``name=`` and ``profile=`` attributes for the network layer.
    """
    world = SimWorld(timing=timing)
    stations: dict[int, dict] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise WorldFileError(f"line {lineno}: {exc}") from None
        directive, args = tokens[0], tokens[1:]
        try:
            if directive == "profile":
                opts = _kv(args[1:], lineno)
                world.profiles[args[0]] = FieldGeometry(
                    read_range_cm=float(opts["read_range"]),
                    write_range_cm=float(opts["write_range"]) if "write_range" in opts else None,
                    inventory_cap=int(opts.get("cap", 64)),
                )
            elif directive == "station":
                addr = int(args[0])
                opts = _kv(args[1:], lineno)
                profile_name = opts.get("profile")
                if profile_name is not None and profile_name not in world.profiles:
                    raise WorldFileError(f"line {lineno}: unknown profile {profile_name!r}")
                geometry = world.profiles.get(profile_name, PROFILE_DEFAULT)
                world.add_field(addr, geometry)
                stations[addr] = {"name": opts.get("name", f"station-{addr}"), "profile": profile_name}
            elif directive == "tag":
                uid = bytes.fromhex(args[0])
                opts = _kv(args[1:], lineno)
                tag = TagEmulation(uid=uid, position_cm=float(opts["position"]))
                world.place_tag(int(opts["station"]), tag)
            else:
                raise WorldFileError(f"line {lineno}: unknown directive {directive!r}")
        except WorldFileError:
            raise
        except (KeyError, IndexError, ValueError, RfError) as exc:
            raise WorldFileError(f"line {lineno}: {exc}") from None
    return world, stations


def serialize_world(world: SimWorld, stations: dict[int, dict] | None = None) -> str:
    stations = stations or {}
    lines = []
    named = {}
    for addr in sorted(world.fields):
        geometry = world.fields[addr].geometry
        info = stations.get(addr, {})
        pname = info.get("profile") or f"p{addr}"
        if pname not in named:
            named[pname] = geometry
            lines.append(
                f"profile {pname} read_range={geometry.read_range_cm:g} "
                f"write_range={geometry.write_range_cm:g} cap={geometry.inventory_cap}"
            )
    for addr in sorted(world.fields):
        info = stations.get(addr, {})
        pname = info.get("profile") or f"p{addr}"
        name = info.get("name", f"station-{addr}")
        lines.append(f'station {addr} profile={pname} name="{name}"')
    for addr, tag in world.tags():
        lines.append(f"tag {tag.uid.hex()} station={addr} position={tag.position_cm:g}")
    return "\n".join(lines) + "\n"
