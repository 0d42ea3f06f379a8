"""Application core: one object owning the store, the simulated world,
the station network, alarms, and sync devices.

All public methods take the caller's role and enforce the same matrix
the store uses: VIEWER reads, OPERATOR operates, ADMIN additionally
manages users and restores backups. A single re-entrant lock serializes
public entry points; the store's single-writer contract and the sim
world's ownership both hang off it.

Event flow: stations log into their rings as tags cross field edges;
``poll`` drains the rings through the master, lands the records in the
events table, updates transponder last-seen info, and feeds the alarm
engine. Alarms the engine raises become central-origin events under
station number 255 with their own sequence counter.
"""

from __future__ import annotations

import secrets
import threading
import time
from typing import Callable

from tagtrace.codec import (
    FieldKind,
    FieldType,
    TagPayload,
    Template,
    TemplateField,
    TemplateRegistry,
    UnknownTemplate,
    blocks_for,
    bytes_from_blocks,
    decode,
    encode,
    encoded_size,
)
from tagtrace.net import EventKind, InProcessBus, Master, Station
from tagtrace.rf import DEFAULT_BLOCK_COUNT, DEFAULT_BLOCK_SIZE, TagEmulation, parse_world, serialize_world
from tagtrace.service.config import ServiceConfig
from tagtrace.store import (
    ROLE_ADMIN,
    ROLE_OPERATOR,
    ROLE_VIEWER,
    AlarmEngine,
    DataStore,
    InvalidQuery,
    NotFound,
    Unauthorized,
    authenticate,
    check_pattern,
    check_rule,
    hash_password,
    load_encrypted_tables,
    render_report,
)
from tagtrace.store.schema import CENTRAL_STATION
from tagtrace.sync import DeviceLink, HandheldDevice, SyncManifest, sync_session

_RANK = {ROLE_VIEWER: 0, ROLE_OPERATOR: 1, ROLE_ADMIN: 2}

# tags relocated between stations are first placed here, far outside any
# field, so the subsequent move emits the ENTER crossing
_FAR_AWAY_CM = 1e9

DEFAULT_SYNC_TABLES = ["transponders", "stations", "events", "templates"]


def _require(role: str, least: str) -> None:
    if role not in _RANK:
        raise Unauthorized(f"unknown role {role!r}")
    if _RANK[role] < _RANK[least]:
        raise Unauthorized(f"role {role} is below {least}")


class AppCore:
    def __init__(self, store: DataStore, world_text: str, *,
                 session_hours: float = 8.0,
                 devices: list[str] | None = None,
                 device_quota: int = 8 * 1024 * 1024,
                 sync_archive: str | None = None,
                 wall_clock: Callable[[], float] = time.time):
        self.lock = threading.RLock()
        self.store = store
        self.wall_clock = wall_clock
        self.session_hours = session_hours
        self.sync_archive = sync_archive
        self.sessions: dict[str, dict] = {}

        self.world = None
        self.station_info: dict[int, dict] = {}
        self.stations: dict[int, Station] = {}
        self.bus = None
        self.master = None
        self._load_world(world_text)

        self.registry = TemplateRegistry()
        self._rebuild_registry()

        self.alarms = AlarmEngine()
        self._reload_alarm_rules()
        for addr in self.stations:
            self.alarms.note_station(addr, self._sim_seconds())

        self._central_seq = 0
        for row in self.store.tables["events"].scan():
            if row["station"] == CENTRAL_STATION:
                self._central_seq = max(self._central_seq, row["seq"])

        self.devices: dict[str, HandheldDevice] = {}
        self.links: dict[str, DeviceLink] = {}
        self.manifests: dict[str, dict] = {}
        for device_id in devices or []:
            self.devices[device_id] = HandheldDevice(device_id, device_quota)
            self.links[device_id] = DeviceLink(self.devices[device_id])

    @classmethod
    def from_config(cls, cfg: ServiceConfig) -> "AppCore":
        store = DataStore(cfg.store_dir)
        with open(cfg.world_path, encoding="utf-8") as fh:
            world_text = fh.read()
        core = cls(
            store,
            world_text,
            session_hours=cfg.session_hours,
            devices=cfg.devices,
            device_quota=cfg.device_quota,
            sync_archive=cfg.sync_archive or None,
        )
        if store.count(ROLE_ADMIN, "users") == 0 and cfg.admin_password:
            store.insert(ROLE_ADMIN, "users", {
                "username": cfg.admin_user,
                "role": ROLE_ADMIN,
                "password_hash": hash_password(cfg.admin_password),
                "enabled": True,
            })
        return core

    # -- construction helpers -------------------------------------------------

    def _load_world(self, text: str) -> None:
        world, station_info = parse_world(text)
        self.world = world
        self.station_info = station_info
        self.bus = InProcessBus(clock=world.clock)
        self.master = Master(self.bus)
        self.master.event_sink = self._ingest_records
        self.stations = {}
        for addr in sorted(world.fields):
            info = station_info.get(addr, {})
            station = Station(addr, world.field_for(addr), world.clock,
                              world.timing, name=info.get("name", ""))
            self.stations[addr] = station
            self.bus.register(station)
            self.master.register_station(addr)
        for addr, station in self.stations.items():
            if not self.store.tables["stations"].has((addr,)):
                self.store.upsert(ROLE_OPERATOR, "stations", {
                    "addr": addr,
                    "name": station.name,
                    "baud_class": station.baud_class,
                    "status": "online",
                })

    def _rebuild_registry(self) -> None:
        registry = TemplateRegistry()
        for row in self.store.tables["templates"].scan():
            registry.register(_template_from_record(row))
        self.registry = registry

    def _reload_alarm_rules(self) -> None:
        self.alarms.set_rules([
            row for row in self.store.tables["alarm_rules"].scan() if row.get("enabled", True)
        ])

    def _sim_seconds(self) -> float:
        return self.world.clock.now_us / 1_000_000

    def _template(self, template_id: int, version: int) -> Template:
        template = self.registry.get(template_id, version)
        if template is None:
            raise UnknownTemplate(template_id, version)
        return template

    # -- sessions ---------------------------------------------------------------

    def login(self, username: str, password: str) -> dict:
        with self.lock:
            user = authenticate(self.store.tables["users"], username, password)
            token = secrets.token_hex(16)
            session = {
                "token": token,
                "username": username,
                "role": user["role"],
                "expires": self.wall_clock() + self.session_hours * 3600,
            }
            self.sessions[token] = session
            return dict(session)

    def auth(self, token: str | None) -> dict:
        with self.lock:
            session = self.sessions.get(token or "")
            if session is None or session["expires"] <= self.wall_clock():
                self.sessions.pop(token or "", None)
                raise Unauthorized("missing, unknown, or expired session token")
            return dict(session)

    def logout(self, token: str) -> None:
        with self.lock:
            self.sessions.pop(token, None)

    # -- health -------------------------------------------------------------------

    def health(self) -> dict:
        with self.lock:
            return {
                "status": "ok",
                "stations": len(self.master.roster),
                "sim_time_us": self.world.clock.now_us,
                "revisions": self.store.revisions(),
                "events": self.store.count(ROLE_VIEWER, "events"),
            }

    # -- templates ------------------------------------------------------------------

    def define_template(self, role: str, doc: dict) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            template = _template_from_record(doc)  # validates
            record = _template_to_record(template)
            self.store.upsert(role, "templates", record)
            self._rebuild_registry()
            record["encoded_size"] = encoded_size(template)
            return record

    def list_templates(self, role: str) -> list[dict]:
        _require(role, ROLE_VIEWER)
        with self.lock:
            out = []
            for row in self.store.tables["templates"].scan():
                row["encoded_size"] = encoded_size(_template_from_record(row))
                out.append(row)
            return out

    def get_template(self, role: str, template_id: int, version: int) -> dict:
        _require(role, ROLE_VIEWER)
        with self.lock:
            row = self.store.get(role, "templates", (template_id, version))
            row["encoded_size"] = encoded_size(_template_from_record(row))
            return row

    def delete_template(self, role: str, template_id: int, version: int) -> None:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            self.store.delete(role, "templates", (template_id, version))
            self._rebuild_registry()

    # -- tags --------------------------------------------------------------------------

    def write_tag(self, role: str, station: int, uid_hex: str, template_id: int,
                  version: int, values: list) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            template = self._template(template_id, version)
            values = _values_to_codec(template, values)
            data = encode(template, TagPayload(template_id, version, values))
            images = blocks_for(data, DEFAULT_BLOCK_SIZE)
            uid = bytes.fromhex(uid_hex)
            self.master.write_tag(station, uid, 0, images)
            self.store.upsert(role, "transponders", {
                "uid": uid_hex,
                "template_id": template_id,
                "version": version,
                "last_payload": data.hex(),
                "last_station": station,
                "last_seen": self._sim_seconds(),
            })
            return {"uid": uid_hex, "bytes": len(data), "blocks": len(images)}

    def read_tag(self, role: str, station: int, uid_hex: str) -> dict:
        _require(role, ROLE_VIEWER)
        with self.lock:
            uid = bytes.fromhex(uid_hex)
            images = self.master.read_tag(station, uid, 0, DEFAULT_BLOCK_COUNT)
            payload = decode(bytes_from_blocks(images), self.registry)
            template = self._template(payload.template_id, payload.version)
            return {
                "uid": uid_hex,
                "template_id": payload.template_id,
                "version": payload.version,
                "template_name": template.name,
                "values": _values_to_json(template, payload.values),
            }

    def inventory(self, role: str, station: int) -> dict:
        _require(role, ROLE_VIEWER)
        with self.lock:
            uids = self.master.inventory(station)
            return {"station": station, "uids": [u.hex() for u in uids]}

    # -- stations --------------------------------------------------------------------------

    def list_stations(self, role: str) -> list[dict]:
        _require(role, ROLE_VIEWER)
        with self.lock:
            rows = self.store.scan(role, "stations")
            for row in rows:
                station = self.stations.get(row["addr"])
                row["in_range"] = (
                    [u.hex() for u in station.field.in_range_uids()] if station else []
                )
                row["ring_fill"] = len(station.ring) if station else 0
            return rows

    def configure_station(self, role: str, addr: int, *, password: bytes,
                          name: str | None = None, new_addr: int | None = None,
                          baud_class: int | None = None,
                          new_password: bytes | None = None) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            row = self.store.get(role, "stations", (addr,))
            if baud_class is not None:
                self.master.set_baud(addr, password, baud_class)
                row["baud_class"] = baud_class
            if new_password is not None:
                self.master.set_password(addr, password, new_password)
                password = new_password
            if name is not None:
                row["name"] = name
                if addr in self.stations:
                    self.stations[addr].name = name
            if new_addr is not None and new_addr != addr:
                self.master.set_addr(addr, password, new_addr)
                self.stations[new_addr] = self.stations.pop(addr)
                self.world.fields[new_addr] = self.world.fields.pop(addr)
                self.store.delete(role, "stations", (addr,))
                row["addr"] = new_addr
            self.store.upsert(role, "stations", row)
            return row

    # -- events and polling -----------------------------------------------------------------

    def _next_central_seq(self) -> int:
        self._central_seq += 1
        return self._central_seq

    def _log_central_event(self, kind: str, uid: str, detail: str) -> dict:
        row = {
            "station": CENTRAL_STATION,
            "seq": self._next_central_seq(),
            "kind": kind,
            "uid": uid,
            "sim_timestamp": self.world.clock.now_us,
            "ingest_time": self.wall_clock(),
            "detail": detail,
        }
        self.store.insert(ROLE_OPERATOR, "events", row)
        return row

    def _raise_alarms(self, fired: list[dict]) -> int:
        for alarm in fired:
            self._log_central_event("ALARM", alarm.get("uid", ""),
                                    f"[{alarm['rule']}] {alarm['detail']}")
        return len(fired)

    def _ingest_records(self, records) -> None:
        for record in records:
            uid_hex = record.uid.hex() if record.uid else ""
            row = {
                "station": record.station_addr,
                "seq": record.seq,
                "kind": EventKind(record.kind).name,
                "uid": uid_hex,
                "sim_timestamp": record.sim_timestamp_us,
                "ingest_time": self.wall_clock(),
                "detail": "",
            }
            self.store.upsert(ROLE_OPERATOR, "events", row)
            if uid_hex and record.kind in (EventKind.TAG_ENTER, EventKind.TAG_LEAVE):
                self._touch_transponder(uid_hex, record.station_addr,
                                        record.sim_timestamp_us / 1_000_000)
            self._raise_alarms(self.alarms.on_event(row))

    def _touch_transponder(self, uid_hex: str, station: int, seen_s: float) -> None:
        table = self.store.tables["transponders"]
        if table.has((uid_hex,)):
            row = table.get((uid_hex,))
        else:
            row = {"uid": uid_hex, "template_id": 0, "version": 0, "last_payload": ""}
        row["last_station"] = station
        row["last_seen"] = seen_s
        self.store.upsert(ROLE_OPERATOR, "transponders", row)

    def poll(self, role: str) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            result = self.master.poll_cycle()
            now_s = self._sim_seconds()
            for addr in self.master.roster:
                if addr not in result.timeouts:
                    self.alarms.on_contact(addr, now_s)
            for addr, (acked, first_seen) in result.gaps.items():
                self._log_central_event(
                    "BUFFER_OVERRUN_WARNING", "",
                    f"station {addr} evicted events {acked + 1}..{first_seen - 1} before pickup",
                )
            alarm_count = self._raise_alarms(self.alarms.tick(now_s))
            return {
                "events": len(result.events),
                "timeouts": result.timeouts,
                "gaps": {str(a): list(g) for a, g in result.gaps.items()},
                "alarms": alarm_count,
            }

    def query_journal(self, role: str, *, station: int | None = None,
                      kind: str | None = None, uid: str | None = None,
                      since_us: int | None = None, until_us: int | None = None,
                      offset: int = 0, limit: int = 100,
                      descending: bool = False) -> tuple[list[dict], int]:
        _require(role, ROLE_VIEWER)
        if limit < 1 or limit > 1000:
            raise InvalidQuery("limit must be 1..1000")
        if offset < 0:
            raise InvalidQuery("offset must not be negative")
        if since_us is not None and until_us is not None and since_us > until_us:
            raise InvalidQuery("time range start exceeds end")
        with self.lock:
            rows = self.store.tables["events"].scan()
        kept = [
            r for r in rows
            if (station is None or r["station"] == station)
            and (kind is None or r["kind"] == kind)
            and (uid is None or r["uid"] == uid)
            and (since_us is None or r["sim_timestamp"] >= since_us)
            and (until_us is None or r["sim_timestamp"] <= until_us)
        ]
        kept.sort(key=lambda r: (r["sim_timestamp"], r["station"], r["seq"]),
                  reverse=descending)
        return kept[offset : offset + limit], len(kept)

    # -- alarm rules ------------------------------------------------------------------------

    def set_alarm_rule(self, role: str, rule: dict) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            check_rule(rule)
            self.store.upsert(role, "alarm_rules", rule)
            self._reload_alarm_rules()
            return dict(rule)

    def list_alarm_rules(self, role: str) -> list[dict]:
        _require(role, ROLE_VIEWER)
        with self.lock:
            return self.store.scan(role, "alarm_rules")

    def delete_alarm_rule(self, role: str, name: str) -> None:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            self.store.delete(role, "alarm_rules", (name,))
            self._reload_alarm_rules()

    # -- report patterns ----------------------------------------------------------------------

    def set_report_pattern(self, role: str, pattern: dict) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            check_pattern(pattern)
            self.store.upsert(role, "report_patterns", pattern)
            return dict(pattern)

    def list_report_patterns(self, role: str) -> list[dict]:
        _require(role, ROLE_VIEWER)
        with self.lock:
            return self.store.scan(role, "report_patterns")

    def delete_report_pattern(self, role: str, name: str) -> None:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            self.store.delete(role, "report_patterns", (name,))

    def render_report(self, role: str, name: str) -> tuple[bytes, str]:
        _require(role, ROLE_VIEWER)
        with self.lock:
            pattern = self.store.get(role, "report_patterns", (name,))
            return render_report(pattern, self.store.tables), pattern.get("format", "csv")

    # -- simulation ------------------------------------------------------------------------------

    def sim_place_tag(self, role: str, uid_hex: str, station: int,
                      position_cm: float) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            tag = TagEmulation(uid=bytes.fromhex(uid_hex), position_cm=position_cm)
            self.world.place_tag(station, tag)
            return {"uid": uid_hex, "station": station, "position_cm": position_cm}

    def sim_move_tag(self, role: str, uid_hex: str, position_cm: float,
                     station: int | None = None) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            uid = bytes.fromhex(uid_hex)
            home = self.world.station_of(uid)
            if home is None:
                raise NotFound(f"tag {uid_hex} is not placed in the world")
            if station is not None and station != home:
                field = self.world.field_for(home)
                tag = field.tags[uid]
                changes = self.world.remove_tag(uid)
                if home in self.stations:
                    self.stations[home].note_crossings(changes)
                tag.position_cm = _FAR_AWAY_CM
                self.world.place_tag(station, tag)
                home = station
            changes = self.world.move_tag(uid, position_cm)
            if home in self.stations:
                self.stations[home].note_crossings(changes)
            return {
                "uid": uid_hex,
                "station": home,
                "position_cm": position_cm,
                "crossings": [c.crossing.name for c in changes],
            }

    def sim_world_text(self, role: str) -> str:
        _require(role, ROLE_VIEWER)
        with self.lock:
            return serialize_world(self.world, self.station_info)

    def sim_load_world(self, role: str, text: str) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            self._load_world(text)
            for addr in self.stations:
                self.alarms.note_station(addr, self._sim_seconds())
            return {"stations": len(self.stations), "tags": len(self.world.tags())}

    def sim_advance(self, role: str, seconds: float) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            self.world.clock.advance(int(seconds * 1_000_000))
            alarms = self._raise_alarms(self.alarms.tick(self._sim_seconds()))
            return {"sim_time_us": self.world.clock.now_us, "alarms": alarms}

    # -- sync ----------------------------------------------------------------------------------------

    def list_devices(self, role: str) -> list[dict]:
        _require(role, ROLE_VIEWER)
        with self.lock:
            return [
                {
                    "device_id": device_id,
                    "state": self.links[device_id].state,
                    "last_manifest": self.manifests.get(device_id),
                }
                for device_id in sorted(self.devices)
            ]

    def run_sync(self, role: str, device_id: str,
                 tables: list[str] | None = None) -> dict:
        _require(role, ROLE_OPERATOR)
        with self.lock:
            if device_id not in self.devices:
                raise NotFound(f"no device {device_id!r} configured")
            link = self.links[device_id]
            link.connect()
            manifest = sync_session(
                link, self.store.tables, tables or DEFAULT_SYNC_TABLES,
                archive_dir=self.sync_archive,
            )
            doc = manifest.to_doc()
            self.manifests[device_id] = doc
            return doc

    def last_manifest(self, role: str, device_id: str) -> dict:
        _require(role, ROLE_VIEWER)
        with self.lock:
            if device_id not in self.manifests:
                raise NotFound(f"device {device_id!r} has not synced yet")
            return self.manifests[device_id]

    # -- users --------------------------------------------------------------------------------------------

    def list_users(self, role: str) -> list[dict]:
        _require(role, ROLE_VIEWER)
        with self.lock:
            return self.store.scan(role, "users")

    def set_user(self, role: str, username: str, *, password: str | None = None,
                 user_role: str | None = None, enabled: bool | None = None) -> dict:
        _require(role, ROLE_ADMIN)
        with self.lock:
            table = self.store.tables["users"]
            if table.has((username,)):
                row = table.get((username,))
            else:
                if password is None or user_role is None:
                    raise InvalidQuery("new user needs both password and role")
                row = {"username": username, "role": user_role,
                       "password_hash": hash_password(password), "enabled": True}
            if password is not None:
                row["password_hash"] = hash_password(password)
            if user_role is not None:
                row["role"] = user_role
            if enabled is not None:
                row["enabled"] = enabled
            self.store.upsert(role, "users", row)
            shown = dict(row)
            shown.pop("password_hash")
            return shown

    def delete_user(self, role: str, username: str) -> None:
        _require(role, ROLE_ADMIN)
        with self.lock:
            self.store.delete(role, "users", (username,))

    # -- backup -------------------------------------------------------------------------------------------

    def backup(self, role: str, path: str, passphrase: str) -> dict:
        _require(role, ROLE_ADMIN)
        with self.lock:
            from tagtrace.store import save_encrypted_tables

            save_encrypted_tables(self.store.tables, path, passphrase)
            return {"path": path, "tables": len(self.store.tables.names())}

    def restore(self, role: str, path: str, passphrase: str) -> dict:
        _require(role, ROLE_ADMIN)
        with self.lock:
            loaded = load_encrypted_tables(path, passphrase)
            for name in loaded.names():
                table = loaded[name]
                self.store.replace_table(role, name, table.scan(), table.revision,
                                         table.last_modified)
            self._rebuild_registry()
            self._reload_alarm_rules()
            return {"path": path, "revisions": self.store.revisions()}

    def checkpoint(self) -> None:
        with self.lock:
            self.store.checkpoint()

    def close(self) -> None:
        with self.lock:
            self.store.close()


# -- value conversion ------------------------------------------------------------

# The codec works in bytes for character and string fields; the service
# boundary is JSON, so text crosses it as str. Characters are one
# latin-1 byte, strings are UTF-8.


def _values_to_codec(template: Template, values: list) -> list:
    from tagtrace.codec import TypeMismatch

    if len(values) != len(template.fields):
        raise TypeMismatch(
            f"{len(values)} values for {len(template.fields)} fields"
        )
    out = []
    for field, value in zip(template.fields, values):
        kind = field.ftype.kind
        if kind is FieldKind.CHARACTER and isinstance(value, str):
            try:
                value = value.encode("latin-1")
            except UnicodeEncodeError:
                raise TypeMismatch(
                    f"field {field.name!r}: character must be a single latin-1 char"
                ) from None
        elif kind is FieldKind.STRING and isinstance(value, str):
            value = value.encode("utf-8")
        out.append(value)
    return out


def _values_to_json(template: Template, values: list) -> list:
    out = []
    for field, value in zip(template.fields, values):
        kind = field.ftype.kind
        if kind is FieldKind.CHARACTER and isinstance(value, bytes):
            value = value.decode("latin-1")
        elif kind is FieldKind.STRING and isinstance(value, bytes):
            value = value.decode("utf-8", errors="replace")
        out.append(value)
    return out


# -- template record conversion ------------------------------------------------


def _template_to_record(template: Template) -> dict:
    return {
        "template_id": template.template_id,
        "version": template.version,
        "name": template.name,
        "fields": [
            {
                "name": f.name,
                "kind": f.ftype.kind.value,
                **({"max_len": f.ftype.max_len} if f.ftype.kind is FieldKind.STRING else {}),
            }
            for f in template.fields
        ],
    }


def _template_from_record(record: dict) -> Template:
    fields = []
    for spec in record["fields"]:
        kind = FieldKind(spec["kind"])
        ftype = (
            FieldType(kind, spec["max_len"]) if kind is FieldKind.STRING else FieldType(kind)
        )
        fields.append(TemplateField(spec["name"], ftype))
    return Template(
        template_id=record["template_id"],
        version=record["version"],
        name=record["name"],
        fields=tuple(fields),
    )
