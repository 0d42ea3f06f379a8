"""Table schemas for the central store.

Records are plain dicts so the journal, snapshots, sync transfers, and
report rendering all share one canonical JSON representation. Binary
values (tag uids, payload images) are stored as lowercase hex text and
tagged ``blob`` so the compact-format converter can tell them apart from
human-readable ``text`` columns.

Central-origin events (alarms and other records the service itself
creates) carry station number 255, which no physical station can use.
"""

from __future__ import annotations

from dataclasses import dataclass

CENTRAL_STATION = 255

INT = "int"
TEXT = "text"
REAL = "real"
BLOB = "blob"
BOOL = "bool"
JSON = "json"

_PYTYPES = {
    INT: (int,),
    TEXT: (str,),
    REAL: (int, float),
    BLOB: (str,),
    BOOL: (bool,),
    JSON: (dict, list, str, int, float, bool, type(None)),
}


@dataclass(frozen=True)
class TableSchema:
    name: str
    pk: tuple[str, ...]
    columns: dict[str, str]  # column -> type tag

    def key_of(self, record: dict) -> tuple:
        return tuple(record[k] for k in self.pk)


TABLES: dict[str, TableSchema] = {
    s.name: s
    for s in [
        TableSchema(
            "transponders",
            pk=("uid",),
            columns={
                "uid": BLOB,
                "template_id": INT,
                "version": INT,
                "last_payload": BLOB,
                "last_station": INT,
                "last_seen": REAL,  # simulated seconds
            },
        ),
        TableSchema(
            "stations",
            pk=("addr",),
            columns={"addr": INT, "name": TEXT, "baud_class": INT, "status": TEXT},
        ),
        TableSchema(
            "events",
            pk=("station", "seq"),
            columns={
                "station": INT,
                "seq": INT,
                "kind": TEXT,
                "uid": BLOB,  # empty when the event has no subject tag
                "sim_timestamp": INT,  # microseconds
                "ingest_time": REAL,
                "detail": TEXT,
            },
        ),
        TableSchema(
            "users",
            pk=("username",),
            columns={"username": TEXT, "role": TEXT, "password_hash": TEXT, "enabled": BOOL},
        ),
        TableSchema(
            "templates",
            pk=("template_id", "version"),
            columns={"template_id": INT, "version": INT, "name": TEXT, "fields": JSON},
        ),
        TableSchema(
            "report_patterns",
            pk=("name",),
            columns={
                "name": TEXT,
                "table": TEXT,
                "filter": JSON,
                "columns": JSON,
                "sort": JSON,
                "format": TEXT,
            },
        ),
        TableSchema(
            "alarm_rules",
            pk=("name",),
            columns={"name": TEXT, "kind": TEXT, "params": JSON, "enabled": BOOL},
        ),
    ]
}


def check_record(schema: TableSchema, record: dict) -> None:
    from tagtrace.store.errors import SchemaViolation, UnknownColumn

    for column in record:
        if column not in schema.columns:
            raise UnknownColumn(f"{schema.name} has no column {column!r}")
    for column, type_tag in schema.columns.items():
        if column not in record:
            raise SchemaViolation(f"{schema.name} record missing {column!r}")
        value = record[column]
        if type_tag == REAL and isinstance(value, bool):
            raise SchemaViolation(f"{schema.name}.{column} must be numeric, got bool")
        if type_tag == INT and isinstance(value, bool):
            raise SchemaViolation(f"{schema.name}.{column} must be int, got bool")
        if not isinstance(value, _PYTYPES[type_tag]):
            raise SchemaViolation(
                f"{schema.name}.{column} must be {type_tag}, got {type(value).__name__}"
            )
