"""In-memory table set with per-table revision counters.

A table's revision increments on every mutation (insert, update, delete,
replace). Differential sync compares revisions to decide whether a table
needs transfer at all, so the counter must never move on read.
"""

from __future__ import annotations

from tagtrace.store.errors import DuplicateKey, NotFound, UnknownTable
from tagtrace.store.schema import TABLES, TableSchema, check_record


class Table:
    def __init__(self, schema: TableSchema):
        self.schema = schema
        self.rows: dict[tuple, dict] = {}
        self.revision = 0
        # wall-clock stamp of the latest mutation, used by sync conflict
        # resolution (table-level last-writer-wins)
        self.last_modified = 0.0

    def __len__(self) -> int:
        return len(self.rows)

    def get(self, key: tuple) -> dict:
        try:
            return dict(self.rows[key])
        except KeyError:
            raise NotFound(f"{self.schema.name}: no row with key {key!r}") from None

    def has(self, key: tuple) -> bool:
        return key in self.rows

    def insert(self, record: dict) -> None:
        check_record(self.schema, record)
        key = self.schema.key_of(record)
        if key in self.rows:
            raise DuplicateKey(f"{self.schema.name}: key {key!r} already present")
        self.rows[key] = dict(record)
        self.revision += 1

    def upsert(self, record: dict) -> bool:
        """Insert or overwrite. Returns True when the row was new."""
        check_record(self.schema, record)
        key = self.schema.key_of(record)
        created = key not in self.rows
        self.rows[key] = dict(record)
        self.revision += 1
        return created

    def delete(self, key: tuple) -> None:
        if key not in self.rows:
            raise NotFound(f"{self.schema.name}: no row with key {key!r}")
        del self.rows[key]
        self.revision += 1

    def replace_all(self, records: list[dict], revision: int,
                    last_modified: float | None = None) -> None:
        """Swap in a full row set, e.g. after a sync pull. Caller supplies
        the revision the new content corresponds to."""
        fresh: dict[tuple, dict] = {}
        for record in records:
            check_record(self.schema, record)
            key = self.schema.key_of(record)
            if key in fresh:
                raise DuplicateKey(f"{self.schema.name}: key {key!r} duplicated in replacement")
            fresh[key] = dict(record)
        self.rows = fresh
        self.revision = revision
        if last_modified is not None:
            self.last_modified = last_modified

    def scan(self) -> list[dict]:
        """All rows in primary-key order. Copies, so callers can't mutate
        storage behind the revision counter."""
        return [dict(self.rows[k]) for k in sorted(self.rows)]


class TableSet:
    def __init__(self, schemas: dict[str, TableSchema] | None = None):
        self.tables = {name: Table(schema) for name, schema in (schemas or TABLES).items()}

    def __getitem__(self, name: str) -> Table:
        try:
            return self.tables[name]
        except KeyError:
            raise UnknownTable(f"no table named {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.tables

    def names(self) -> list[str]:
        return sorted(self.tables)

    def revisions(self) -> dict[str, int]:
        return {name: t.revision for name, t in self.tables.items()}
