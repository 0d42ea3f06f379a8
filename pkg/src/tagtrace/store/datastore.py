"""Central store facade: tables + journal + snapshot persistence.

On disk a store directory holds ``snapshot.json`` (full table contents
plus revisions, written atomically) and ``journal.log`` (changes since
that snapshot). Opening a store loads the snapshot and replays the
journal; ``checkpoint()`` folds the journal into a fresh snapshot.

Every mutating call names the acting role. Reads are open to any valid
role; writes go through the role matrix in auth.
"""

from __future__ import annotations

import json
import os
import time
from typing import Callable

from tagtrace.store import journal as jr
from tagtrace.store.auth import ROLE_ADMIN, check_role, require_write
from tagtrace.store.errors import InvalidQuery, StoreError
from tagtrace.store.schema import TABLES
from tagtrace.store.tables import TableSet

SNAPSHOT_NAME = "snapshot.json"
JOURNAL_NAME = "journal.log"
SNAPSHOT_FORMAT = 1


def tableset_to_bytes(tables: TableSet) -> bytes:
    doc = {
        "format": SNAPSHOT_FORMAT,
        "tables": {
            name: {
                "revision": t.revision,
                "last_modified": t.last_modified,
                "rows": t.scan(),
            }
            for name, t in tables.tables.items()
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def tableset_from_bytes(data: bytes) -> TableSet:
    doc = json.loads(data.decode("utf-8"))
    if doc.get("format") != SNAPSHOT_FORMAT:
        raise StoreError(f"unsupported table serialization format {doc.get('format')!r}")
    tables = TableSet()
    for name, payload in doc["tables"].items():
        if name in tables:
            tables[name].replace_all(
                payload["rows"], payload["revision"], payload.get("last_modified", 0.0)
            )
    return tables


def save_encrypted_tables(tables: TableSet, path: str, passphrase: str) -> None:
    from tagtrace.store.crypto import save_encrypted

    save_encrypted(path, tableset_to_bytes(tables), passphrase)


def load_encrypted_tables(path: str, passphrase: str) -> TableSet:
    from tagtrace.store.crypto import load_encrypted

    return tableset_from_bytes(load_encrypted(path, passphrase))


class DataStore:
    def __init__(self, directory: str | None = None, clock: Callable[[], float] = time.time):
        """With directory=None the store is memory-only (tests, sync
        scratch replicas)."""
        self.directory = directory
        self.clock = clock
        self.tables = TableSet()
        self._journal: jr.JournalWriter | None = None
        if directory is not None:
            os.makedirs(directory, exist_ok=True)
            self._load()
            self._journal = jr.JournalWriter(os.path.join(directory, JOURNAL_NAME))

    # -- persistence ------------------------------------------------------

    def _snapshot_path(self) -> str:
        assert self.directory is not None
        return os.path.join(self.directory, SNAPSHOT_NAME)

    def _journal_path(self) -> str:
        assert self.directory is not None
        return os.path.join(self.directory, JOURNAL_NAME)

    def _load(self) -> None:
        path = self._snapshot_path()
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
            if doc.get("format") != SNAPSHOT_FORMAT:
                raise StoreError(f"unsupported snapshot format {doc.get('format')!r}")
            for name, payload in doc["tables"].items():
                if name not in self.tables:
                    continue  # tolerate tables dropped from the schema
                self.tables[name].replace_all(
                    payload["rows"], payload["revision"], payload.get("last_modified", 0.0)
                )
        jr.replay(self._journal_path(), self.tables)

    def checkpoint(self) -> None:
        """Write a snapshot and clear the journal. Crash-ordering: the
        snapshot replaces atomically first, so a failure between the two
        steps only replays changes the snapshot already contains, and
        replaying an upsert twice is harmless."""
        if self.directory is None:
            return
        doc = {
            "format": SNAPSHOT_FORMAT,
            "tables": {
                name: {
                    "revision": t.revision,
                    "last_modified": t.last_modified,
                    "rows": t.scan(),
                }
                for name, t in self.tables.tables.items()
            },
        }
        tmp = self._snapshot_path() + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self._snapshot_path())
        if self._journal is not None:
            self._journal.truncate()

    def close(self) -> None:
        if self._journal is not None:
            self._journal.close()

    # -- mutation ---------------------------------------------------------

    def insert(self, role: str, table_name: str, record: dict) -> None:
        require_write(role, table_name)
        table = self.tables[table_name]
        table.insert(record)
        table.last_modified = self.clock()
        if self._journal:
            self._journal.append(jr.OP_INSERT, table_name, table.revision,
                                 table.last_modified, record=record)

    def upsert(self, role: str, table_name: str, record: dict) -> bool:
        require_write(role, table_name)
        table = self.tables[table_name]
        created = table.upsert(record)
        table.last_modified = self.clock()
        if self._journal:
            self._journal.append(jr.OP_UPSERT, table_name, table.revision,
                                 table.last_modified, record=record)
        return created

    def delete(self, role: str, table_name: str, key: tuple) -> None:
        require_write(role, table_name)
        table = self.tables[table_name]
        table.delete(key)
        table.last_modified = self.clock()
        if self._journal:
            self._journal.append(jr.OP_DELETE, table_name, table.revision,
                                 table.last_modified, key=list(key))

    def replace_table(self, role: str, table_name: str, records: list[dict],
                      revision: int, last_modified: float | None = None) -> None:
        require_write(role, table_name)
        table = self.tables[table_name]
        stamp = self.clock() if last_modified is None else last_modified
        table.replace_all(records, revision, stamp)
        if self._journal:
            self._journal.append_replace(table_name, revision, stamp, table.scan())

    # -- reads ------------------------------------------------------------

    def get(self, role: str, table_name: str, key: tuple) -> dict:
        check_role(role)
        return self.tables[table_name].get(key)

    def scan(self, role: str, table_name: str) -> list[dict]:
        check_role(role)
        if table_name == "users" and role != ROLE_ADMIN:
            # non-admins may see the roster but never the hashes
            return [
                {k: v for k, v in row.items() if k != "password_hash"}
                for row in self.tables[table_name].scan()
            ]
        return self.tables[table_name].scan()

    def count(self, role: str, table_name: str) -> int:
        check_role(role)
        return len(self.tables[table_name])

    def revisions(self) -> dict[str, int]:
        return self.tables.revisions()

    # -- event query ------------------------------------------------------

    def query_events(self, role: str, station: int | None = None, kind: str | None = None,
                     after: tuple[int, int] | None = None, limit: int = 100) -> list[dict]:
        """Events in (station, seq) order, optionally filtered. ``after``
        is an exclusive (station, seq) cursor for pagination."""
        check_role(role)
        if limit < 1:
            raise InvalidQuery("limit must be positive")
        out = []
        for row in self.tables["events"].scan():
            if station is not None and row["station"] != station:
                continue
            if kind is not None and row["kind"] != kind:
                continue
            if after is not None and (row["station"], row["seq"]) <= after:
                continue
            out.append(row)
            if len(out) == limit:
                break
        return out
