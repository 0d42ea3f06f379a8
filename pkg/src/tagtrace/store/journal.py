"""Append-only change journal.

Each line is ``<crc32 hex8> <canonical json>\n``. The checksum covers the
JSON text, so a torn final line (process killed mid-write) fails its check
and replay stops there instead of corrupting the table set. Entries carry
the table revision after the change; replay applies them in order and the
resulting revisions match the writer's exactly.
"""

from __future__ import annotations

import json
import os
import zlib
from typing import Iterator, TextIO

OP_INSERT = "insert"
OP_UPSERT = "upsert"
OP_DELETE = "delete"
OP_REPLACE = "replace"


def canonical_json(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def format_entry(entry: dict) -> str:
    text = canonical_json(entry)
    return f"{zlib.crc32(text.encode('utf-8')):08x} {text}\n"


def parse_line(line: str) -> dict | None:
    """Entry dict, or None when the line is damaged or incomplete."""
    line = line.rstrip("\n")
    if len(line) < 10 or line[8] != " ":
        return None
    crc_hex, text = line[:8], line[9:]
    try:
        expected = int(crc_hex, 16)
    except ValueError:
        return None
    if zlib.crc32(text.encode("utf-8")) != expected:
        return None
    try:
        entry = json.loads(text)
    except ValueError:
        return None
    return entry if isinstance(entry, dict) else None


class JournalWriter:
    def __init__(self, path: str):
        self.path = path
        self._fh: TextIO | None = None

    def _handle(self) -> TextIO:
        if self._fh is None:
            self._fh = open(self.path, "a", encoding="utf-8")
        return self._fh

    def append(self, op: str, table: str, revision: int, last_modified: float,
               record: dict | None = None, key: list | None = None) -> None:
        entry: dict = {"op": op, "table": table, "rev": revision, "lm": last_modified}
        if record is not None:
            entry["record"] = record
        if key is not None:
            entry["key"] = key
        fh = self._handle()
        fh.write(format_entry(entry))
        fh.flush()
        os.fsync(fh.fileno())

    def append_replace(self, table: str, revision: int, last_modified: float,
                       records: list[dict]) -> None:
        entry = {"op": OP_REPLACE, "table": table, "rev": revision, "lm": last_modified,
                 "records": records}
        fh = self._handle()
        fh.write(format_entry(entry))
        fh.flush()
        os.fsync(fh.fileno())

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def truncate(self) -> None:
        """Discard all entries (after a snapshot checkpoint)."""
        self.close()
        with open(self.path, "w", encoding="utf-8"):
            pass


def read_entries(path: str) -> Iterator[dict]:
    """Valid entries up to the first damaged line."""
    if not os.path.exists(path):
        return
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            entry = parse_line(line)
            if entry is None:
                return
            yield entry


def replay(path: str, tables) -> int:
    """Apply journal entries to a TableSet. Returns the count applied.

    Entries bypass the normal mutation API: rows were already validated
    when first written, and the recorded revision is authoritative.
    """
    applied = 0
    for entry in read_entries(path):
        table = tables[entry["table"]]
        op = entry["op"]
        if op in (OP_INSERT, OP_UPSERT):
            record = entry["record"]
            table.rows[table.schema.key_of(record)] = dict(record)
        elif op == OP_DELETE:
            table.rows.pop(tuple(entry["key"]), None)
        elif op == OP_REPLACE:
            table.rows = {
                table.schema.key_of(r): dict(r) for r in entry["records"]
            }
        else:
            return applied
        table.revision = entry["rev"]
        table.last_modified = entry.get("lm", 0.0)
        applied += 1
    return applied
