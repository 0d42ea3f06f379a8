"""Simulated handheld: compact table replica, virtual file area, and the
device half of the sync protocol.

The device keeps, per table: rows in compact form, its own revision
counter, and ``base`` — the central revision this table was last synced
at. Local edits bump the revision away from base; the central side
compares both against base to classify each table as unchanged, ahead,
behind, or conflicted.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from typing import Callable

from tagtrace.store.errors import NotFound
from tagtrace.store.schema import TABLES, check_record

from tagtrace.sync import wire
from tagtrace.sync.compact import CompactTable, compact_from_doc, compact_to_doc, convert_table
from tagtrace.sync.errors import QuotaExceeded

DEFAULT_QUOTA = 8 * 1024 * 1024


def _norm(path: str) -> str:
    parts = [p for p in path.replace("\\", "/").split("/") if p not in ("", ".")]
    if any(p == ".." for p in parts):
        raise ValueError(f"path may not traverse upward: {path!r}")
    return "/" + "/".join(parts)


class HandheldDevice:
    def __init__(self, device_id: str, quota_bytes: int = DEFAULT_QUOTA,
                 clock: Callable[[], float] = time.time):
        self.device_id = device_id
        self.quota_bytes = quota_bytes
        self.clock = clock
        self.files: dict[str, tuple[bytes, float]] = {}
        self.folders: set[str] = {"/"}
        self.store: dict[str, dict] = {
            name: {"revision": 0, "base": 0, "modified": 0.0, "rows": [], "approx": []}
            for name in TABLES
        }
        self._digest = hashlib.sha256()

    # -- compact store ------------------------------------------------------

    def table(self, name: str) -> dict:
        return self.store[name]

    def rows(self, name: str) -> list[dict]:
        return [dict(r) for r in self.store[name]["rows"]]

    def local_upsert(self, name: str, record: dict) -> None:
        """A field edit made on the device between syncs."""
        schema = TABLES[name]
        check_record(schema, record)
        compact = convert_table(schema, [record], 0)
        entry = self.store[name]
        key = schema.key_of(record)
        for i, row in enumerate(entry["rows"]):
            if schema.key_of(row) == key:
                entry["rows"][i] = compact.rows[0]
                entry["approx"][i] = compact.approx[0]
                break
        else:
            entry["rows"].append(compact.rows[0])
            entry["approx"].append(compact.approx[0])
        entry["revision"] += 1
        entry["modified"] = self.clock()

    def local_delete(self, name: str, key: tuple) -> None:
        schema = TABLES[name]
        entry = self.store[name]
        for i, row in enumerate(entry["rows"]):
            if schema.key_of(row) == key:
                del entry["rows"][i]
                del entry["approx"][i]
                entry["revision"] += 1
                entry["modified"] = self.clock()
                return
        raise NotFound(f"{name}: no row with key {key!r} on device {self.device_id}")

    def _apply_table(self, doc: dict) -> None:
        # atomic: the entry is rebuilt before the swap
        table = compact_from_doc(doc)
        self.store[table.name] = {
            "revision": table.revision,
            "base": table.revision,
            "modified": table.modified,
            "rows": table.rows,
            "approx": table.approx,
        }

    def _export_table(self, name: str) -> CompactTable:
        entry = self.store[name]
        return CompactTable(
            name=name,
            revision=entry["revision"],
            modified=entry["modified"],
            rows=[dict(r) for r in entry["rows"]],
            approx=[dict(a) for a in entry["approx"]],
        )

    # -- sync protocol agent -------------------------------------------------

    def agent(self, opcode: int, body: dict) -> list[tuple[int, dict]]:
        """Device half of the sync conversation: one incoming message in,
        zero or more responses out."""
        if opcode == wire.OP_HELLO:
            # session digest covers exactly one session's traffic
            self._digest = hashlib.sha256()
        if opcode == wire.OP_BYE:
            # both sides compare digests over everything before the BYE
            mine = self._digest.hexdigest()
            self._digest.update(wire.encode_message(opcode, body))
            responses = [(wire.OP_BYE_ACK, {"digest": mine, "ok": mine == body.get("digest")})]
        else:
            self._digest.update(wire.encode_message(opcode, body))
            responses = self._respond(opcode, body)
        for resp in responses:
            self._digest.update(wire.encode_message(*resp))
        return responses

    def _respond(self, opcode: int, body: dict) -> list[tuple[int, dict]]:
        if opcode == wire.OP_HELLO:
            if body.get("proto") != wire.PROTO_VERSION:
                return [(wire.OP_ERROR, {"error": f"protocol {body.get('proto')} unsupported"})]
            revs = {}
            for name in body.get("tables", []):
                if name not in self.store:
                    return [(wire.OP_ERROR, {"error": f"device has no table {name!r}"})]
                entry = self.store[name]
                revs[name] = {
                    "revision": entry["revision"],
                    "base": entry["base"],
                    "modified": entry["modified"],
                }
            return [(wire.OP_REVS, {"device": self.device_id, "tables": revs})]
        if opcode == wire.OP_PLAN:
            return []
        if opcode == wire.OP_TABLE_DATA:
            name = body.get("name")
            if name not in self.store:
                return [(wire.OP_ERROR, {"error": f"device has no table {name!r}"})]
            if wire.rows_digest(body["rows"], body["revision"]) != body.get("digest"):
                return [(wire.OP_ERROR, {"error": f"digest mismatch for table {name!r}"})]
            self._apply_table(body)
            return [(wire.OP_TABLE_ACK, {"table": name, "revision": body["revision"]})]
        if opcode == wire.OP_TABLE_REQ:
            name = body.get("table")
            if name not in self.store:
                return [(wire.OP_ERROR, {"error": f"device has no table {name!r}"})]
            doc = compact_to_doc(self._export_table(name))
            doc["digest"] = wire.rows_digest(doc["rows"], doc["revision"])
            return [(wire.OP_TABLE_DATA, doc)]
        if opcode == wire.OP_REBASE:
            name = body.get("table")
            if name not in self.store:
                return [(wire.OP_ERROR, {"error": f"device has no table {name!r}"})]
            entry = self.store[name]
            entry["revision"] = entry["base"] = body["revision"]
            entry["modified"] = body.get("modified", entry["modified"])
            return [(wire.OP_REBASE_ACK, {"table": name, "revision": body["revision"]})]
        return [(wire.OP_ERROR, {"error": f"unknown opcode {opcode}"})]

    # -- virtual file area ----------------------------------------------------

    def fs_used(self) -> int:
        return sum(len(content) for content, _ in self.files.values())

    def fs_write(self, path: str, data: bytes) -> None:
        path = _norm(path)
        existing = len(self.files[path][0]) if path in self.files else 0
        if self.fs_used() - existing + len(data) > self.quota_bytes:
            raise QuotaExceeded(
                f"{self.device_id}: {len(data)} bytes exceed remaining quota"
            )
        self.files[path] = (data, self.clock())

    def fs_read(self, path: str) -> bytes:
        path = _norm(path)
        if path not in self.files:
            raise NotFound(f"{self.device_id}: no file {path!r}")
        return self.files[path][0]

    def fs_delete(self, path: str) -> bool:
        path = _norm(path)
        return self.files.pop(path, None) is not None

    def fs_mkdir(self, path: str) -> bool:
        """True when newly created, False when it already existed."""
        path = _norm(path)
        if path in self.folders:
            return False
        self.folders.add(path)
        return True

    def fs_rmdir(self, path: str) -> bool:
        """Removes the folder and everything under it. False when absent."""
        path = _norm(path)
        if path not in self.folders or path == "/":
            return False
        prefix = path + "/"
        self.folders = {f for f in self.folders if f != path and not f.startswith(prefix)}
        self.files = {
            p: v for p, v in self.files.items() if not p.startswith(prefix)
        }
        return True

    def fs_stat(self, path: str) -> dict:
        path = _norm(path)
        if path in self.files:
            content, mtime = self.files[path]
            return {"type": "file", "size": len(content), "modified": mtime}
        if path in self.folders:
            return {"type": "folder"}
        raise NotFound(f"{self.device_id}: nothing at {path!r}")

    # -- persistence ----------------------------------------------------------

    def save(self, directory: str) -> None:
        os.makedirs(directory, exist_ok=True)
        doc = {
            "device_id": self.device_id,
            "quota_bytes": self.quota_bytes,
            "folders": sorted(self.folders),
            "files": {
                path: {"hex": content.hex(), "modified": mtime}
                for path, (content, mtime) in self.files.items()
            },
            "store": self.store,
        }
        tmp = os.path.join(directory, "device.json.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True)
        os.replace(tmp, os.path.join(directory, "device.json"))

    @classmethod
    def load(cls, directory: str, clock: Callable[[], float] = time.time) -> "HandheldDevice":
        with open(os.path.join(directory, "device.json"), encoding="utf-8") as fh:
            doc = json.load(fh)
        device = cls(doc["device_id"], doc["quota_bytes"], clock)
        device.folders = set(doc["folders"])
        device.files = {
            path: (bytes.fromhex(info["hex"]), info["modified"])
            for path, info in doc["files"].items()
        }
        for name, entry in doc["store"].items():
            if name in device.store:
                device.store[name] = entry
        return device
