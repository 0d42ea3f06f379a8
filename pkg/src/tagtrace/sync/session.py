"""Table-level differential sync between the central store and a device.

The central side drives. One session:

  HELLO(tables) -> REVS            revision handshake
  PLAN                             decisions, informational for the device
  per table, by decision:
    SKIP      nothing on the wire
    PUSH      TABLE_DATA -> TABLE_ACK
    PULL      TABLE_REQ -> TABLE_DATA, apply, REBASE -> REBASE_ACK
    CONFLICT  fetch loser for the archive, then push or pull as resolved
  BYE -> BYE_ACK                   session digest check

Classification against the device's recorded base (the central revision
at last sync): a side counts as changed iff its revision differs from
base. Both changed means conflict, resolved table-level last-writer-wins
by modification stamp with central winning ties; the losing copy goes to
the conflict archive. Comparing both sides to a common base instead of
to each other keeps the adversarial case honest where both sides moved
the same number of steps and the bare revision numbers happen to match.

Every transfer applies atomically per table: content digests are checked
before anything is swapped in, and a link cut mid-message means the
receiver never saw the message at all.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from typing import Callable

from tagtrace.store.schema import TABLES
from tagtrace.store.tables import TableSet

from tagtrace.sync import wire
from tagtrace.sync.compact import compact_from_doc, compact_to_doc, convert_table, invert_table
from tagtrace.sync.errors import ConversionLoss, LinkCut, ProtocolError
from tagtrace.sync.link import DeviceLink

PUSH = "PUSH"
PULL = "PULL"
SKIP = "SKIP"
CONFLICT = "CONFLICT"


@dataclass
class TableOutcome:
    table: str
    device_revision: int
    central_revision: int
    decision: str
    resolved: str = ""  # for conflicts: which direction won
    applied: bool = False
    error: str = ""
    archived: str = ""
    transfer_bytes: int = 0


@dataclass
class SyncManifest:
    device_id: str
    tables: dict[str, TableOutcome] = field(default_factory=dict)
    completed: bool = False
    digest_ok: bool = False
    fault: str = ""

    def decision(self, table: str) -> str:
        return self.tables[table].decision

    def to_doc(self) -> dict:
        return {
            "device_id": self.device_id,
            "completed": self.completed,
            "digest_ok": self.digest_ok,
            "fault": self.fault,
            "tables": {
                name: vars(outcome).copy() for name, outcome in sorted(self.tables.items())
            },
        }


def classify(central_revision: int, device_revision: int, base: int) -> str:
    device_changed = device_revision != base
    central_changed = central_revision != base
    if not device_changed and not central_changed:
        return SKIP
    if central_changed and not device_changed:
        return PUSH
    if device_changed and not central_changed:
        return PULL
    return CONFLICT


def _archive(archive_dir: str | None, device_id: str, table: str, side: str,
             revision: int, rows: list[dict]) -> str:
    if archive_dir is None:
        return ""
    os.makedirs(archive_dir, exist_ok=True)
    path = os.path.join(archive_dir, f"{device_id}-{table}-{side}-r{revision}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"device": device_id, "table": table, "side": side,
                   "revision": revision, "rows": rows}, fh, sort_keys=True)
    return path


def _expect(responses: list[tuple[int, dict]], opcode: int) -> dict:
    if len(responses) != 1:
        raise ProtocolError(f"expected one response, got {len(responses)}")
    got, body = responses[0]
    if got == wire.OP_ERROR:
        raise ProtocolError(body.get("error", "device error"))
    if got != opcode:
        raise ProtocolError(
            f"expected {wire.OPCODE_NAMES.get(opcode, opcode)}, "
            f"got {wire.OPCODE_NAMES.get(got, got)}"
        )
    return body


def sync_session(link: DeviceLink, central: TableSet, subscriptions: list[str],
                 archive_dir: str | None = None,
                 clock: Callable[[], float] = time.time) -> SyncManifest:
    link._require_connected()
    pipe = link.pipe
    assert pipe is not None
    device_id = link.device.device_id
    manifest = SyncManifest(device_id=device_id)
    tables = sorted(subscriptions)

    try:
        pipe.reset_digest()
        revs = _expect(
            pipe.request(wire.OP_HELLO, {"proto": wire.PROTO_VERSION, "tables": tables}),
            wire.OP_REVS,
        )["tables"]

        for name in tables:
            info = revs[name]
            manifest.tables[name] = TableOutcome(
                table=name,
                device_revision=info["revision"],
                central_revision=central[name].revision,
                decision=classify(central[name].revision, info["revision"], info["base"]),
            )
        pipe.request(wire.OP_PLAN, {
            "tables": {name: manifest.tables[name].decision for name in tables}
        })

        for name in tables:
            outcome = manifest.tables[name]
            info = revs[name]
            try:
                if outcome.decision == SKIP:
                    outcome.applied = True
                elif outcome.decision == PUSH:
                    _push_table(pipe, central, name, outcome)
                elif outcome.decision == PULL:
                    _pull_table(pipe, central, name, outcome, clock)
                else:
                    _resolve_conflict(pipe, central, name, info, outcome, clock,
                                      archive_dir, device_id)
            except ConversionLoss as loss:
                outcome.error = str(loss)
            except ProtocolError as exc:
                outcome.error = str(exc)

        before_bye = pipe.digest()
        bye = _expect(pipe.request(wire.OP_BYE, {"digest": before_bye}), wire.OP_BYE_ACK)
        manifest.digest_ok = bool(bye.get("ok")) and bye.get("digest") == before_bye
        manifest.completed = True
    except LinkCut as cut:
        manifest.fault = str(cut)
        link.fault()

    for name, outcome in manifest.tables.items():
        outcome.transfer_bytes = pipe.table_bytes.get(name, 0)
    return manifest


def _table_doc(central: TableSet, name: str) -> dict:
    table = central[name]
    compact = convert_table(TABLES[name], table.scan(), table.revision, table.last_modified)
    doc = compact_to_doc(compact)
    doc["table"] = name
    doc["digest"] = wire.rows_digest(doc["rows"], doc["revision"])
    return doc


def _push_table(pipe: wire.ByteLink, central: TableSet, name: str,
                outcome: TableOutcome) -> None:
    doc = _table_doc(central, name)  # ConversionLoss propagates before any send
    ack = _expect(pipe.request(wire.OP_TABLE_DATA, doc), wire.OP_TABLE_ACK)
    if ack.get("revision") != doc["revision"]:
        raise ProtocolError(f"device acknowledged wrong revision for {name}")
    outcome.applied = True


def _fetch_table(pipe: wire.ByteLink, name: str) -> dict:
    doc = _expect(pipe.request(wire.OP_TABLE_REQ, {"table": name}), wire.OP_TABLE_DATA)
    if wire.rows_digest(doc["rows"], doc["revision"]) != doc.get("digest"):
        raise ProtocolError(f"digest mismatch on table {name} from device")
    return doc


def _pull_table(pipe: wire.ByteLink, central: TableSet, name: str,
                outcome: TableOutcome, clock: Callable[[], float],
                doc: dict | None = None) -> None:
    if doc is None:
        doc = _fetch_table(pipe, name)
    rows = invert_table(TABLES[name], compact_from_doc(doc))
    new_revision = max(central[name].revision, doc["revision"]) + 1
    stamp = doc.get("modified") or clock()
    central[name].replace_all(rows, new_revision, stamp)
    _expect(
        pipe.request(wire.OP_REBASE, {"table": name, "revision": new_revision,
                                      "modified": stamp}),
        wire.OP_REBASE_ACK,
    )
    outcome.applied = True


def _resolve_conflict(pipe: wire.ByteLink, central: TableSet, name: str, info: dict,
                      outcome: TableOutcome, clock: Callable[[], float],
                      archive_dir: str | None, device_id: str) -> None:
    central_wins = central[name].last_modified >= info["modified"]
    if central_wins:
        device_doc = _fetch_table(pipe, name)
        outcome.archived = _archive(archive_dir, device_id, name, "device",
                                    device_doc["revision"], device_doc["rows"])
        outcome.resolved = PUSH
        _push_table(pipe, central, name, outcome)
    else:
        outcome.archived = _archive(archive_dir, device_id, name, "central",
                                    central[name].revision, central[name].scan())
        outcome.resolved = PULL
        _pull_table(pipe, central, name, outcome, clock)
