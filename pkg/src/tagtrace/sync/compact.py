"""Central <-> compact format conversion.

The handheld replica stores the same logical tables in a reduced form:
text no longer than 255 bytes (UTF-8), reals narrowed to binary32. Text
over the limit is a hard error naming the record and field. Reals always
narrow; a per-field flag records when the original binary64 value was not
exactly representable, so the loss is visible rather than silent. The
inverse conversion widens binary32 back to binary64, which is exact for
every binary32 value.

Integers, booleans, blobs (hex text), and json columns pass through
unchanged; the 255-byte limit is about human-entered text, not payload
images, which would blow the limit for any sizable tag.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

from tagtrace.store.schema import REAL, TEXT, TableSchema

from tagtrace.sync.errors import ConversionLoss

MAX_TEXT_BYTES = 255


def narrow_real(value: float) -> tuple[float, bool]:
    """Binary32-narrowed value (held as the exactly-equal binary64) plus
    an exact? flag."""
    try:
        narrowed = struct.unpack("<f", struct.pack("<f", value))[0]
    except OverflowError:
        # finite binary64 beyond binary32 range: round-to-nearest gives
        # the infinity of matching sign, and the flag records the loss
        narrowed = math.inf if value > 0 else -math.inf
    return narrowed, narrowed == value


@dataclass
class CompactTable:
    name: str
    revision: int
    modified: float
    rows: list[dict] = field(default_factory=list)
    # aligned with rows: per-row {field: False} for fields that lost
    # precision when narrowed; empty dict when the row converted exactly
    approx: list[dict] = field(default_factory=list)


def convert_table(schema: TableSchema, rows: list[dict], revision: int,
                  modified: float = 0.0) -> CompactTable:
    losses: list[tuple[tuple, str]] = []
    out = CompactTable(schema.name, revision, modified)
    for row in rows:
        compact_row = {}
        flags: dict[str, bool] = {}
        for column, type_tag in schema.columns.items():
            value = row[column]
            if type_tag == TEXT and len(str(value).encode("utf-8")) > MAX_TEXT_BYTES:
                losses.append((schema.key_of(row), column))
                continue
            if type_tag == REAL:
                narrowed, exact = narrow_real(float(value))
                compact_row[column] = narrowed
                if not exact:
                    flags[column] = False
                continue
            compact_row[column] = value
        out.rows.append(compact_row)
        out.approx.append(flags)
    if losses:
        raise ConversionLoss(schema.name, losses)
    return out


def invert_table(schema: TableSchema, compact: CompactTable) -> list[dict]:
    """Central-format rows. Widening is exact, so this is the identity on
    everything convert_table produced."""
    rows = []
    for compact_row in compact.rows:
        row = {}
        for column, type_tag in schema.columns.items():
            value = compact_row[column]
            if type_tag == REAL:
                value = float(value)  # binary64 carrier of the binary32 value
            row[column] = value
        rows.append(row)
    return rows


def compact_to_doc(table: CompactTable) -> dict:
    return {
        "name": table.name,
        "revision": table.revision,
        "modified": table.modified,
        "rows": table.rows,
        "approx": table.approx,
    }


def compact_from_doc(doc: dict) -> CompactTable:
    return CompactTable(
        name=doc["name"],
        revision=doc["revision"],
        modified=doc.get("modified", 0.0),
        rows=[dict(r) for r in doc["rows"]],
        approx=[dict(a) for a in doc.get("approx", [{} for _ in doc["rows"]])],
    )
