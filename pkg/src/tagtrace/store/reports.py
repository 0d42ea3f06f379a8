"""Saved report patterns and their deterministic rendering.

A pattern is a stored query: source table, conjunctive filter clauses,
column selection, sort key, output format. Rendering the same pattern
against the same store contents yields identical bytes, so reports can
be diffed and regression-tested.
"""

from __future__ import annotations

import csv
import html
import io
import json

from tagtrace.store.errors import SchemaViolation, UnknownColumn, UnknownTable
from tagtrace.store.schema import TABLES, TableSchema

FORMAT_CSV = "csv"
FORMAT_HTML = "html"

# unicode comparison symbols are accepted and normalized to ASCII
_OP_ALIASES = {"≤": "<=", "≥": ">=", "≠": "!=", "==": "="}
OPS = ("<", "<=", "=", ">=", ">", "!=", "contains")


def _normalize_op(op: str) -> str:
    return _OP_ALIASES.get(op, op)


def check_pattern(pattern: dict) -> TableSchema:
    """Validate a pattern record against the table schemas. Returns the
    source table's schema for the caller's convenience."""
    table_name = pattern.get("table")
    if table_name not in TABLES:
        raise UnknownTable(f"report source table {table_name!r} does not exist")
    schema = TABLES[table_name]

    for clause in pattern.get("filter") or []:
        if not isinstance(clause, dict) or set(clause) != {"column", "op", "value"}:
            raise SchemaViolation(f"filter clause must be {{column, op, value}}: {clause!r}")
        if clause["column"] not in schema.columns:
            raise UnknownColumn(f"filter references {clause['column']!r}, not a column of {table_name}")
        op = _normalize_op(clause["op"])
        if op not in OPS:
            raise SchemaViolation(f"unknown filter operator {clause['op']!r}")
        if op == "contains" and schema.columns[clause["column"]] not in ("text", "blob"):
            raise SchemaViolation("contains applies to text columns only")

    columns = pattern.get("columns") or []
    for column in columns:
        if column not in schema.columns:
            raise UnknownColumn(f"selected column {column!r} not in {table_name}")

    sort = pattern.get("sort")
    if sort is not None:
        if not isinstance(sort, dict) or "column" not in sort:
            raise SchemaViolation(f"sort must be {{column, descending?}}: {sort!r}")
        if sort["column"] not in schema.columns:
            raise UnknownColumn(f"sort column {sort['column']!r} not in {table_name}")

    fmt = pattern.get("format", FORMAT_CSV)
    if fmt not in (FORMAT_CSV, FORMAT_HTML):
        raise SchemaViolation(f"format must be csv or html, got {fmt!r}")
    return schema


def _matches(clause: dict, row: dict) -> bool:
    value = row[clause["column"]]
    needle = clause["value"]
    op = _normalize_op(clause["op"])
    if op == "contains":
        return str(needle) in str(value)
    if op == "=":
        return value == needle
    if op == "!=":
        return value != needle
    if op == "<":
        return value < needle
    if op == "<=":
        return value <= needle
    if op == ">":
        return value > needle
    return value >= needle


def select_rows(pattern: dict, rows: list[dict], schema: TableSchema) -> list[dict]:
    """Filter and order full rows. Ties under the sort key keep primary-key
    order: rows arrive pk-sorted from Table.scan and the sort is stable."""
    clauses = pattern.get("filter") or []
    kept = [r for r in rows if all(_matches(c, r) for c in clauses)]
    kept.sort(key=schema.key_of)
    sort = pattern.get("sort")
    if sort is not None:
        kept.sort(key=lambda r: r[sort["column"]], reverse=bool(sort.get("descending")))
    return kept


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    if value is None:
        return ""
    return str(value)


def render_report(pattern: dict, tables) -> bytes:
    schema = check_pattern(pattern)
    columns = pattern.get("columns") or list(schema.columns)
    rows = select_rows(pattern, tables[pattern["table"]].scan(), schema)
    grid = [[_cell(r[c]) for c in columns] for r in rows]
    if pattern.get("format", FORMAT_CSV) == FORMAT_HTML:
        return _render_html(pattern.get("name", pattern["table"]), columns, grid)
    return _render_csv(columns, grid)


def _render_csv(columns: list[str], grid: list[list[str]]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(grid)
    return buf.getvalue().encode("utf-8")


def _render_html(title: str, columns: list[str], grid: list[list[str]]) -> bytes:
    out = [
        "<!doctype html>",
        "<html><head><meta charset=\"utf-8\">",
        f"<title>{html.escape(title)}</title></head><body>",
        f"<h1>{html.escape(title)}</h1>",
        "<table>",
        "<tr>" + "".join(f"<th>{html.escape(c)}</th>" for c in columns) + "</tr>",
    ]
    for row in grid:
        out.append("<tr>" + "".join(f"<td>{html.escape(v)}</td>" for v in row) + "</tr>")
    out.append("</table></body></html>")
    return ("\n".join(out) + "\n").encode("utf-8")
