"""Template definition file format.

One template per document, line-oriented:

    # comment / blank lines ignored
    template <id> <version> "<name>"
    field <name> character|integer|real|string:<max_len>

Example:

    template 7 1 "asset-tag"
    field loc string:8
    field qty integer
    field price real

``serialize_template`` emits exactly this grammar; parse(serialize(t)) == t.
"""

from __future__ import annotations

import shlex

from tagtrace.codec.errors import TemplateError
from tagtrace.codec.model import FieldKind, FieldType, Template, TemplateField


def _parse_type(token: str) -> FieldType:
    if token.startswith("string:"):
        try:
            max_len = int(token.split(":", 1)[1])
        except ValueError:
            raise TemplateError(f"bad string length in {token!r}") from None
        return FieldType(FieldKind.STRING, max_len)
    try:
        kind = FieldKind(token)
    except ValueError:
        raise TemplateError(f"unknown field type {token!r}") from None
    if kind is FieldKind.STRING:
        raise TemplateError("string fields need an explicit length, e.g. string:16")
    return FieldType(kind)


def parse_template(text: str) -> Template:
    """Parse one template document; raises TemplateError with the line number."""
    header = None
    fields: list[TemplateField] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise TemplateError(f"line {lineno}: {exc}") from None
        if tokens[0] == "template":
            if header is not None:
                raise TemplateError(f"line {lineno}: only one template per document")
            if len(tokens) != 4:
                raise TemplateError(f"line {lineno}: expected: template <id> <version> <name>")
            try:
                header = (int(tokens[1]), int(tokens[2]), tokens[3])
            except ValueError:
                raise TemplateError(f"line {lineno}: id and version must be integers") from None
        elif tokens[0] == "field":
            if header is None:
                raise TemplateError(f"line {lineno}: field before template line")
            if len(tokens) != 3:
                raise TemplateError(f"line {lineno}: expected: field <name> <type>")
            fields.append(TemplateField(tokens[1], _parse_type(tokens[2])))
        else:
            raise TemplateError(f"line {lineno}: unknown directive {tokens[0]!r}")
    if header is None:
        raise TemplateError("document has no template line")
    return Template(header[0], header[1], header[2], tuple(fields))


def serialize_template(template: Template) -> str:
    lines = [f'template {template.template_id} {template.version} "{template.name}"']
    for f in template.fields:
        lines.append(f"field {f.name} {f.ftype.describe()}")
    return "\n".join(lines) + "\n"
