"""Template and payload domain model.

A template is an ordered list of named, typed fields. Four field kinds are
supported: a single character, a fixed-capacity string, a signed 32-bit
integer, and a double-precision real. String fields declare a maximum
length; the encoded form always occupies ``2 + max_len`` bytes so the
encoded size of a template is a constant, which keeps tag-capacity checks
trivial.

Values are plain Python objects: ``bytes`` of length 1 for CHARACTER,
``bytes`` for STRING (any character-set interpretation happens above the
codec), ``int`` for INTEGER, ``float`` for REAL.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from tagtrace.codec.errors import TemplateError

MAX_STRING_LEN = 208
MAX_FIELD_NAME_BYTES = 32

# 64 blocks x 4 bytes, the default simulated tag memory.
DEFAULT_TAG_CAPACITY = 256


class FieldKind(enum.Enum):
    CHARACTER = "character"
    STRING = "string"
    INTEGER = "integer"
    REAL = "real"


@dataclass(frozen=True)
class FieldType:
    kind: FieldKind
    max_len: int | None = None  # STRING only

    def __post_init__(self):
        if self.kind is FieldKind.STRING:
            if self.max_len is None or not 1 <= self.max_len <= MAX_STRING_LEN:
                raise TemplateError(
                    f"string max_len must be in 1..{MAX_STRING_LEN}, got {self.max_len}"
                )
        elif self.max_len is not None:
            raise TemplateError(f"{self.kind.value} fields take no max_len")

    @property
    def encoded_width(self) -> int:
        if self.kind is FieldKind.CHARACTER:
            return 1
        if self.kind is FieldKind.STRING:
            return 2 + self.max_len
        if self.kind is FieldKind.INTEGER:
            return 4
        return 8  # REAL

    def describe(self) -> str:
        if self.kind is FieldKind.STRING:
            return f"string:{self.max_len}"
        return self.kind.value


@dataclass(frozen=True)
class TemplateField:
    name: str
    ftype: FieldType


@dataclass(frozen=True)
class Template:
    template_id: int
    version: int
    name: str
    fields: tuple[TemplateField, ...]

    def __post_init__(self):
        if not 0 <= self.template_id <= 0xFFFF:
            raise TemplateError(f"template_id out of range: {self.template_id}")
        if not 0 <= self.version <= 0xFF:
            raise TemplateError(f"version out of range: {self.version}")
        seen = set()
        for f in self.fields:
            if not f.name:
                raise TemplateError("field names must be non-empty")
            if len(f.name.encode("utf-8")) > MAX_FIELD_NAME_BYTES:
                raise TemplateError(f"field name too long: {f.name!r}")
            if f.name in seen:
                raise TemplateError(f"duplicate field name: {f.name!r}")
            seen.add(f.name)

    def field_named(self, name: str) -> TemplateField:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def key(self) -> tuple[int, int]:
        return (self.template_id, self.version)


def make_template(template_id, version, name, fields) -> Template:
    """Build a Template from (field_name, kind_str[, max_len]) tuples."""
    built = []
    for spec in fields:
        fname, kind = spec[0], FieldKind(spec[1])
        max_len = spec[2] if len(spec) > 2 else None
        built.append(TemplateField(fname, FieldType(kind, max_len)))
    return Template(template_id, version, name, tuple(built))


@dataclass
class TagPayload:
    template_id: int
    version: int
    values: list

    def value_map(self, template: Template) -> dict:
        return {f.name: v for f, v in zip(template.fields, self.values)}


class TemplateRegistry:
    """(template_id, version) -> Template lookup with uniqueness enforcement."""

    def __init__(self, templates: list[Template] | None = None):
        self._by_key: dict[tuple[int, int], Template] = {}
        for t in templates or []:
            self.register(t)

    def register(self, template: Template) -> None:
        if template.key in self._by_key:
            raise TemplateError(
                f"template id={template.template_id} version={template.version} already registered"
            )
        self._by_key[template.key] = template

    def get(self, template_id: int, version: int) -> Template | None:
        return self._by_key.get((template_id, version))

    def remove(self, template_id: int, version: int) -> None:
        self._by_key.pop((template_id, version), None)

    def __iter__(self):
        return iter(sorted(self._by_key.values(), key=lambda t: t.key))

    def __len__(self):
        return len(self._by_key)
