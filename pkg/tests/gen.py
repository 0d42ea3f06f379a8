"""Random object builders shared by test modules. Seeded `random.Random`
everywhere so every run exercises the same cases.
"""

from __future__ import annotations

import random
import struct

from tagtrace.codec import FieldKind, FieldType, TagPayload, Template, TemplateField

_NAMES = [
    "loc", "qty", "price", "lot", "owner", "grade", "site", "bin",
    "zone", "mass", "mark", "rev", "stage", "origin", "width", "note",
]


def random_template(rng: random.Random, template_id: int, version: int = 0,
                    max_fields: int = 6) -> Template:
    count = rng.randint(0, max_fields)
    names = rng.sample(_NAMES, count)
    fields = []
    for name in names:
        kind = rng.choice(list(FieldKind))
        if kind is FieldKind.STRING:
            fields.append(TemplateField(name, FieldType(kind, rng.randint(1, 24))))
        else:
            fields.append(TemplateField(name, FieldType(kind)))
    return Template(template_id, version, f"t{template_id}", tuple(fields))


def random_values(rng: random.Random, template: Template) -> list:
    values = []
    for f in template.fields:
        kind = f.ftype.kind
        if kind is FieldKind.CHARACTER:
            values.append(bytes([rng.randrange(256)]))
        elif kind is FieldKind.STRING:
            n = rng.randint(0, f.ftype.max_len)
            values.append(bytes(rng.randrange(256) for _ in range(n)))
        elif kind is FieldKind.INTEGER:
            values.append(rng.randint(-(2**31), 2**31 - 1))
        else:
            # Finite doubles only; NaN would break roundtrip equality.
            while True:
                bits = rng.getrandbits(64)
                value = struct.unpack("<d", struct.pack("<Q", bits))[0]
                if value == value and value not in (float("inf"), float("-inf")):
                    values.append(value)
                    break
    return values


def random_payload(rng: random.Random, template: Template) -> TagPayload:
    return TagPayload(template.template_id, template.version,
                      random_values(rng, template))


def random_uid(rng: random.Random) -> bytes:
    return bytes([0xE0]) + bytes(rng.randrange(256) for _ in range(7))
