"""Template-driven tag payload codec.

Users define templates (ordered, typed fields); the codec lays the field
values out into the byte string written to tag memory and reads them back,
with a CRC trailer guarding against partial or corrupted writes.
"""

from tagtrace.codec.errors import (
    BadMagic,
    CapacityExceeded,
    CodecError,
    CrcMismatch,
    MalformedBody,
    Overflow,
    TemplateError,
    TruncatedPayload,
    TypeMismatch,
    UnknownTemplate,
)
from tagtrace.codec.model import (
    FieldKind,
    FieldType,
    TagPayload,
    Template,
    TemplateField,
    TemplateRegistry,
)
from tagtrace.codec.coder import (
    HEADER_SIZE,
    MAGIC,
    TRAILER_SIZE,
    blocks_for,
    bytes_from_blocks,
    decode,
    encode,
    encoded_size,
)
from tagtrace.codec.textfmt import parse_template, serialize_template

__all__ = [
    "BadMagic",
    "CapacityExceeded",
    "CodecError",
    "CrcMismatch",
    "FieldKind",
    "FieldType",
    "HEADER_SIZE",
    "MAGIC",
    "MalformedBody",
    "Overflow",
    "TagPayload",
    "Template",
    "TemplateError",
    "TemplateField",
    "TemplateRegistry",
    "TRAILER_SIZE",
    "TruncatedPayload",
    "TypeMismatch",
    "UnknownTemplate",
    "blocks_for",
    "bytes_from_blocks",
    "decode",
    "encode",
    "encoded_size",
    "parse_template",
    "serialize_template",
]
