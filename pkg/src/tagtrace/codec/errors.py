"""Codec exception hierarchy."""


class CodecError(Exception):
    """Base for all template/payload codec failures."""


class TemplateError(CodecError):
    """Template definition violates a structural rule."""


class TypeMismatch(CodecError):
    """A value's kind does not match the template field's declared type."""


class Overflow(CodecError):
    """A value does not fit its declared field width."""


class CapacityExceeded(CodecError):
    """Encoded payload would not fit the target tag memory."""


class BadMagic(CodecError):
    """Byte string does not start with the payload magic byte."""


class UnknownTemplate(CodecError):
    """No registered template matches the payload header."""

    def __init__(self, template_id: int, version: int):
        super().__init__(f"no template registered for id={template_id} version={version}")
        self.template_id = template_id
        self.version = version


class CrcMismatch(CodecError):
    """Payload trailer CRC does not match the header+body bytes."""


class TruncatedPayload(CodecError):
    """Byte string is shorter than its header claims."""


class MalformedBody(CodecError):
    """Declared body length is inconsistent with the resolved template."""
