"""Datastore exception hierarchy."""


class StoreError(Exception):
    """Base for datastore failures."""


class Unauthorized(StoreError):
    """Caller's role does not permit the operation."""


class DuplicateKey(StoreError):
    """Insert would overwrite an existing primary key."""


class NotFound(StoreError):
    """No record under that primary key."""


class UnknownTable(StoreError):
    """Table name not in the schema."""


class UnknownColumn(StoreError):
    """Column name not in the table's schema."""


class SchemaViolation(StoreError):
    """Record shape or value type does not match the table schema."""


class BadCredentials(StoreError):
    """Unknown user or wrong password."""


class Disabled(StoreError):
    """Account exists and the password is right, but the account is off."""


class WrongPassphrase(StoreError):
    """Container key check failed: passphrase does not match."""


class IntegrityFailure(StoreError):
    """Container or journal content failed its authenticity check."""


class UnsupportedVersion(StoreError):
    """Container format version not understood."""


class InvalidQuery(StoreError):
    """Journal query parameters are out of contract."""
