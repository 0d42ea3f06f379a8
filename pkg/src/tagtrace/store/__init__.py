from tagtrace.store.alarms import AlarmEngine, RULE_KINDS, check_rule
from tagtrace.store.auth import (
    ROLE_ADMIN,
    ROLE_OPERATOR,
    ROLE_VIEWER,
    ROLES,
    authenticate,
    hash_password,
    may_write,
    require_write,
    verify_password,
)
from tagtrace.store.crypto import load_encrypted, save_encrypted, seal, unseal
from tagtrace.store.datastore import (
    DataStore,
    load_encrypted_tables,
    save_encrypted_tables,
    tableset_from_bytes,
    tableset_to_bytes,
)
from tagtrace.store.errors import (
    BadCredentials,
    Disabled,
    DuplicateKey,
    IntegrityFailure,
    InvalidQuery,
    NotFound,
    SchemaViolation,
    StoreError,
    Unauthorized,
    UnknownColumn,
    UnknownTable,
    UnsupportedVersion,
    WrongPassphrase,
)
from tagtrace.store.reports import check_pattern, render_report, select_rows
from tagtrace.store.schema import CENTRAL_STATION, TABLES, TableSchema, check_record
from tagtrace.store.tables import Table, TableSet

__all__ = [
    "AlarmEngine",
    "BadCredentials",
    "CENTRAL_STATION",
    "DataStore",
    "Disabled",
    "DuplicateKey",
    "IntegrityFailure",
    "InvalidQuery",
    "NotFound",
    "ROLES",
    "ROLE_ADMIN",
    "ROLE_OPERATOR",
    "ROLE_VIEWER",
    "RULE_KINDS",
    "SchemaViolation",
    "StoreError",
    "TABLES",
    "Table",
    "TableSchema",
    "TableSet",
    "Unauthorized",
    "UnknownColumn",
    "UnknownTable",
    "UnsupportedVersion",
    "WrongPassphrase",
    "authenticate",
    "check_pattern",
    "check_record",
    "check_rule",
    "hash_password",
    "load_encrypted",
    "load_encrypted_tables",
    "may_write",
    "render_report",
    "require_write",
    "save_encrypted",
    "save_encrypted_tables",
    "seal",
    "select_rows",
    "tableset_from_bytes",
    "tableset_to_bytes",
    "unseal",
    "verify_password",
]
