from tagtrace.sync.compact import (
    MAX_TEXT_BYTES,
    CompactTable,
    compact_from_doc,
    compact_to_doc,
    convert_table,
    invert_table,
    narrow_real,
)
from tagtrace.sync.device import HandheldDevice
from tagtrace.sync.errors import (
    ConversionLoss,
    DeviceUnreachable,
    LinkCut,
    NotConnected,
    ProtocolError,
    QuotaExceeded,
    SyncError,
)
from tagtrace.sync.link import CONNECTED, DISCONNECTED, FAULTED, DeviceLink
from tagtrace.sync.session import (
    CONFLICT,
    PULL,
    PUSH,
    SKIP,
    SyncManifest,
    TableOutcome,
    classify,
    sync_session,
)
from tagtrace.sync.wire import ByteLink, decode_message, encode_message, rows_digest

__all__ = [
    "ByteLink",
    "CONFLICT",
    "CONNECTED",
    "CompactTable",
    "ConversionLoss",
    "DISCONNECTED",
    "DeviceLink",
    "DeviceUnreachable",
    "FAULTED",
    "HandheldDevice",
    "LinkCut",
    "MAX_TEXT_BYTES",
    "NotConnected",
    "PULL",
    "PUSH",
    "ProtocolError",
    "QuotaExceeded",
    "SKIP",
    "SyncError",
    "SyncManifest",
    "TableOutcome",
    "classify",
    "compact_from_doc",
    "compact_to_doc",
    "convert_table",
    "decode_message",
    "encode_message",
    "invert_table",
    "narrow_real",
    "rows_digest",
    "sync_session",
]
