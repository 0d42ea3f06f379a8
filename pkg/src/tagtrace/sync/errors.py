from __future__ import annotations


class SyncError(Exception):
    pass


class DeviceUnreachable(SyncError):
    pass


class NotConnected(SyncError):
    pass


class QuotaExceeded(SyncError):
    pass


class LinkCut(SyncError):
    """Transport severed mid-stream (fault injection or real loss)."""


class ProtocolError(SyncError):
    pass


class ConversionLoss(SyncError):
    """Central records that do not fit the compact format.

    ``losses`` is a list of (primary key tuple, field name) pairs naming
    every offending value; nothing is truncated silently.
    """

    def __init__(self, table: str, losses: list[tuple[tuple, str]]):
        self.table = table
        self.losses = losses
        detail = ", ".join(f"{key}:{field}" for key, field in losses[:5])
        more = "" if len(losses) <= 5 else f" (+{len(losses) - 5} more)"
        super().__init__(f"{table}: {len(losses)} value(s) exceed compact limits: {detail}{more}")
