"""Fixed-capacity event journal kept on every station.

Holds at most 255 records; a push into a full ring evicts the oldest.
Reading never removes anything — the master pulls by acknowledged
sequence number and eviction is the only way records disappear (besides
an explicit clear).

``push`` reports when occupancy crosses the 90% warning threshold so the
owner can journal a BUFFER_OVERRUN_WARNING; the ring itself never
fabricates records. The warning re-arms only when occupancy falls back
below the threshold (i.e. after a clear).
"""

from __future__ import annotations

import math
from collections import deque

from tagtrace.net.events import EventRecord

RING_CAPACITY = 255
WARN_THRESHOLD = 0.9


class EventRing:
    def __init__(self, capacity: int = RING_CAPACITY):
        if capacity < 1:
            raise ValueError("ring capacity must be >= 1")
        self.capacity = capacity
        self._records: deque[EventRecord] = deque(maxlen=capacity)
        self._warn_at = math.ceil(capacity * WARN_THRESHOLD)
        self._warned = False

    def __len__(self) -> int:
        return len(self._records)

    def push(self, record: EventRecord) -> bool:
        """Append, evicting the oldest when full. True on a 90% crossing."""
        self._records.append(record)
        if len(self._records) >= self._warn_at and not self._warned:
            self._warned = True
            return True
        return False

    def read_after(self, after_seq: int, limit: int | None = None) -> list[EventRecord]:
        """Retained records with seq > after_seq, oldest first."""
        out = [r for r in self._records if r.seq > after_seq]
        return out if limit is None else out[:limit]

    def clear(self) -> None:
        self._records.clear()
        self._warned = False

    def oldest_seq(self) -> int | None:
        return self._records[0].seq if self._records else None

    def newest_seq(self) -> int | None:
        return self._records[-1].seq if self._records else None
