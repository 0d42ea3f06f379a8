"""Simulated transponders, reader field geometry, and inventory timing.

Range handling is a hard cutoff: a tag is readable iff its distance from
the antenna center is <= the profile's read range, writable iff <= the
write range. No fading, no orientation effects, no probabilistic errors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from tagtrace.rf.errors import BlockOutOfRange, RfError

UID_LEN = 8
UID_FAMILY_BYTE = 0xE0

DEFAULT_BLOCK_COUNT = 64
DEFAULT_BLOCK_SIZE = 4

# Reader hardware envelope: profiles must keep their read range inside it.
MIN_READ_RANGE_CM = 9.0
MAX_READ_RANGE_CM = 40.0

SLOTS_PER_ROUND = 16


def check_uid(uid: bytes) -> bytes:
    if len(uid) != UID_LEN:
        raise RfError(f"uid must be {UID_LEN} bytes, got {len(uid)}")
    if uid[0] != UID_FAMILY_BYTE:
        raise RfError(f"uid must start with 0x{UID_FAMILY_BYTE:02X}, got 0x{uid[0]:02X}")
    return bytes(uid)


@dataclass
class TagEmulation:
    """One simulated transponder: identity, block memory, and position."""

    uid: bytes
    position_cm: float = 0.0
    block_count: int = DEFAULT_BLOCK_COUNT
    block_size: int = DEFAULT_BLOCK_SIZE
    blocks: list[bytes] = field(default_factory=list)
    lock_flags: list[bool] = field(default_factory=list)

    def __post_init__(self):
        self.uid = check_uid(self.uid)
        if self.block_count < 1 or self.block_size < 1:
            raise RfError("tags need at least one block of at least one byte")
        if self.position_cm < 0:
            raise RfError("position_cm must be non-negative")
        if not self.blocks:
            self.blocks = [bytes(self.block_size) for _ in range(self.block_count)]
        if not self.lock_flags:
            self.lock_flags = [False] * self.block_count
        if len(self.blocks) != self.block_count or len(self.lock_flags) != self.block_count:
            raise RfError("blocks/lock_flags must match block_count")

    @property
    def capacity(self) -> int:
        return self.block_count * self.block_size

    def check_span(self, first_block: int, count: int) -> None:
        if first_block < 0 or count < 1 or first_block + count > self.block_count:
            raise BlockOutOfRange(
                f"blocks {first_block}..{first_block + count - 1} outside 0..{self.block_count - 1}"
            )

    def memory_image(self) -> bytes:
        return b"".join(self.blocks)


@dataclass(frozen=True)
class FieldGeometry:
    """Reader profile: usable ranges and the per-inventory singulation cap."""

    read_range_cm: float = MAX_READ_RANGE_CM
    write_range_cm: float | None = None
    inventory_cap: int = 64

    def __post_init__(self):
        if not MIN_READ_RANGE_CM <= self.read_range_cm <= MAX_READ_RANGE_CM:
            raise RfError(
                f"read range must lie in [{MIN_READ_RANGE_CM}, {MAX_READ_RANGE_CM}] cm"
            )
        if self.write_range_cm is None:
            object.__setattr__(self, "write_range_cm", self.read_range_cm)
        if self.write_range_cm > self.read_range_cm:
            raise RfError("write range cannot exceed read range")
        if self.inventory_cap < 1:
            raise RfError("inventory cap must be >= 1")

    def can_read(self, position_cm: float) -> bool:
        return position_cm <= self.read_range_cm

    def can_write(self, position_cm: float) -> bool:
        return position_cm <= self.write_range_cm


# The two ends of the supported hardware envelope plus a mid-range default.
PROFILE_MIN = FieldGeometry(read_range_cm=9.0, write_range_cm=9.0)
PROFILE_MAX = FieldGeometry(read_range_cm=40.0, write_range_cm=40.0)
PROFILE_DEFAULT = FieldGeometry(read_range_cm=40.0, write_range_cm=20.0)


@dataclass(frozen=True)
class SlotTiming:
    """Simulated durations. Defaults put single-tag reads at ~120/s."""

    slot_duration_us: int = 2400
    slots_per_round: int = SLOTS_PER_ROUND
    single_read_duration_us: int = 8333

    def __post_init__(self):
        if self.slot_duration_us < 1 or self.single_read_duration_us < 1:
            raise RfError("durations must be positive")
        if self.slots_per_round != SLOTS_PER_ROUND:
            raise RfError(f"inventory rounds are fixed at {SLOTS_PER_ROUND} slots")

    @property
    def round_duration_us(self) -> int:
        return self.slot_duration_us * self.slots_per_round


DEFAULT_TIMING = SlotTiming()
