"""A reader's field: the set of tags near one antenna, plus the air operations.

Write atomicity: a write either replaces every target block or none. Lock
checks run before any block is touched, so a refused write leaves memory
untouched.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from tagtrace.rf.errors import BlockLocked, RfError, TagNotFound
from tagtrace.rf.inventory import InventoryResult, inventory
from tagtrace.rf.model import FieldGeometry, SlotTiming, TagEmulation


class Crossing(enum.Enum):
    ENTER = "ENTER"
    LEAVE = "LEAVE"


@dataclass(frozen=True)
class FieldChange:
    crossing: Crossing
    uid: bytes
    position_cm: float


def read_blocks(
    tags: dict[bytes, TagEmulation],
    geometry: FieldGeometry,
    uid: bytes,
    first_block: int,
    count: int,
) -> list[bytes]:
    tag = tags.get(uid)
    if tag is None or not geometry.can_read(tag.position_cm):
        raise TagNotFound(f"tag {uid.hex()} absent or beyond read range")
    tag.check_span(first_block, count)
    return [tag.blocks[i] for i in range(first_block, first_block + count)]


def write_blocks(
    tags: dict[bytes, TagEmulation],
    geometry: FieldGeometry,
    uid: bytes,
    first_block: int,
    images: list[bytes],
) -> None:
    tag = tags.get(uid)
    if tag is None or not geometry.can_write(tag.position_cm):
        raise TagNotFound(f"tag {uid.hex()} absent or beyond write range")
    tag.check_span(first_block, len(images))
    for image in images:
        if len(image) != tag.block_size:
            raise RfError(f"block image must be {tag.block_size} bytes, got {len(image)}")
    for offset in range(len(images)):
        if tag.lock_flags[first_block + offset]:
            raise BlockLocked(f"block {first_block + offset} of {uid.hex()} is locked")
    for offset, image in enumerate(images):
        tag.blocks[first_block + offset] = bytes(image)


class ReaderField:
    """Mutable tag set for one reader, with crossing detection on moves."""

    def __init__(self, geometry: FieldGeometry):
        self.geometry = geometry
        self.tags: dict[bytes, TagEmulation] = {}

    def add_tag(self, tag: TagEmulation) -> None:
        self.tags[tag.uid] = tag

    def remove_tag(self, uid: bytes) -> list[FieldChange]:
        tag = self.tags.pop(uid, None)
        if tag is None:
            raise TagNotFound(f"tag {uid.hex()} not in field")
        if self.geometry.can_read(tag.position_cm):
            return [FieldChange(Crossing.LEAVE, uid, tag.position_cm)]
        return []

    def move_tag(self, uid: bytes, new_position_cm: float) -> list[FieldChange]:
        tag = self.tags.get(uid)
        if tag is None:
            raise TagNotFound(f"tag {uid.hex()} not in field")
        if new_position_cm < 0:
            raise ValueError("position_cm must be non-negative")
        was_in = self.geometry.can_read(tag.position_cm)
        tag.position_cm = new_position_cm
        now_in = self.geometry.can_read(new_position_cm)
        if now_in and not was_in:
            return [FieldChange(Crossing.ENTER, uid, new_position_cm)]
        if was_in and not now_in:
            return [FieldChange(Crossing.LEAVE, uid, new_position_cm)]
        return []

    def inventory(self, timing: SlotTiming) -> InventoryResult:
        return inventory(list(self.tags.values()), self.geometry, timing)

    def read_blocks(self, uid: bytes, first_block: int, count: int) -> list[bytes]:
        return read_blocks(self.tags, self.geometry, uid, first_block, count)

    def write_blocks(self, uid: bytes, first_block: int, images: list[bytes]) -> None:
        write_blocks(self.tags, self.geometry, uid, first_block, images)

    def in_range_uids(self) -> list[bytes]:
        return sorted(u for u, t in self.tags.items() if self.geometry.can_read(t.position_cm))
