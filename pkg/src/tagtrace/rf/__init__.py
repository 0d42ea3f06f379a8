"""Deterministic air-interface simulation: tags, fields, anti-collision."""

from tagtrace.rf.errors import (
    BlockLocked,
    BlockOutOfRange,
    DuplicateUid,
    RfError,
    TagNotFound,
    WorldFileError,
)
from tagtrace.rf.field import Crossing, FieldChange, ReaderField, read_blocks, write_blocks
from tagtrace.rf.inventory import InventoryResult, inventory
from tagtrace.rf.model import (
    DEFAULT_BLOCK_COUNT,
    DEFAULT_BLOCK_SIZE,
    DEFAULT_TIMING,
    PROFILE_DEFAULT,
    PROFILE_MAX,
    PROFILE_MIN,
    FieldGeometry,
    SlotTiming,
    TagEmulation,
    check_uid,
)
from tagtrace.rf.world import SimClock, SimWorld, parse_world, serialize_world

__all__ = [
    "BlockLocked",
    "BlockOutOfRange",
    "Crossing",
    "DEFAULT_BLOCK_COUNT",
    "DEFAULT_BLOCK_SIZE",
    "DEFAULT_TIMING",
    "DuplicateUid",
    "FieldChange",
    "FieldGeometry",
    "InventoryResult",
    "PROFILE_DEFAULT",
    "PROFILE_MAX",
    "PROFILE_MIN",
    "ReaderField",
    "RfError",
    "SimClock",
    "SimWorld",
    "SlotTiming",
    "TagEmulation",
    "TagNotFound",
    "WorldFileError",
    "check_uid",
    "inventory",
    "parse_world",
    "read_blocks",
    "serialize_world",
    "write_blocks",
]
