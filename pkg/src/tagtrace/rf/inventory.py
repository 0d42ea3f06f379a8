"""Deterministic slotted anti-collision inventory.

Rounds have 16 slots. With the current mask (value, bit length), every
in-range tag whose uid ends in the mask bits answers in the slot given by
the next 4 uid bits above the mask (uid read as a big-endian integer).
A slot with a single answer singulates that tag; a slot with several
answers queues the 4-bits-longer mask for a later round. No randomness
anywhere: identical fields produce identical results.

Termination: all uids share the fixed 0xE0 family byte, so two distinct
uids always differ somewhere in their low 56 bits and every collision
group splits before the mask reaches the family byte.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from tagtrace.rf.model import FieldGeometry, SlotTiming, TagEmulation


@dataclass(frozen=True)
class InventoryResult:
    uids: tuple[bytes, ...]  # sorted ascending
    rounds_used: int
    duration_us: int
    truncated: bool  # singulation stopped at the profile cap


def _slot_of(uid_value: int, mask_len: int) -> int:
    return (uid_value >> mask_len) & 0xF


def inventory(
    tags: list[TagEmulation] | tuple[TagEmulation, ...],
    geometry: FieldGeometry,
    timing: SlotTiming,
) -> InventoryResult:
    """Singulate every in-range tag (up to the profile cap)."""
    answering = [
        (int.from_bytes(t.uid, "big"), t.uid)
        for t in tags
        if geometry.can_read(t.position_cm)
    ]
    collected: list[bytes] = []
    truncated = False
    rounds = 0
    pending: deque[tuple[int, int]] = deque([(0, 0)])  # (mask_value, mask_len)
    while pending:
        if len(collected) >= geometry.inventory_cap:
            truncated = True
            break
        mask_value, mask_len = pending.popleft()
        rounds += 1
        by_slot: dict[int, list[bytes]] = {}
        low_mask = (1 << mask_len) - 1
        for value, uid in answering:
            if value & low_mask != mask_value:
                continue
            by_slot.setdefault(_slot_of(value, mask_len), []).append(uid)
        for slot in sorted(by_slot):
            group = by_slot[slot]
            if len(group) == 1:
                if len(collected) < geometry.inventory_cap:
                    collected.append(group[0])
                else:
                    truncated = True
            else:
                pending.append((mask_value | (slot << mask_len), mask_len + 4))
    return InventoryResult(
        uids=tuple(sorted(collected)),
        rounds_used=rounds,
        duration_us=rounds * timing.round_duration_us,
        truncated=truncated,
    )
