"""Anti-collision inventory against the exhaustive mask-tree reference."""

import random

from oracles import singulation_tree
from gen import random_uid
from tagtrace.rf import (
    DEFAULT_TIMING,
    FieldGeometry,
    PROFILE_MAX,
    SlotTiming,
    TagEmulation,
    inventory,
)

TIMING = DEFAULT_TIMING
ROUND_US = TIMING.slots_per_round * TIMING.slot_duration_us


def tags_at(uids, position=5.0):
    return [TagEmulation(u, position_cm=position) for u in uids]


def test_empty_field_takes_one_round():
    result = inventory([], PROFILE_MAX, TIMING)
    assert result.uids == ()
    assert result.rounds_used == 1
    assert result.duration_us == ROUND_US
    assert not result.truncated


def test_single_tag_takes_one_round():
    uid = bytes.fromhex("e004010203040506")
    result = inventory(tags_at([uid]), PROFILE_MAX, TIMING)
    assert result.uids == (uid,)
    assert result.rounds_used == 1


def test_out_of_range_tags_do_not_answer():
    near = bytes.fromhex("e004010203040506")
    far = bytes.fromhex("e004010203040507")
    tags = [TagEmulation(near, position_cm=5.0), TagEmulation(far, position_cm=90.0)]
    result = inventory(tags, PROFILE_MAX, TIMING)
    assert result.uids == (near,)


def test_seventeen_tags_forced_into_one_slot():
    # identical low 4 bits -> all 17 collide in round one, splitting on
    # the next nibble afterwards; expectations come from the tree walk
    uids = [bytes([0xE0, 0, 0, 0, 0, 0, i, 0x05]) for i in range(17)]
    expect_uids, expect_rounds = singulation_tree(uids)
    result = inventory(tags_at(uids), PROFILE_MAX, TIMING)
    assert list(result.uids) == expect_uids
    assert result.rounds_used == expect_rounds
    assert result.duration_us == expect_rounds * ROUND_US


def test_matches_tree_reference_on_random_worlds():
    rng = random.Random(0xA11)
    for _ in range(100):
        n = rng.randint(0, 40)
        uids = set()
        while len(uids) < n:
            uids.add(random_uid(rng))
        positions = {u: rng.uniform(0, 80) for u in uids}
        tags = [TagEmulation(u, position_cm=positions[u]) for u in uids]
        in_range = [u for u in uids if positions[u] <= 40.0]
        expect_uids, expect_rounds = singulation_tree(in_range)
        result = inventory(tags, PROFILE_MAX, TIMING)
        assert list(result.uids) == expect_uids
        assert result.rounds_used == expect_rounds
        assert result.duration_us == expect_rounds * ROUND_US


def test_deterministic_across_repeats_and_input_order():
    rng = random.Random(2)
    uids = [random_uid(rng) for _ in range(25)]
    tags = tags_at(uids)
    first = inventory(tags, PROFILE_MAX, TIMING)
    again = inventory(tags, PROFILE_MAX, TIMING)
    shuffled = list(tags)
    rng.shuffle(shuffled)
    reordered = inventory(shuffled, PROFILE_MAX, TIMING)
    assert first == again == reordered


def test_rounds_bounded_by_tag_count_plus_one():
    rng = random.Random(0xB0)
    for _ in range(40):
        n = rng.randint(0, 64)
        uids = set()
        while len(uids) < n:
            uids.add(random_uid(rng))
        result = inventory(tags_at(sorted(uids)), PROFILE_MAX, TIMING)
        assert result.rounds_used <= n + 1
        assert len(result.uids) == n


def test_profile_cap_truncates():
    rng = random.Random(5)
    uids = set()
    while len(uids) < 40:
        uids.add(random_uid(rng))
    capped = FieldGeometry(read_range_cm=40.0, inventory_cap=10)
    result = inventory(tags_at(sorted(uids)), capped, TIMING)
    assert result.truncated
    assert len(result.uids) == 10
    assert set(result.uids) <= uids


def test_default_timing_hits_throughput_envelope():
    # single-tag reads per simulated second must land in [40, 200]
    reads_per_s = 1_000_000 / TIMING.single_read_duration_us
    assert 40.0 <= reads_per_s <= 200.0
