"""Encrypted container: roundtrip, passphrase check, and the guarantee
that any single corrupted byte is detected rather than decrypted."""

from __future__ import annotations

import random

import pytest

from tagtrace.store import (
    IntegrityFailure,
    StoreError,
    TableSet,
    UnsupportedVersion,
    WrongPassphrase,
    load_encrypted_tables,
    save_encrypted_tables,
    seal,
    unseal,
)
from tagtrace.store.crypto import HEADER_LEN, MAGIC, load_encrypted, save_encrypted

PAYLOAD = bytes(range(256)) * 3
PASSPHRASE = "orbit marble cactus"


def test_seal_unseal_roundtrip():
    blob = seal(PAYLOAD, PASSPHRASE)
    assert blob[:4] == MAGIC
    assert len(blob) > HEADER_LEN + len(PAYLOAD)  # GCM tag adds 16
    assert unseal(blob, PASSPHRASE) == PAYLOAD


def test_empty_plaintext_roundtrip():
    blob = seal(b"", PASSPHRASE)
    assert unseal(blob, PASSPHRASE) == b""


def test_fresh_salt_and_nonce_every_seal():
    a = seal(PAYLOAD, PASSPHRASE)
    b = seal(PAYLOAD, PASSPHRASE)
    assert a != b
    assert a[5:21] != b[5:21]  # salt
    assert a[21:33] != b[21:33]  # nonce
    assert unseal(a, PASSPHRASE) == unseal(b, PASSPHRASE) == PAYLOAD


def test_wrong_passphrase_reported_as_such():
    blob = seal(PAYLOAD, PASSPHRASE)
    with pytest.raises(WrongPassphrase):
        unseal(blob, "guess")
    with pytest.raises(WrongPassphrase):
        unseal(blob, "")


def test_not_a_container():
    with pytest.raises(IntegrityFailure):
        unseal(b"", PASSPHRASE)
    with pytest.raises(IntegrityFailure):
        unseal(b"PK\x03\x04" + bytes(60), PASSPHRASE)
    blob = seal(PAYLOAD, PASSPHRASE)
    with pytest.raises(IntegrityFailure):
        unseal(blob[: HEADER_LEN - 1], PASSPHRASE)


def test_unknown_container_version():
    blob = bytearray(seal(PAYLOAD, PASSPHRASE))
    blob[4] = 2
    with pytest.raises(UnsupportedVersion):
        unseal(bytes(blob), PASSPHRASE)


def test_truncated_or_extended_ciphertext_detected():
    blob = seal(PAYLOAD, PASSPHRASE)
    with pytest.raises(IntegrityFailure):
        unseal(blob[:-1], PASSPHRASE)
    with pytest.raises(IntegrityFailure):
        unseal(blob + b"\x00", PASSPHRASE)


def _expected_failure(offset: int):
    # which complaint a flip at this offset must produce
    if offset < 4:
        return IntegrityFailure  # magic
    if offset == 4:
        return UnsupportedVersion
    if offset < 21 or 33 <= offset < 49:
        return WrongPassphrase  # salt or stored check: key check fails first
    return IntegrityFailure  # nonce or ciphertext: GCM refuses


def test_every_single_byte_flip_is_detected():
    # 100 corruptions, at least one in every header region, all caught
    blob = seal(PAYLOAD, PASSPHRASE)
    rng = random.Random(0xC0FFEE)
    offsets = [0, 4, 5, 21, 33, 49, len(blob) - 1]
    offsets += [rng.randrange(len(blob)) for _ in range(100 - len(offsets))]
    for offset in offsets:
        delta = rng.randrange(1, 256)
        damaged = bytearray(blob)
        damaged[offset] ^= delta
        with pytest.raises(StoreError) as excinfo:
            unseal(bytes(damaged), PASSPHRASE)
        assert isinstance(excinfo.value, _expected_failure(offset)), (
            f"offset {offset}: got {type(excinfo.value).__name__}"
        )


def test_file_save_load_roundtrip(tmp_path):
    path = str(tmp_path / "vault.tte")
    save_encrypted(path, PAYLOAD, PASSPHRASE)
    assert not (tmp_path / "vault.tte.tmp").exists()
    assert load_encrypted(path, PASSPHRASE) == PAYLOAD
    with pytest.raises(WrongPassphrase):
        load_encrypted(path, "guess")


def test_encrypted_tableset_preserves_rows_and_revisions(tmp_path):
    tables = TableSet()
    tables["stations"].insert(
        {"addr": 3, "name": "dock door", "baud_class": 1, "status": "idle"}
    )
    tables["stations"].last_modified = 77.25
    tables["events"].replace_all([], 12, 5.0)

    path = str(tmp_path / "backup.tte")
    save_encrypted_tables(tables, path, PASSPHRASE)
    back = load_encrypted_tables(path, PASSPHRASE)
    assert back["stations"].scan() == tables["stations"].scan()
    assert back["stations"].revision == 1
    assert back["stations"].last_modified == 77.25
    assert back["events"].revision == 12
    assert back.revisions() == tables.revisions()
