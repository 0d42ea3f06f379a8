"""Encrypted store container.

Layout: magic ``TTE1`` | version u8 | salt 16 | nonce 12 | check 16 |
ciphertext. One scrypt pass yields 64 bytes, split into the AES-GCM key
and a separate check key; the stored check (a hash of the check key) is
what lets a wrong passphrase be reported as such instead of surfacing as
tamper. The whole header rides as AAD, so flipping any header byte fails
authentication.
"""

from __future__ import annotations

import hashlib
import os

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from tagtrace.store.errors import IntegrityFailure, UnsupportedVersion, WrongPassphrase

MAGIC = b"TTE1"
VERSION = 1
SALT_LEN = 16
NONCE_LEN = 12
CHECK_LEN = 16
HEADER_LEN = len(MAGIC) + 1 + SALT_LEN + NONCE_LEN + CHECK_LEN

_SCRYPT_N = 2**14
_SCRYPT_R = 8
_SCRYPT_P = 1


def _derive(passphrase: str, salt: bytes) -> tuple[bytes, bytes]:
    keys = hashlib.scrypt(
        passphrase.encode("utf-8"), salt=salt, n=_SCRYPT_N, r=_SCRYPT_R, p=_SCRYPT_P,
        maxmem=64 * 1024 * 1024, dklen=64,
    )
    return keys[:32], keys[32:]


def _check_of(check_key: bytes) -> bytes:
    return hashlib.sha256(check_key).digest()[:CHECK_LEN]


def seal(plaintext: bytes, passphrase: str) -> bytes:
    salt = os.urandom(SALT_LEN)
    nonce = os.urandom(NONCE_LEN)
    enc_key, check_key = _derive(passphrase, salt)
    header = MAGIC + bytes([VERSION]) + salt + nonce + _check_of(check_key)
    ciphertext = AESGCM(enc_key).encrypt(nonce, plaintext, header)
    return header + ciphertext


def unseal(blob: bytes, passphrase: str) -> bytes:
    if len(blob) < HEADER_LEN or blob[: len(MAGIC)] != MAGIC:
        raise IntegrityFailure("not an encrypted store container")
    version = blob[len(MAGIC)]
    if version != VERSION:
        raise UnsupportedVersion(f"container version {version} not supported")
    offset = len(MAGIC) + 1
    salt = blob[offset : offset + SALT_LEN]
    offset += SALT_LEN
    nonce = blob[offset : offset + NONCE_LEN]
    offset += NONCE_LEN
    check = blob[offset : offset + CHECK_LEN]
    offset += CHECK_LEN
    enc_key, check_key = _derive(passphrase, salt)
    if _check_of(check_key) != check:
        raise WrongPassphrase("passphrase does not match this container")
    header = blob[:HEADER_LEN]
    try:
        return AESGCM(enc_key).decrypt(nonce, blob[HEADER_LEN:], header)
    except InvalidTag:
        raise IntegrityFailure("container contents fail authentication") from None


def save_encrypted(path: str, plaintext: bytes, passphrase: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(seal(plaintext, passphrase))
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def load_encrypted(path: str, passphrase: str) -> bytes:
    with open(path, "rb") as fh:
        return unseal(fh.read(), passphrase)
