"""Accounts and role checks.

Three roles. VIEWER reads everything but changes nothing. OPERATOR runs
the floor: tags, stations, events, templates, reports, alarm rules. Only
ADMIN touches the users table.
"""

from __future__ import annotations

import hashlib
import hmac
import os

from tagtrace.store.errors import BadCredentials, Disabled, Unauthorized

ROLE_VIEWER = "VIEWER"
ROLE_OPERATOR = "OPERATOR"
ROLE_ADMIN = "ADMIN"
ROLES = (ROLE_VIEWER, ROLE_OPERATOR, ROLE_ADMIN)

_PBKDF2_ROUNDS = 60_000


def hash_password(password: str, salt: bytes | None = None) -> str:
    if salt is None:
        salt = os.urandom(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, _PBKDF2_ROUNDS)
    return f"pbkdf2${_PBKDF2_ROUNDS}${salt.hex()}${digest.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        scheme, rounds, salt_hex, digest_hex = stored.split("$")
        if scheme != "pbkdf2":
            return False
        digest = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt_hex), int(rounds)
        )
        return hmac.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


def authenticate(users_table, username: str, password: str) -> dict:
    """User record on success. BadCredentials never reveals whether the
    username exists; Disabled only fires after the password checks out."""
    row = users_table.rows.get((username,))
    if row is None:
        # burn comparable time so a probe can't distinguish unknown users
        verify_password(password, hash_password("x"))
        raise BadCredentials("bad username or password")
    if not verify_password(password, row["password_hash"]):
        raise BadCredentials("bad username or password")
    if not row["enabled"]:
        raise Disabled(f"account {username!r} is disabled")
    return dict(row)


def check_role(role: str) -> None:
    if role not in ROLES:
        raise Unauthorized(f"unknown role {role!r}")


def may_write(role: str, table_name: str) -> bool:
    check_role(role)
    if role == ROLE_ADMIN:
        return True
    if role == ROLE_OPERATOR:
        return table_name != "users"
    return False


def require_write(role: str, table_name: str) -> None:
    if not may_write(role, table_name):
        raise Unauthorized(f"role {role} may not modify {table_name}")
