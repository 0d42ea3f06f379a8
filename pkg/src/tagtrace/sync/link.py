"""Connection lifecycle and file operations against a handheld.

States: DISCONNECTED -> CONNECTED (connect, idempotent) -> DISCONNECTED
(disconnect). A transport loss mid-session lands in FAULTED; operations
then raise DeviceUnreachable until a fresh connect.

File transfers are verified end to end by digest even though the
in-process transport cannot corrupt them; the check documents the
contract a remote transport must satisfy.
"""

from __future__ import annotations

import hashlib

from tagtrace.sync.device import HandheldDevice
from tagtrace.sync.errors import DeviceUnreachable, NotConnected
from tagtrace.sync.wire import ByteLink

DISCONNECTED = "DISCONNECTED"
CONNECTED = "CONNECTED"
FAULTED = "FAULTED"


class DeviceLink:
    def __init__(self, device: HandheldDevice):
        self.device = device
        self.state = DISCONNECTED
        self.pipe: ByteLink | None = None

    def connect(self) -> "DeviceLink":
        if self.state == CONNECTED:
            return self
        self.pipe = ByteLink(self.device.agent)
        self.state = CONNECTED
        return self

    def disconnect(self) -> None:
        self.state = DISCONNECTED
        self.pipe = None

    def fault(self) -> None:
        """Simulate abrupt transport loss."""
        self.state = FAULTED
        if self.pipe is not None:
            self.pipe.alive = False

    def _require_connected(self) -> None:
        if self.state == FAULTED:
            raise DeviceUnreachable(f"device {self.device.device_id} lost mid-session")
        if self.state != CONNECTED:
            raise NotConnected(f"device {self.device.device_id} is not connected")

    # -- file operations ------------------------------------------------------

    def copy_to_device(self, path: str, data: bytes) -> dict:
        self._require_connected()
        self.device.fs_write(path, data)
        echo = self.device.fs_read(path)
        digest = hashlib.sha256(data).hexdigest()
        if hashlib.sha256(echo).hexdigest() != digest:
            raise DeviceUnreachable(f"transfer verification failed for {path!r}")
        return {"status": "ok", "size": len(data), "digest": digest}

    def copy_from_device(self, path: str) -> bytes:
        self._require_connected()
        return self.device.fs_read(path)

    def delete_file(self, path: str) -> dict:
        self._require_connected()
        removed = self.device.fs_delete(path)
        return {"status": "ok" if removed else "not_found"}

    def create_folder(self, path: str) -> dict:
        self._require_connected()
        created = self.device.fs_mkdir(path)
        return {"status": "created" if created else "existed"}

    def delete_folder(self, path: str) -> dict:
        self._require_connected()
        removed = self.device.fs_rmdir(path)
        return {"status": "deleted" if removed else "absent"}

    def stat(self, path: str) -> dict:
        self._require_connected()
        return self.device.fs_stat(path)
