"""Service configuration file (INI).

    [service]
    listen = 127.0.0.1:8765
    store = ./data/store
    world = ./world.txt
    session_hours = 8
    admin_user = admin
    admin_password = change-me
    console = ../frontend/dist

    [sync]
    archive = ./data/conflicts
    devices = pda-1, pda-2
    quota_kib = 8192

Only [service] store and world are required. admin_user/admin_password
seed the users table when it is empty (first start); they are ignored
once any user exists.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field


class ConfigError(Exception):
    pass


@dataclass
class ServiceConfig:
    store_dir: str
    world_path: str
    listen_host: str = "127.0.0.1"
    listen_port: int = 8765
    session_hours: float = 8.0
    admin_user: str = "admin"
    admin_password: str = ""
    sync_archive: str = ""
    devices: list[str] = field(default_factory=list)
    device_quota: int = 8 * 1024 * 1024
    console_dir: str = ""


def load_config(path: str) -> ServiceConfig:
    if not os.path.exists(path):
        raise ConfigError(f"config file {path!r} does not exist")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"config file {path!r} is malformed: {exc}") from None
    if "service" not in parser:
        raise ConfigError(f"config file {path!r} has no [service] section")
    svc = parser["service"]
    for key in ("store", "world"):
        if key not in svc:
            raise ConfigError(f"config file {path!r} missing service.{key}")

    listen = svc.get("listen", "127.0.0.1:8765")
    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise ConfigError(f"service.listen must be host:port, got {listen!r}")

    base = os.path.dirname(os.path.abspath(path))

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.normpath(os.path.join(base, p))

    sync = parser["sync"] if "sync" in parser else {}
    devices = [d.strip() for d in sync.get("devices", "").split(",") if d.strip()]
    try:
        session_hours = float(svc.get("session_hours", "8"))
        quota_kib = int(sync.get("quota_kib", "8192"))
    except ValueError as exc:
        raise ConfigError(f"config file {path!r}: {exc}") from None

    archive = sync.get("archive", "")
    console = svc.get("console", "")
    return ServiceConfig(
        store_dir=resolve(svc["store"]),
        world_path=resolve(svc["world"]),
        listen_host=host,
        listen_port=int(port_text),
        session_hours=session_hours,
        admin_user=svc.get("admin_user", "admin"),
        admin_password=svc.get("admin_password", ""),
        sync_archive=resolve(archive) if archive else "",
        devices=devices,
        device_quota=quota_kib * 1024,
        console_dir=resolve(console) if console else "",
    )
