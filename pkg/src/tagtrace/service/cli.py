"""Command-line client for the service.

Every subcommand maps to exactly one HTTP endpoint, so the CLI never
has behaviour of its own: what the API returns is what gets printed.
`--json` emits the raw response document; the default is a human table.

Exit codes: 0 success, 1 operational failure (printed on stderr),
2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import getpass
import json
import os
import sys

import httpx

DEFAULT_URL = "http://127.0.0.1:8765"


class CliError(Exception):
    pass


def _default_factory(base_url: str):
    return httpx.Client(base_url=base_url, timeout=30.0)


def _request(client, method: str, path: str, token: str | None, *,
             params: dict | None = None, body: dict | None = None):
    headers = {"authorization": f"Bearer {token}"} if token else {}
    try:
        response = client.request(method, path, params=params, json=body,
                                  headers=headers)
    except httpx.HTTPError as exc:
        raise CliError(f"cannot reach service: {exc}") from None
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise CliError(f"{response.status_code}: {detail}")
    return response


def _json_body(response) -> object:
    if not response.content:
        return None
    return response.json()


def _load_doc(path: str) -> dict:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise CliError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CliError("expected a JSON object")
    return doc


def _cell_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def _print_human(data, out) -> None:
    if data is None:
        return
    if isinstance(data, list):
        if not data:
            out.write("(none)\n")
            return
        if all(isinstance(row, dict) for row in data):
            columns: list[str] = []
            for row in data:
                for key in row:
                    if key not in columns:
                        columns.append(key)
            cells = [[_cell_text(row.get(c)) for c in columns] for row in data]
            widths = [max(len(c), *(len(r[i]) for r in cells))
                      for i, c in enumerate(columns)]
            out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
            for row in cells:
                out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")
            return
        for item in data:
            out.write(f"{_cell_text(item)}\n")
        return
    if isinstance(data, dict):
        for key, value in data.items():
            out.write(f"{key}: {_cell_text(value)}\n")
        return
    out.write(f"{_cell_text(data)}\n")


def _emit(args, data, out) -> None:
    if args.json:
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        _print_human(data, out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tagtrace")
    parser.add_argument("--url", default=os.environ.get("TAGTRACE_URL", DEFAULT_URL),
                        help="service base URL")
    parser.add_argument("--token", default=os.environ.get("TAGTRACE_TOKEN"),
                        help="session token (or set TAGTRACE_TOKEN)")
    parser.add_argument("--json", action="store_true",
                        help="print raw JSON responses")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("login", help="open a session, print the token")
    p.add_argument("username")
    p.add_argument("--password", help="prompted for when omitted")

    sub.add_parser("logout", help="close the current session")
    sub.add_parser("health", help="service status summary")
    sub.add_parser("poll", help="collect buffered events from all stations")

    p = sub.add_parser("template", help="tag data templates")
    tsub = p.add_subparsers(dest="action", required=True)
    q = tsub.add_parser("define")
    q.add_argument("file", help="JSON template document, - for stdin")
    tsub.add_parser("list")
    q = tsub.add_parser("show")
    q.add_argument("template_id", type=int)
    q.add_argument("version", type=int)
    q = tsub.add_parser("delete")
    q.add_argument("template_id", type=int)
    q.add_argument("version", type=int)

    p = sub.add_parser("tag", help="write and read transponders")
    tsub = p.add_subparsers(dest="action", required=True)
    q = tsub.add_parser("write")
    q.add_argument("--station", type=int, required=True)
    q.add_argument("--uid", required=True)
    q.add_argument("--template", type=int, required=True, dest="template_id")
    q.add_argument("--ver", type=int, required=True, dest="version")
    q.add_argument("--values", required=True, help="JSON array of field values")
    q = tsub.add_parser("read")
    q.add_argument("--station", type=int, required=True)
    q.add_argument("--uid", required=True)

    p = sub.add_parser("station", help="reader station roster")
    tsub = p.add_subparsers(dest="action", required=True)
    tsub.add_parser("list")
    q = tsub.add_parser("set")
    q.add_argument("addr", type=int)
    q.add_argument("--name")
    q.add_argument("--new-addr", type=int, dest="new_addr")
    q.add_argument("--baud-class", type=int, dest="baud_class")
    q.add_argument("--password", default="00000000", help="8 hex digits")
    q.add_argument("--new-password", dest="new_password", help="8 hex digits")

    p = sub.add_parser("inventory", help="run anti-collision at one station")
    p.add_argument("addr", type=int)

    p = sub.add_parser("events", help="query the event journal")
    p.add_argument("--station", type=int)
    p.add_argument("--kind")
    p.add_argument("--uid")
    p.add_argument("--since-us", type=int, dest="since_us")
    p.add_argument("--until-us", type=int, dest="until_us")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--limit", type=int, default=100)
    p.add_argument("--desc", action="store_true", help="newest first")

    p = sub.add_parser("alarm", help="alarm rules")
    tsub = p.add_subparsers(dest="action", required=True)
    tsub.add_parser("list")
    q = tsub.add_parser("set")
    q.add_argument("file", help="JSON rule document, - for stdin")
    q = tsub.add_parser("delete")
    q.add_argument("name")

    p = sub.add_parser("report", help="report patterns and rendering")
    tsub = p.add_subparsers(dest="action", required=True)
    tsub.add_parser("list")
    q = tsub.add_parser("set")
    q.add_argument("file", help="JSON pattern document, - for stdin")
    q = tsub.add_parser("delete")
    q.add_argument("name")
    q = tsub.add_parser("render")
    q.add_argument("name")
    q.add_argument("--out", help="write the document here instead of stdout")

    p = sub.add_parser("sim", help="drive the simulated tag world")
    tsub = p.add_subparsers(dest="action", required=True)
    q = tsub.add_parser("place")
    q.add_argument("--uid", required=True)
    q.add_argument("--station", type=int, required=True)
    q.add_argument("--position", type=float, required=True, help="cm from antenna")
    q = tsub.add_parser("move")
    q.add_argument("--uid", required=True)
    q.add_argument("--position", type=float, required=True)
    q.add_argument("--station", type=int, help="relocate to this station first")
    q = tsub.add_parser("advance")
    q.add_argument("seconds", type=float)

    p = sub.add_parser("world", help="simulation world file")
    tsub = p.add_subparsers(dest="action", required=True)
    tsub.add_parser("show")
    q = tsub.add_parser("load")
    q.add_argument("file")

    p = sub.add_parser("device", help="registered handheld devices")
    tsub = p.add_subparsers(dest="action", required=True)
    tsub.add_parser("list")

    p = sub.add_parser("sync", help="differential synchronization")
    tsub = p.add_subparsers(dest="action", required=True)
    q = tsub.add_parser("run")
    q.add_argument("device")
    q.add_argument("--tables", help="comma-separated table subset")
    q = tsub.add_parser("manifest")
    q.add_argument("device")

    p = sub.add_parser("user", help="user accounts")
    tsub = p.add_subparsers(dest="action", required=True)
    tsub.add_parser("list")
    q = tsub.add_parser("set")
    q.add_argument("username")
    q.add_argument("--password")
    q.add_argument("--role", choices=["VIEWER", "OPERATOR", "ADMIN"])
    group = q.add_mutually_exclusive_group()
    group.add_argument("--enable", action="store_true")
    group.add_argument("--disable", action="store_true")
    q = tsub.add_parser("delete")
    q.add_argument("username")

    p = sub.add_parser("backup", help="write an encrypted store snapshot")
    p.add_argument("path")
    p.add_argument("--passphrase", required=True)

    p = sub.add_parser("restore", help="replace the store from a snapshot")
    p.add_argument("path")
    p.add_argument("--passphrase", required=True)

    p = sub.add_parser("serve", help="run the service in the foreground")
    p.add_argument("--config", required=True)

    return parser


def _run_serve(args, err) -> int:
    import uvicorn

    from tagtrace.service.api import create_app
    from tagtrace.service.config import ConfigError, load_config
    from tagtrace.service.core import AppCore

    try:
        cfg = load_config(args.config)
        core = AppCore.from_config(cfg)
    except (ConfigError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    app = create_app(core, frontend_dir=cfg.console_dir or None)
    try:
        uvicorn.run(app, host=cfg.listen_host, port=cfg.listen_port,
                    log_level="warning")
    finally:
        core.close()
    return 0


def _dispatch(args, client, out) -> None:
    token = args.token
    cmd = args.command
    action = getattr(args, "action", None)

    if cmd == "login":
        password = args.password
        if password is None:
            password = getpass.getpass("password: ")
        doc = _json_body(_request(client, "POST", "/api/login", None,
                                  body={"username": args.username,
                                        "password": password}))
        if args.json:
            _emit(args, doc, out)
        else:
            out.write(f"{doc['token']}\n")
        return
    if cmd == "logout":
        _request(client, "POST", "/api/logout", token)
        _emit(args, {"ok": True}, out)
        return
    if cmd == "health":
        _emit(args, _json_body(_request(client, "GET", "/api/health", token)), out)
        return
    if cmd == "poll":
        _emit(args, _json_body(_request(client, "POST", "/api/poll", token)), out)
        return

    if cmd == "template":
        if action == "define":
            doc = _load_doc(args.file)
            _emit(args, _json_body(_request(client, "POST", "/api/templates",
                                            token, body=doc)), out)
        elif action == "list":
            _emit(args, _json_body(_request(client, "GET", "/api/templates",
                                            token)), out)
        elif action == "show":
            path = f"/api/templates/{args.template_id}/{args.version}"
            _emit(args, _json_body(_request(client, "GET", path, token)), out)
        else:
            path = f"/api/templates/{args.template_id}/{args.version}"
            _emit(args, _json_body(_request(client, "DELETE", path, token)), out)
        return

    if cmd == "tag":
        if action == "write":
            try:
                values = json.loads(args.values)
            except ValueError as exc:
                raise CliError(f"--values is not valid JSON: {exc}") from None
            if not isinstance(values, list):
                raise CliError("--values must be a JSON array")
            body = {"station": args.station, "uid": args.uid,
                    "template_id": args.template_id, "version": args.version,
                    "values": values}
            _emit(args, _json_body(_request(client, "POST", "/api/tags/write",
                                            token, body=body)), out)
        else:
            body = {"station": args.station, "uid": args.uid}
            _emit(args, _json_body(_request(client, "POST", "/api/tags/read",
                                            token, body=body)), out)
        return

    if cmd == "station":
        if action == "list":
            _emit(args, _json_body(_request(client, "GET", "/api/stations",
                                            token)), out)
        else:
            body = {"password": args.password}
            if args.name is not None:
                body["name"] = args.name
            if args.new_addr is not None:
                body["new_addr"] = args.new_addr
            if args.baud_class is not None:
                body["baud_class"] = args.baud_class
            if args.new_password is not None:
                body["new_password"] = args.new_password
            _emit(args, _json_body(_request(client, "POST",
                                            f"/api/stations/{args.addr}",
                                            token, body=body)), out)
        return

    if cmd == "inventory":
        _emit(args, _json_body(_request(client, "POST",
                                        f"/api/stations/{args.addr}/inventory",
                                        token)), out)
        return

    if cmd == "events":
        params: dict = {"offset": args.offset, "limit": args.limit}
        if args.station is not None:
            params["station"] = args.station
        if args.kind is not None:
            params["kind"] = args.kind
        if args.uid is not None:
            params["uid"] = args.uid
        if args.since_us is not None:
            params["since_us"] = args.since_us
        if args.until_us is not None:
            params["until_us"] = args.until_us
        if args.desc:
            params["order"] = "desc"
        doc = _json_body(_request(client, "GET", "/api/events", token,
                                  params=params))
        if args.json:
            _emit(args, doc, out)
        else:
            _print_human(doc["events"], out)
            out.write(f"total: {doc['total']}\n")
        return

    if cmd == "alarm":
        if action == "list":
            _emit(args, _json_body(_request(client, "GET", "/api/alarm-rules",
                                            token)), out)
        elif action == "set":
            doc = _load_doc(args.file)
            _emit(args, _json_body(_request(client, "POST", "/api/alarm-rules",
                                            token, body=doc)), out)
        else:
            _emit(args, _json_body(_request(client, "DELETE",
                                            f"/api/alarm-rules/{args.name}",
                                            token)), out)
        return

    if cmd == "report":
        if action == "list":
            _emit(args, _json_body(_request(client, "GET", "/api/report-patterns",
                                            token)), out)
        elif action == "set":
            doc = _load_doc(args.file)
            _emit(args, _json_body(_request(client, "POST", "/api/report-patterns",
                                            token, body=doc)), out)
        elif action == "delete":
            _emit(args, _json_body(_request(client, "DELETE",
                                            f"/api/report-patterns/{args.name}",
                                            token)), out)
        else:
            response = _request(client, "GET",
                                f"/api/report-patterns/{args.name}/render", token)
            if args.out:
                with open(args.out, "wb") as fh:
                    fh.write(response.content)
            else:
                out.write(response.content.decode("utf-8"))
        return

    if cmd == "sim":
        if action == "place":
            body = {"uid": args.uid, "station": args.station,
                    "position_cm": args.position}
            _emit(args, _json_body(_request(client, "POST", "/api/sim/place",
                                            token, body=body)), out)
        elif action == "move":
            body = {"uid": args.uid, "position_cm": args.position}
            if args.station is not None:
                body["station"] = args.station
            _emit(args, _json_body(_request(client, "POST", "/api/sim/move",
                                            token, body=body)), out)
        else:
            _emit(args, _json_body(_request(client, "POST", "/api/sim/advance",
                                            token,
                                            body={"seconds": args.seconds})), out)
        return

    if cmd == "world":
        if action == "show":
            doc = _json_body(_request(client, "GET", "/api/sim/world", token))
            if args.json:
                _emit(args, doc, out)
            else:
                out.write(doc["text"])
        else:
            text = open(args.file, encoding="utf-8").read()
            _emit(args, _json_body(_request(client, "POST", "/api/sim/world",
                                            token, body={"text": text})), out)
        return

    if cmd == "device":
        _emit(args, _json_body(_request(client, "GET", "/api/devices", token)), out)
        return

    if cmd == "sync":
        if action == "run":
            body = {}
            if args.tables:
                body["tables"] = [t.strip() for t in args.tables.split(",")
                                  if t.strip()]
            _emit(args, _json_body(_request(client, "POST",
                                            f"/api/sync/{args.device}",
                                            token, body=body)), out)
        else:
            _emit(args, _json_body(_request(client, "GET",
                                            f"/api/sync/{args.device}/manifest",
                                            token)), out)
        return

    if cmd == "user":
        if action == "list":
            _emit(args, _json_body(_request(client, "GET", "/api/users", token)),
                  out)
        elif action == "set":
            body: dict = {"username": args.username}
            if args.password is not None:
                body["password"] = args.password
            if args.role is not None:
                body["role"] = args.role
            if args.enable:
                body["enabled"] = True
            if args.disable:
                body["enabled"] = False
            _emit(args, _json_body(_request(client, "POST", "/api/users", token,
                                            body=body)), out)
        else:
            _emit(args, _json_body(_request(client, "DELETE",
                                            f"/api/users/{args.username}",
                                            token)), out)
        return

    if cmd == "backup":
        body = {"path": args.path, "passphrase": args.passphrase}
        _emit(args, _json_body(_request(client, "POST", "/api/backup", token,
                                        body=body)), out)
        return
    if cmd == "restore":
        body = {"path": args.path, "passphrase": args.passphrase}
        _emit(args, _json_body(_request(client, "POST", "/api/restore", token,
                                        body=body)), out)
        return

    raise CliError(f"unhandled command {cmd!r}")


def main(argv=None, *, client_factory=None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "serve":
        return _run_serve(args, err)

    factory = client_factory or _default_factory
    client = factory(args.url)
    try:
        _dispatch(args, client, out)
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return 1
    finally:
        client.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
