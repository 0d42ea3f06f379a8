"""HTTP face of the service. Thin by design: every endpoint parses the
request, calls one AppCore method with the session's role, and returns
the result as JSON. Domain exceptions map to status codes in one table
so the CLI and console see consistent errors everywhere.
"""

from __future__ import annotations

import os

from fastapi import Body, Depends, FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from tagtrace.codec import CodecError, TemplateError, UnknownTemplate
from tagtrace.net import (
    CommandFailed,
    DuplicateAddress,
    NetError,
    RosterFull,
    StationTimeout,
)
from tagtrace.net.commands import ST_AUTH_FAILED, ST_TAG_NOT_FOUND, status_name
from tagtrace.rf import DuplicateUid, RfError, TagNotFound, WorldFileError
from tagtrace.service.core import AppCore
from tagtrace.store import (
    BadCredentials,
    Disabled,
    DuplicateKey,
    IntegrityFailure,
    InvalidQuery,
    NotFound,
    SchemaViolation,
    StoreError,
    Unauthorized,
    UnknownColumn,
    UnknownTable,
    UnsupportedVersion,
    WrongPassphrase,
)
from tagtrace.sync import ConversionLoss, DeviceUnreachable, NotConnected, SyncError

_STATUS_FOR = [
    ((BadCredentials, Disabled), 401),
    ((Unauthorized,), 403),
    ((NotFound, TagNotFound, UnknownTemplate), 404),
    ((DuplicateKey, DuplicateUid, DuplicateAddress, RosterFull), 409),
    ((StationTimeout, DeviceUnreachable), 504),
    ((WrongPassphrase,), 401),
    ((IntegrityFailure, UnsupportedVersion), 422),
    (
        (
            SchemaViolation,
            UnknownColumn,
            UnknownTable,
            InvalidQuery,
            TemplateError,
            CodecError,
            WorldFileError,
            ConversionLoss,
            NotConnected,
            ValueError,
        ),
        400,
    ),
    ((RfError, SyncError, StoreError, NetError), 400),
]


def _http_status(exc: Exception) -> int:
    if isinstance(exc, CommandFailed):
        if exc.status == ST_TAG_NOT_FOUND:
            return 404
        if exc.status == ST_AUTH_FAILED:
            return 403
        return 400
    for classes, status in _STATUS_FOR:
        if isinstance(exc, classes):
            return status
    return 500


def _field(body: dict, name: str, conv=None):
    # A missing or ill-typed request field is the caller's mistake, so it
    # must map to 400, not leak a KeyError/TypeError as a 500.
    if name not in body:
        raise ValueError(f"missing field {name}")
    value = body[name]
    if conv is None:
        return value
    try:
        return conv(value)
    except (TypeError, ValueError):
        raise ValueError(f"bad value for field {name}") from None


def _hex_password(text) -> bytes:
    try:
        return bytes.fromhex(text)
    except (TypeError, ValueError):
        raise ValueError("station password must be hex digits") from None


def create_app(core: AppCore, frontend_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="tagtrace", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(Exception)
    async def _domain_error(request: Request, exc: Exception):
        status = _http_status(exc)
        if status == 500:
            raise exc
        detail = str(exc)
        if isinstance(exc, CommandFailed):
            detail = f"station refused: {status_name(exc.status)}"
        return JSONResponse({"detail": detail}, status_code=status)

    def session(request: Request) -> dict:
        header = request.headers.get("authorization", "")
        token = header[7:] if header.lower().startswith("bearer ") else None
        try:
            return core.auth(token)
        except Unauthorized as exc:
            raise _AuthProblem(str(exc)) from None

    class _AuthProblem(Exception):
        def __init__(self, detail: str):
            self.detail = detail

    @app.exception_handler(_AuthProblem)
    async def _auth_problem(request: Request, exc: _AuthProblem):
        return JSONResponse({"detail": exc.detail}, status_code=401)

    # -- sessions ---------------------------------------------------------

    @app.post("/api/login")
    def login(body: dict = Body(...)):
        return core.login(body.get("username", ""), body.get("password", ""))

    @app.post("/api/logout")
    def logout(request: Request, sess: dict = Depends(session)):
        core.logout(sess["token"])
        return {"ok": True}

    @app.get("/api/health")
    def health():
        return core.health()

    # -- templates --------------------------------------------------------

    @app.get("/api/templates")
    def list_templates(sess: dict = Depends(session)):
        return core.list_templates(sess["role"])

    @app.post("/api/templates")
    def define_template(body: dict = Body(...), sess: dict = Depends(session)):
        return core.define_template(sess["role"], body)

    @app.get("/api/templates/{template_id}/{version}")
    def get_template(template_id: int, version: int, sess: dict = Depends(session)):
        return core.get_template(sess["role"], template_id, version)

    @app.delete("/api/templates/{template_id}/{version}")
    def delete_template(template_id: int, version: int, sess: dict = Depends(session)):
        core.delete_template(sess["role"], template_id, version)
        return {"ok": True}

    # -- tags ---------------------------------------------------------------

    @app.post("/api/tags/write")
    def write_tag(body: dict = Body(...), sess: dict = Depends(session)):
        return core.write_tag(
            sess["role"], _field(body, "station", int), _field(body, "uid"),
            _field(body, "template_id", int), _field(body, "version", int),
            _field(body, "values"),
        )

    @app.post("/api/tags/read")
    def read_tag(body: dict = Body(...), sess: dict = Depends(session)):
        return core.read_tag(
            sess["role"], _field(body, "station", int), _field(body, "uid"))

    @app.get("/api/transponders")
    def list_transponders(sess: dict = Depends(session)):
        return core.store.scan(sess["role"], "transponders")

    # -- stations --------------------------------------------------------------

    @app.get("/api/stations")
    def list_stations(sess: dict = Depends(session)):
        return core.list_stations(sess["role"])

    @app.post("/api/stations/{addr}")
    def configure_station(addr: int, body: dict = Body(...), sess: dict = Depends(session)):
        password = _hex_password(body.get("password", "00000000"))
        new_password = body.get("new_password")
        return core.configure_station(
            sess["role"], addr,
            password=password,
            name=body.get("name"),
            new_addr=body.get("new_addr"),
            baud_class=body.get("baud_class"),
            new_password=_hex_password(new_password) if new_password else None,
        )

    @app.post("/api/stations/{addr}/inventory")
    def inventory(addr: int, sess: dict = Depends(session)):
        return core.inventory(sess["role"], addr)

    # -- events -------------------------------------------------------------------

    @app.post("/api/poll")
    def poll(sess: dict = Depends(session)):
        return core.poll(sess["role"])

    @app.get("/api/events")
    def events(
        sess: dict = Depends(session),
        station: int | None = Query(default=None),
        kind: str | None = Query(default=None),
        uid: str | None = Query(default=None),
        since_us: int | None = Query(default=None),
        until_us: int | None = Query(default=None),
        offset: int = Query(default=0),
        limit: int = Query(default=100),
        order: str = Query(default="asc"),
    ):
        rows, total = core.query_journal(
            sess["role"], station=station, kind=kind, uid=uid,
            since_us=since_us, until_us=until_us, offset=offset, limit=limit,
            descending=(order == "desc"),
        )
        return {"events": rows, "total": total, "offset": offset, "limit": limit}

    # -- alarm rules -------------------------------------------------------------

    @app.get("/api/alarm-rules")
    def list_alarm_rules(sess: dict = Depends(session)):
        return core.list_alarm_rules(sess["role"])

    @app.post("/api/alarm-rules")
    def set_alarm_rule(body: dict = Body(...), sess: dict = Depends(session)):
        return core.set_alarm_rule(sess["role"], body)

    @app.delete("/api/alarm-rules/{name}")
    def delete_alarm_rule(name: str, sess: dict = Depends(session)):
        core.delete_alarm_rule(sess["role"], name)
        return {"ok": True}

    # -- report patterns ------------------------------------------------------------

    @app.get("/api/report-patterns")
    def list_report_patterns(sess: dict = Depends(session)):
        return core.list_report_patterns(sess["role"])

    @app.post("/api/report-patterns")
    def set_report_pattern(body: dict = Body(...), sess: dict = Depends(session)):
        return core.set_report_pattern(sess["role"], body)

    @app.delete("/api/report-patterns/{name}")
    def delete_report_pattern(name: str, sess: dict = Depends(session)):
        core.delete_report_pattern(sess["role"], name)
        return {"ok": True}

    @app.get("/api/report-patterns/{name}/render")
    def render_report(name: str, sess: dict = Depends(session)):
        document, fmt = core.render_report(sess["role"], name)
        media = "text/html" if fmt == "html" else "text/csv"
        return Response(content=document, media_type=f"{media}; charset=utf-8")

    # -- simulation ---------------------------------------------------------------------

    @app.post("/api/sim/place")
    def sim_place(body: dict = Body(...), sess: dict = Depends(session)):
        return core.sim_place_tag(
            sess["role"], _field(body, "uid"), _field(body, "station", int),
            _field(body, "position_cm", float),
        )

    @app.post("/api/sim/move")
    def sim_move(body: dict = Body(...), sess: dict = Depends(session)):
        station = body.get("station")
        return core.sim_move_tag(
            sess["role"], _field(body, "uid"), _field(body, "position_cm", float),
            station=int(station) if station is not None else None,
        )

    @app.get("/api/sim/world")
    def sim_world(sess: dict = Depends(session)):
        return {"text": core.sim_world_text(sess["role"])}

    @app.post("/api/sim/world")
    def sim_load_world(body: dict = Body(...), sess: dict = Depends(session)):
        return core.sim_load_world(sess["role"], _field(body, "text"))

    @app.post("/api/sim/advance")
    def sim_advance(body: dict = Body(...), sess: dict = Depends(session)):
        return core.sim_advance(sess["role"], _field(body, "seconds", float))

    # -- sync -----------------------------------------------------------------------------

    @app.get("/api/devices")
    def list_devices(sess: dict = Depends(session)):
        return core.list_devices(sess["role"])

    @app.post("/api/sync/{device_id}")
    def run_sync(device_id: str, body: dict = Body(default={}), sess: dict = Depends(session)):
        return core.run_sync(sess["role"], device_id, body.get("tables"))

    @app.get("/api/sync/{device_id}/manifest")
    def last_manifest(device_id: str, sess: dict = Depends(session)):
        return core.last_manifest(sess["role"], device_id)

    # -- users ------------------------------------------------------------------------------

    @app.get("/api/users")
    def list_users(sess: dict = Depends(session)):
        return core.list_users(sess["role"])

    @app.post("/api/users")
    def set_user(body: dict = Body(...), sess: dict = Depends(session)):
        return core.set_user(
            sess["role"], _field(body, "username"),
            password=body.get("password"),
            user_role=body.get("role"),
            enabled=body.get("enabled"),
        )

    @app.delete("/api/users/{username}")
    def delete_user(username: str, sess: dict = Depends(session)):
        core.delete_user(sess["role"], username)
        return {"ok": True}

    # -- backup -------------------------------------------------------------------------------

    @app.post("/api/backup")
    def backup(body: dict = Body(...), sess: dict = Depends(session)):
        return core.backup(
            sess["role"], _field(body, "path"), _field(body, "passphrase"))

    @app.post("/api/restore")
    def restore(body: dict = Body(...), sess: dict = Depends(session)):
        return core.restore(
            sess["role"], _field(body, "path"), _field(body, "passphrase"))

    if frontend_dir and os.path.isdir(frontend_dir):
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="console")

    return app
