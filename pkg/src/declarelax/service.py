"""Local HTTP session API driving the relax-inspect loop.

Sessions are in-memory: each one holds the parsed net, the derived base
matrix, the current matrix, and the op history. All payloads use the same
structured-text formats as the file interfaces, so UI and CLI artifacts
are interchangeable.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import relaxation
from .checker import check_log
from .constraints import constraints_for_matrix, constraints_to_json
from .errors import (
    DeclarelaxError,
    EmptyHistory,
    MalformedDocument,
    PreconditionViolated,
    StateSpaceExceeded,
    UnknownActivity,
)
from .eventlog import Trace, parse_event_log
from .relations import RelationMatrix, derive_matrix
from .sqlgen import MODES, render_bundle
from .wfnet import DEFAULT_STATE_LIMIT, WorkflowNet, check_free_choice, check_soundness, parse_pnml


@dataclass
class Session:
    id: str
    net: WorkflowNet
    base_matrix: RelationMatrix
    current_matrix: RelationMatrix
    history: list[tuple[RelationMatrix, relaxation.MatrixDiff, relaxation.RelaxationOp]] = field(
        default_factory=list
    )
    log: list[Trace] | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def script(self) -> tuple[relaxation.RelaxationOp, ...]:
        return tuple(op for _, _, op in self.history)


def _error(status: int, code: str, message: str, detail: str | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _matrix_payload(matrix: RelationMatrix) -> dict:
    return {
        "activities": list(matrix.activities),
        "cells": [[kind.code for kind in row] for row in matrix.cells],
    }


def _diff_payload(diff: relaxation.MatrixDiff) -> list[dict]:
    return [
        {"row": e.row, "col": e.col, "old": e.old.code, "new": e.new.code} for e in diff
    ]


def create_app() -> FastAPI:
    app = FastAPI(title="declarelax service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session | None:
        with registry_lock:
            return sessions.get(session_id)

    @app.exception_handler(DeclarelaxError)
    async def _handle_package_error(request: Request, exc: DeclarelaxError):
        return _error(400, exc.code, str(exc))

    @app.post("/sessions")
    async def create_session(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "malformed_document", "request body must be JSON")
        if not isinstance(body, dict) or "pnml" not in body:
            return _error(400, "malformed_document", "body needs a 'pnml' field")

        state_limit = body.get("state_limit", DEFAULT_STATE_LIMIT)
        try:
            net = parse_pnml(body["pnml"])
        except DeclarelaxError as exc:
            return _error(400, exc.code, str(exc))

        if not check_free_choice(net):
            return _error(400, "not_free_choice", "net is not free-choice")
        try:
            verdict = check_soundness(net, state_limit=state_limit)
        except StateSpaceExceeded as exc:
            return _error(422, exc.code, str(exc))
        if not verdict.sound:
            witness = sorted(verdict.witness) if verdict.witness is not None else None
            return _error(
                422,
                "unsound_net",
                f"net is not sound: {verdict.reason}",
                detail=f"witness marking: {witness}" if witness is not None else None,
            )

        base = derive_matrix(net, verdict.graph)
        session = Session(uuid.uuid4().hex, net, base, base)

        if "script" in body:
            try:
                script = tuple(relaxation.op_from_record(r) for r in body["script"])
                for op in script:
                    before = session.current_matrix
                    after, diff = relaxation.apply_op(before, op)
                    session.history.append((before, diff, op))
                    session.current_matrix = after
            except DeclarelaxError as exc:
                return _error(400, exc.code, f"cannot replay script: {exc}")

        with registry_lock:
            sessions[session.id] = session
        return {"id": session.id, **_matrix_payload(session.current_matrix)}

    @app.get("/sessions/{session_id}/matrix")
    async def get_matrix(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        return Response(session.current_matrix.to_json(), media_type="application/json")

    @app.post("/sessions/{session_id}/ops")
    async def post_op(session_id: str, request: Request):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        try:
            record = await request.json()
        except Exception:
            return _error(400, "malformed_document", "request body must be JSON")
        try:
            op = relaxation.op_from_record(record)
        except (MalformedDocument, PreconditionViolated) as exc:
            status = 409 if isinstance(exc, PreconditionViolated) else 400
            return _error(status, exc.code, str(exc))

        with session.lock:
            before = session.current_matrix
            try:
                after, diff = relaxation.apply_op(before, op)
            except PreconditionViolated as exc:
                return _error(409, exc.code, str(exc))
            except UnknownActivity as exc:
                return _error(400, exc.code, str(exc))
            session.history.append((before, diff, op))
            session.current_matrix = after
        return {"matrix": _matrix_payload(after), "diff": _diff_payload(diff)}

    @app.post("/sessions/{session_id}/undo")
    async def post_undo(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        with session.lock:
            try:
                restored = relaxation.undo([(m, d) for m, d, _ in session.history])
            except EmptyHistory as exc:
                return _error(409, exc.code, str(exc))
            session.history.pop()
            session.current_matrix = restored
        return {"matrix": _matrix_payload(restored)}

    @app.get("/sessions/{session_id}/script")
    async def get_script(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        return Response(
            relaxation.script_to_json(session.script), media_type="application/json"
        )

    @app.get("/sessions/{session_id}/constraints")
    async def get_constraints(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        constraints = constraints_for_matrix(session.current_matrix)
        return Response(constraints_to_json(constraints), media_type="application/json")

    @app.get("/sessions/{session_id}/sql")
    async def get_sql(session_id: str, mode: str = "paper"):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        if mode not in MODES:
            return _error(400, "bad_mode", f"mode must be one of {MODES}")
        constraints = constraints_for_matrix(session.current_matrix)
        bundle = render_bundle(constraints, mode)
        return Response(bundle.to_sql(), media_type="text/plain; charset=utf-8")

    @app.post("/sessions/{session_id}/log")
    async def post_log(session_id: str, request: Request):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        document = (await request.body()).decode("utf-8")
        try:
            traces = parse_event_log(document)
        except DeclarelaxError as exc:
            return _error(400, exc.code, str(exc))
        with session.lock:
            session.log = traces
        return {"traces": len(traces)}

    @app.post("/sessions/{session_id}/check")
    async def post_check(session_id: str, request: Request):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id!r}")
        document = (await request.body()).decode("utf-8")
        if document.strip():
            try:
                traces = parse_event_log(document)
            except DeclarelaxError as exc:
                return _error(400, exc.code, str(exc))
        else:
            traces = session.log
            if traces is None:
                return _error(400, "no_log", "upload a log first or send one in the body")
        constraints = constraints_for_matrix(session.current_matrix)
        report = check_log(traces, constraints)
        return Response(report.to_json(), media_type="application/json")

    ui_dir = os.environ.get("DECLARELAX_UI")
    if ui_dir and os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


app = create_app()
