"""HTTP service exposing sessions over a small JSON API.

Endpoints mirror the CLI one-to-one and share its serialization, so a
given request body yields byte-identical output on either path.

    POST /sessions                {"kb_text": ..., "config"?: ...}
    GET  /sessions/{id}/analysis  ?method=spectral&k=3&sigma=...&seed=...
                                  ?method=threshold&tau=...
    POST /sessions/{id}/query     {"query": ..., "semantics": ..., "scope": ...}
    GET  /sessions/{id}/matrix.csv
    POST /sessions/{id}/save      {"path": ...}
    POST /sessions/load           {"path": ...}

Parse, validation and scope errors map to 400, unknown ids and missing
files to 404, and a non-terminating chase to 422.
"""
from __future__ import annotations

import threading
from typing import Any, Dict, Optional, Union

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .chase import RoundCapExceeded
from .parser import ParseError
from .session import (
    ClusteringSpec,
    Session,
    SessionConfig,
    SessionFormatError,
    analysis_document,
    answer_document,
    create_session,
    load_session,
    matrix_csv,
    save_session,
    summary_document,
    to_json,
)


class CreateSessionRequest(BaseModel):
    kb_text: str
    config: Optional[Dict[str, Any]] = None


class QueryRequest(BaseModel):
    query: str
    semantics: str
    scope: Union[str, Dict[str, Any]] = "all"


class PathRequest(BaseModel):
    path: str


class SessionStore:
    """In-memory id-to-session map; sessions are independent."""

    def __init__(self) -> None:
        self._sessions: Dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session


def _json(doc: dict) -> Response:
    return Response(content=to_json(doc), media_type="application/json")


def create_app() -> FastAPI:
    app = FastAPI(title="repairspace", version="1.0")
    store = SessionStore()
    app.state.store = store

    @app.exception_handler(ParseError)
    async def _parse_error(request: Request, exc: ParseError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"detail": str(exc), "line": exc.line, "column": exc.column},
        )

    @app.exception_handler(RoundCapExceeded)
    async def _round_cap(request: Request, exc: RoundCapExceeded) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _domain_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(FileNotFoundError)
    async def _missing_file(request: Request, exc: FileNotFoundError) -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.post("/sessions")
    def post_sessions(body: CreateSessionRequest) -> Response:
        session = create_session(body.kb_text, SessionConfig.from_dict(body.config))
        store.add(session)
        return _json(summary_document(session))

    @app.get("/sessions/{session_id}/analysis")
    def get_analysis(
        session_id: str,
        method: Optional[str] = None,
        k: Optional[int] = None,
        sigma: Optional[float] = None,
        seed: int = 0,
        tau: Optional[float] = None,
    ) -> Response:
        session = store.get(session_id)
        if method is None:
            if any(p is not None for p in (k, sigma, tau)):
                raise HTTPException(
                    status_code=400, detail="clustering parameters require a method"
                )
            spec = None
        elif method == "spectral":
            spec = ClusteringSpec(
                method="spectral",
                k=k if k is not None else min(3, len(session.repairs)),
                sigma=sigma,
                seed=seed,
            )
        else:
            spec = ClusteringSpec(method=method, tau=tau)
        return _json(analysis_document(session, spec))

    @app.post("/sessions/{session_id}/query")
    def post_query(session_id: str, body: QueryRequest) -> Response:
        session = store.get(session_id)
        return _json(answer_document(session, body.query, body.semantics, body.scope))

    @app.get("/sessions/{session_id}/matrix.csv")
    def get_matrix_csv(session_id: str) -> Response:
        session = store.get(session_id)
        return Response(content=matrix_csv(session), media_type="text/csv")

    @app.post("/sessions/{session_id}/save")
    def post_save(session_id: str, body: PathRequest) -> Response:
        session = store.get(session_id)
        save_session(session, body.path)
        return _json({"saved": body.path, "id": session.id})

    @app.post("/sessions/load")
    def post_load(body: PathRequest) -> Response:
        session = load_session(body.path)
        store.add(session)
        return _json(summary_document(session))

    return app


app = create_app()
