"""Session service over HTTP.

One process serves one constellation (CONSTELLATION_DIR or an explicit
directory).  Clients open sessions, send query-language statements one
at a time, and read tables back as structured documents.  A session is
its op log: undo drops the last statement and replays the rest from
scratch, so state is always reproducible from the log.

Endpoints are documented in docs/service_api.md.
"""

from __future__ import annotations

import os
import secrets

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .data import Dataset, load_directory
from .errors import (
    EvaluationError,
    NothingToUndo,
    OlapError,
    QueryError,
    ServiceNotReady,
    UnknownSession,
)
from .grid import grid_to_document, materialize, render_text
from .query import Workspace, line_col
from .schema import Constellation
from .table import MultidimensionalTable, unit_label


def schema_document(c: Constellation) -> dict:
    """The constellation as a graph of facts, dimensions and hierarchy paths."""
    return {
        "constellation": c.name,
        "facts": [
            {
                "name": f.name,
                "measures": [{"name": m.name, "kind": m.value_kind} for m in f.measures],
                "dimensions": list(c.star[f.name]),
            }
            for f in c.facts
        ],
        "dimensions": [
            {
                "name": d.name,
                "attributes": [{"name": a.name, "kind": a.value_kind} for a in d.attributes],
                "hierarchies": [
                    {
                        "name": h.name,
                        "parameters": list(h.parameters),
                        "weak": {p: list(w) for p, w in h.weak.items()},
                    }
                    for h in d.hierarchies
                ],
            }
            for d in c.dimensions
        ],
    }


def _axis_summary(tm: MultidimensionalTable, which: str) -> dict:
    axis = tm.line if which == "line" else tm.column
    return {
        "dimension": axis.dimension,
        "hierarchy": axis.hierarchy,
        "displayed": [unit_label(u) for u in axis.displayed],
    }


class _Session:
    def __init__(self, ds: Dataset):
        self.id = secrets.token_urlsafe(8)
        self.ws = Workspace(ds)
        self.ops: list[str] = []

    def state(self) -> dict:
        return {
            "id": self.id,
            "ops": list(self.ops),
            "tables": {
                name: {
                    "fact": tm.subject.fact,
                    "measures": [t.label() for t in tm.subject.terms],
                    "line": _axis_summary(tm, "line"),
                    "column": _axis_summary(tm, "column"),
                }
                for name, tm in self.ws.env.items()
            },
        }


class OpRequest(BaseModel):
    text: str


def _table_payload(ds: Dataset, name: str, tm: MultidimensionalTable) -> dict:
    g = materialize(ds, tm)
    return {"name": name, "table": grid_to_document(g), "rendered": render_text(g)}


def _error_payload(exc: Exception, text: str | None = None) -> dict:
    doc: dict = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, QueryError) and exc.span is not None:
        doc["span"] = list(exc.span)
        if text is not None:
            doc["line"], doc["col"] = line_col(text, exc.span[0])
    if isinstance(exc, EvaluationError) and exc.cause is not None:
        doc["cause"] = type(exc.cause).__name__
    return doc


def create_app(directory: str | None = None, dataset: Dataset | None = None) -> FastAPI:
    """Build the app; the dataset comes from `dataset`, `directory`, or
    the CONSTELLATION_DIR environment variable, in that order."""
    if dataset is None:
        directory = directory or os.environ.get("CONSTELLATION_DIR")
        if directory:
            dataset = load_directory(directory)

    app = FastAPI(title="startab", version="0.1.0")
    sessions: dict[str, _Session] = {}

    def ready() -> Dataset:
        if dataset is None:
            raise ServiceNotReady("no constellation loaded; set CONSTELLATION_DIR")
        return dataset

    def session(session_id: str) -> _Session:
        try:
            return sessions[session_id]
        except KeyError:
            raise UnknownSession(f"no session {session_id!r}") from None

    @app.exception_handler(ServiceNotReady)
    async def _not_ready(request, exc):
        return JSONResponse(status_code=503, content={"error": _error_payload(exc)})

    @app.exception_handler(UnknownSession)
    async def _no_session(request, exc):
        return JSONResponse(status_code=404, content={"error": _error_payload(exc)})

    @app.exception_handler(NothingToUndo)
    async def _no_undo(request, exc):
        return JSONResponse(status_code=409, content={"error": _error_payload(exc)})

    @app.get("/schema")
    def get_schema():
        return schema_document(ready().constellation)

    @app.post("/sessions", status_code=201)
    def create_session():
        s = _Session(ready())
        sessions[s.id] = s
        return {"id": s.id}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session(session_id).state()

    @app.post("/sessions/{session_id}/ops")
    def run_op(session_id: str, body: OpRequest):
        s = session(session_id)
        ds = ready()
        try:
            name, tm = s.ws.run(body.text)
        except QueryError as exc:
            return JSONResponse(
                status_code=422, content={"error": _error_payload(exc, body.text)}
            )
        except OlapError as exc:
            return JSONResponse(status_code=422, content={"error": _error_payload(exc)})
        s.ops.append(body.text)
        return _table_payload(ds, name, tm)

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        s = session(session_id)
        ds = ready()
        if not s.ops:
            raise NothingToUndo("the session has no operations to undo")
        remaining = s.ops[:-1]
        ws = Workspace(ds)
        for text in remaining:
            ws.run(text)
        s.ws = ws
        s.ops = remaining
        return s.state()

    @app.get("/sessions/{session_id}/tm/{name}")
    def get_table(session_id: str, name: str):
        s = session(session_id)
        ds = ready()
        tm = s.ws.env.get(name)
        if tm is None:
            return JSONResponse(
                status_code=404,
                content={"error": {"type": "UnknownTable", "message": f"no table named {name!r}"}},
            )
        return _table_payload(ds, name, tm)

    return app


def serve(directory: str | None, host: str, port: int) -> None:
    import uvicorn

    app = create_app(directory)
    uvicorn.run(app, host=host, port=port, log_level="warning")
