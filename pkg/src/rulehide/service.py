"""HTTP session service around the hiding engine.

A session wraps one uploaded dataset. Previews run the engine on a copy and
report what would happen; commits replace the session's dataset and push the
previous one onto an undo stack. All engine state is immutable, so concurrent
reads are safe; mutation of a session is serialized by a per-session lock.
"""

from __future__ import annotations

import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .dataset import DataError, Dataset, parse_csv, write_csv
from .hiding import HOLD_BACK, HidingError, STRATEGIES, hide
from .induction import (
    DecisionTree,
    TreeError,
    extract_rules,
    find_leaf,
    format_path,
    format_rule,
    induce,
    parse_path,
    tree_to_dict,
)

MAX_SESSIONS = 64


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, location: str | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.location = location


@dataclass
class Session:
    dataset: Dataset
    history: list[Dataset] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    created: float = field(default_factory=time.time)
    last_used: float = field(default_factory=time.time)


class SessionStore:
    """In-memory LRU-capped session map."""

    def __init__(self, capacity: int = MAX_SESSIONS):
        self._capacity = capacity
        self._sessions: OrderedDict[str, Session] = OrderedDict()
        self._lock = threading.Lock()

    def create(self, dataset: Dataset) -> str:
        session_id = uuid.uuid4().hex
        with self._lock:
            while len(self._sessions) >= self._capacity:
                self._sessions.popitem(last=False)
            self._sessions[session_id] = Session(dataset)
        return session_id

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise ServiceError(
                    404, "unknown-session", f"no session {session_id!r}"
                )
            session.last_used = time.time()
            self._sessions.move_to_end(session_id)
            return session


class CreateSessionRequest(BaseModel):
    csv: str


class CreateSessionResponse(BaseModel):
    id: str


class HideRequest(BaseModel):
    leaves: list[str] = Field(min_length=1)
    strategy: str = HOLD_BACK
    seed: int = 0


class LeafInfo(BaseModel):
    path: str
    label: str
    p: int
    n: int
    rule: str


class TreeResponse(BaseModel):
    tree: dict
    leaves: list[LeafInfo]


class CommitResponse(BaseModel):
    report: dict
    tree: dict


class UndoResponse(BaseModel):
    tree: dict
    atRoot: bool


def _tree_payload(tree: DecisionTree) -> TreeResponse:
    leaves = []
    for rule in extract_rules(tree):
        ref = find_leaf(tree, rule.path)
        leaves.append(
            LeafInfo(
                path=format_path(tree.schema, rule.path),
                label=rule.label,
                p=ref.leaf.counts.p,
                n=ref.leaf.counts.n,
                rule=format_rule(tree.schema, rule),
            )
        )
    return TreeResponse(tree=tree_to_dict(tree), leaves=leaves)


def _run_hide(session: Session, request: HideRequest):
    if request.strategy not in STRATEGIES:
        raise ServiceError(
            422, "unknown-strategy", f"strategy must be one of {STRATEGIES}"
        )
    dataset = session.dataset
    tree = induce(dataset)
    paths = []
    for leaf in request.leaves:
        try:
            path = parse_path(dataset.schema, leaf)
            find_leaf(tree, path)
        except (TreeError, DataError) as exc:
            raise ServiceError(
                422, "unresolvable-path", str(exc), location=leaf
            ) from None
        paths.append(path)
    try:
        return hide(dataset, paths, request.strategy, request.seed)
    except (TreeError, DataError, HidingError) as exc:
        raise ServiceError(422, "hiding-refused", str(exc)) from None


def create_app() -> FastAPI:
    app = FastAPI(title="rulehide", version="0.1.0")
    store = SessionStore()

    @app.exception_handler(ServiceError)
    async def service_error_handler(_request: Request, exc: ServiceError):
        body = {"code": exc.code, "message": exc.message}
        if exc.location is not None:
            body["location"] = exc.location
        return JSONResponse(status_code=exc.status, content=body)

    @app.post("/sessions", response_model=CreateSessionResponse)
    def create_session(request: CreateSessionRequest):
        try:
            dataset = parse_csv(request.csv)
        except DataError as exc:
            raise ServiceError(400, "parse-error", str(exc)) from None
        try:
            induce(dataset)
        except TreeError as exc:
            raise ServiceError(400, "parse-error", str(exc)) from None
        return CreateSessionResponse(id=store.create(dataset))

    @app.get("/sessions/{session_id}/tree", response_model=TreeResponse)
    def get_tree(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return _tree_payload(induce(session.dataset))

    @app.post("/sessions/{session_id}/preview")
    def preview(session_id: str, request: HideRequest):
        session = store.get(session_id)
        with session.lock:
            _, report = _run_hide(session, request)
            return report.to_json_dict(session.dataset.schema)

    @app.post("/sessions/{session_id}/commit", response_model=CommitResponse)
    def commit(session_id: str, request: HideRequest):
        session = store.get(session_id)
        with session.lock:
            sanitized, report = _run_hide(session, request)
            session.history.append(session.dataset)
            session.dataset = sanitized
            return CommitResponse(
                report=report.to_json_dict(sanitized.schema),
                tree=tree_to_dict(induce(sanitized)),
            )

    @app.post("/sessions/{session_id}/undo", response_model=UndoResponse)
    def undo(session_id: str):
        session = store.get(session_id)
        with session.lock:
            if session.history:
                session.dataset = session.history.pop()
            return UndoResponse(
                tree=tree_to_dict(induce(session.dataset)),
                atRoot=not session.history,
            )

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return PlainTextResponse(
                write_csv(session.dataset), media_type="text/csv"
            )

    return app


app = create_app()
