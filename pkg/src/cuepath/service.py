"""HTTP API for sessions: server-authoritative, one writer per session.

Responses never include the label or body of a random event that has not
been pocketed (wire opacity); on-table balls carry only their visible hint.
Round generation after a milestone runs off the request path: the shot
response returns status AwaitingRound and clients poll GET until the next
rack lands.
"""

from __future__ import annotations

import argparse
import datetime as dt
import math
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .career import MILESTONE_TARGET, SessionStatus
from .engine import GameEngine, RuntimeSession
from .errors import (
    CuepathError,
    GenerationError,
    IllegalStateError,
    NotFoundError,
    ShotWhileMovingError,
    TransportError,
    ValidationError,
)
from .events import CareerEvent, UserProfile
from .physics import BallState, Vec2
from .providers import make_provider
from .store import FileStore, MemoryStore, StorageBackend

FRAME_RATE_WIRE = 60.0  # downsampled from the integrator rate for payload size


class ProfileIn(BaseModel):
    intro: str = ""
    goal: str = ""
    start_date: Optional[dt.date] = None


class SessionCreateIn(BaseModel):
    profile: ProfileIn
    seed: Optional[int] = None
    provider: str = "template"


class DirectionIn(BaseModel):
    x: float
    y: float


class ShotIn(BaseModel):
    direction: DirectionIn
    drag_fraction: float = Field(gt=0.0, le=1.0)


class DecisionIn(BaseModel):
    accept: bool


class _Entry:
    """Registry slot: runtime session, its lock, and any background error."""

    def __init__(self, rt: RuntimeSession):
        self.rt = rt
        self.lock = threading.Lock()
        self.generation_error: Optional[str] = None


class SessionRegistry:
    def __init__(self, engine: GameEngine):
        self.engine = engine
        self._entries: dict[str, _Entry] = {}
        self._mu = threading.Lock()

    def add(self, rt: RuntimeSession) -> _Entry:
        with self._mu:
            entry = _Entry(rt)
            self._entries[rt.session.id] = entry
            return entry

    def get(self, session_id: str) -> _Entry:
        with self._mu:
            entry = self._entries.get(session_id)
            if entry is not None:
                return entry
        rt = self.engine.load(session_id)  # NotFoundError → 404
        with self._mu:
            return self._entries.setdefault(session_id, _Entry(rt))


def reveal_event(ev: CareerEvent) -> dict:
    """Full event payload; only ever sent for pocketed events."""
    return ev.to_dict()


def wire_snapshot(rt: RuntimeSession, generation_error: Optional[str] = None) -> dict:
    """Client-facing session view with hint-level opacity enforced."""
    session = rt.session
    balls = []
    for ball in rt.balls:
        if ball.state is not BallState.ON_TABLE:
            continue
        if ball.kind.value == "Cue":
            hint = ""
        else:
            ev = session.event(ball.event_id)
            hint = ev.title if ev.category.value == "Milestone" else ev.hint
        balls.append({
            "id": ball.id,
            "kind": ball.kind.value,
            "x": ball.position.x,
            "y": ball.position.y,
            "state": ball.state.value,
            "hint": hint,
        })
    pending = session.pending_decision
    return {
        "session_id": session.id,
        "status": session.status.value,
        "completion_reason": (
            session.completion_reason.value if session.completion_reason else None
        ),
        "day_elapsed": session.day_elapsed,
        "days_remaining": session.days_remaining,
        "day_budget": 730,
        "milestones_achieved": session.milestones_achieved,
        "milestone_target": MILESTONE_TARGET,
        "current_round": session.current_round,
        "accepted_changes": [[a, b] for a, b in session.accepted_changes],
        "balls": balls,
        "timeline": [
            {"day": day, "event": reveal_event(session.event(eid))}
            for eid, day in session.timeline
        ],
        "pending_decision": reveal_event(session.event(pending)) if pending else None,
        "report_available": rt.report is not None,
        "round_generation_error": generation_error,
    }


def table_payload(engine: GameEngine) -> dict:
    t = engine.table
    return {
        "width": t.width,
        "height": t.height,
        "ball_radius": t.ball_radius,
        "pocket_radius": t.pocket_radius,
        "pockets": [{"x": p.x, "y": p.y} for p in t.pocket_centers],
        "max_days_per_shot": engine.day_rule.max_days_per_shot,
        "min_days_per_shot": engine.day_rule.min_days_per_shot,
    }


def _http_error(exc: CuepathError) -> HTTPException:
    if isinstance(exc, NotFoundError):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, (GenerationError, TransportError)):
        return HTTPException(status_code=502, detail=str(exc))
    if isinstance(exc, (IllegalStateError, ShotWhileMovingError)):
        return HTTPException(status_code=409, detail=str(exc))
    if isinstance(exc, ValidationError):
        return HTTPException(status_code=400, detail=str(exc))
    return HTTPException(status_code=500, detail=str(exc))


def create_app(
    backend: Optional[StorageBackend] = None,
    *,
    clock=None,
    frontend_dir: Optional[str] = None,
) -> FastAPI:
    engine = GameEngine(backend or MemoryStore(), clock=clock or _wall_clock)
    registry = SessionRegistry(engine)
    app = FastAPI(title="cuepath", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.engine = engine
    app.state.registry = registry

    def spawn_round_generation(entry: _Entry) -> None:
        def work():
            with entry.lock:
                if entry.rt.session.status is not SessionStatus.AWAITING_ROUND:
                    return
                try:
                    engine.advance_round(entry.rt)
                    entry.generation_error = None
                except CuepathError as exc:
                    entry.generation_error = str(exc)

        threading.Thread(target=work, daemon=True).start()

    @app.get("/table")
    def get_table():
        return table_payload(engine)

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreateIn):
        try:
            profile = UserProfile(
                intro=body.profile.intro,
                goal=body.profile.goal,
                start_date=body.profile.start_date or dt.date.today(),
            )
            seed = body.seed if body.seed is not None else _random_seed()
            provider = make_provider(body.provider, seed)
            rt = engine.create_session(profile, seed, provider)
        except CuepathError as exc:
            raise _http_error(exc)
        entry = registry.add(rt)
        return wire_snapshot(entry.rt)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            entry = registry.get(session_id)
        except CuepathError as exc:
            raise _http_error(exc)
        with entry.lock:
            return wire_snapshot(entry.rt, entry.generation_error)

    @app.post("/sessions/{session_id}/shots")
    def take_shot(session_id: str, body: ShotIn):
        try:
            entry = registry.get(session_id)
        except CuepathError as exc:
            raise _http_error(exc)
        direction = _unit_direction(body.direction.x, body.direction.y)
        with entry.lock:
            try:
                result = engine.take_shot(entry.rt, direction, body.drag_fraction)
            except CuepathError as exc:
                raise _http_error(exc)
            response = {
                "days_charged": result.days_charged,
                "frames": result.trace.downsampled(
                    FRAME_RATE_WIRE, engine.table.fixed_dt
                ).to_dict(),
                "pocketed": [reveal_event(ev) for ev in result.pocketed],
                "session": wire_snapshot(entry.rt),
            }
            needs_round = entry.rt.session.status is SessionStatus.AWAITING_ROUND
        if needs_round:
            spawn_round_generation(entry)
        return response

    @app.post("/sessions/{session_id}/decision")
    def resolve_decision(session_id: str, body: DecisionIn):
        try:
            entry = registry.get(session_id)
        except CuepathError as exc:
            raise _http_error(exc)
        with entry.lock:
            try:
                engine.resolve_decision(entry.rt, body.accept)
            except CuepathError as exc:
                raise _http_error(exc)
            snapshot = wire_snapshot(entry.rt)
            needs_round = entry.rt.session.status is SessionStatus.AWAITING_ROUND
        if needs_round:
            spawn_round_generation(entry)
        return snapshot

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        try:
            entry = registry.get(session_id)
        except CuepathError as exc:
            raise _http_error(exc)
        with entry.lock:
            try:
                return engine.get_report(entry.rt)
            except CuepathError as exc:
                raise _http_error(exc)

    if frontend_dir and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/app", StaticFiles(directory=frontend_dir, html=True), name="app")

    return app


def _wall_clock() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat()


def _random_seed() -> int:
    import secrets

    return secrets.randbits(48)


def _unit_direction(x: float, y: float) -> Vec2:
    if not (math.isfinite(x) and math.isfinite(y)):
        raise HTTPException(status_code=400, detail="direction components must be finite")
    norm = math.hypot(x, y)
    if norm == 0.0:
        raise HTTPException(status_code=400, detail="direction must be non-zero")
    if abs(norm - 1.0) <= 1e-9:  # already unit: keep bits exact for replays
        return Vec2(x, y)
    return Vec2(x / norm, y / norm)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="cuepath-serve", description="Run the cuepath HTTP API")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--store-dir", default=None, help="persist sessions here (default: memory)")
    parser.add_argument("--frontend-dir", default=None, help="serve a built web UI at /app")
    args = parser.parse_args(argv)

    import uvicorn

    backend = FileStore(args.store_dir) if args.store_dir else MemoryStore()
    app = create_app(backend, frontend_dir=args.frontend_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
