"""Shared game orchestration: one code path for the HTTP service and the CLI.

Every transition journals first, then updates the snapshot, then returns,
so no state change is acknowledged before it is durable. Journal timestamps
default to a deterministic clock derived from the session's simulated date
(start_date + day_elapsed, seq as seconds) so that seeded runs produce
byte-identical journals; the service installs a wall clock instead.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import career, pipeline, report as report_mod, store
from .career import DayCostRule, Session, SessionStatus, drag_to_days
from .errors import IllegalStateError
from .events import CareerEvent, UserProfile
from .physics import (
    Ball,
    BallKind,
    BallState,
    FrameTrace,
    ShotInput,
    Table,
    Vec2,
    apply_shot,
    make_table,
    respot_cue,
    simulate_until_rest,
)
from .providers import Provider, make_provider
from .store import EntryKind, StorageBackend, build_snapshot, make_entry


@dataclass
class RuntimeSession:
    """A live session: state machine, table state, provider, journal cursor."""

    session: Session
    balls: list[Ball] = field(default_factory=list)
    report: Optional[dict] = None
    provider: Optional[Provider] = None
    provider_name: str = "template"
    next_seq: int = 0


@dataclass
class ShotResult:
    days_charged: int
    trace: FrameTrace
    pocketed: list[CareerEvent]
    runtime: RuntimeSession


class GameEngine:
    def __init__(
        self,
        backend: StorageBackend,
        *,
        table: Optional[Table] = None,
        day_rule: Optional[DayCostRule] = None,
        clock: Optional[Callable[[], str]] = None,
    ):
        self.backend = backend
        self.table = table or make_table()
        self.day_rule = day_rule or DayCostRule()
        self.clock = clock

    # -- journal helpers -----------------------------------------------------

    def _timestamp(self, rt: RuntimeSession) -> str:
        if self.clock is not None:
            return self.clock()
        base = dt.datetime.combine(
            rt.session.profile.start_date, dt.time(0, 0), tzinfo=dt.timezone.utc
        )
        stamp = base + dt.timedelta(days=rt.session.day_elapsed, seconds=rt.next_seq)
        return stamp.isoformat()

    def _append(self, rt: RuntimeSession, kind: EntryKind, payload: dict) -> None:
        entry = make_entry(rt.next_seq, kind, self._timestamp(rt), payload)
        self.backend.append(rt.session.id, entry)
        rt.next_seq += 1

    def _save(self, rt: RuntimeSession) -> None:
        snapshot = build_snapshot(rt.session, rt.balls, rt.report, rt.provider_name)
        self.backend.write_snapshot(rt.session.id, snapshot)

    # -- lifecycle -----------------------------------------------------------

    def create_session(
        self,
        profile: UserProfile,
        seed: int,
        provider: Provider,
        *,
        session_id: Optional[str] = None,
        advance: bool = True,
    ) -> RuntimeSession:
        """New session with round 1 generated and racked (when advance)."""
        session = career.new_session(profile, seed, session_id)
        rt = RuntimeSession(
            session=session, provider=provider, provider_name=provider.name
        )
        self.backend.create(session.id)
        self._append(rt, EntryKind.SESSION_CREATED, {
            "session_id": session.id,
            "profile": profile.to_dict(),
            "seed": seed,
            "provider": provider.name,
        })
        self._save(rt)
        if advance:
            self.advance_round(rt)
        return rt

    def advance_round(self, rt: RuntimeSession) -> None:
        """Generate and rack the session's next round."""
        if rt.session.status is not SessionStatus.AWAITING_ROUND:
            raise IllegalStateError(f"cannot advance round while {rt.session.status.value}")
        ctx = career.generation_context(rt.session)
        bundle = pipeline.generate_round(rt.provider, ctx)
        self._append(rt, EntryKind.ROUND_GENERATED, {"bundle": bundle.to_dict()})
        rt.balls = career.rack_round(rt.session, bundle, self.table)
        self._append(rt, EntryKind.ROUND_RACKED, {
            "round_index": bundle.round_index,
            "balls": [b.to_dict() for b in rt.balls],
        })
        self._save(rt)

    def take_shot(
        self,
        rt: RuntimeSession,
        direction: Vec2,
        drag_fraction: float,
        *,
        record_frames: bool = True,
    ) -> ShotResult:
        """Charge days, run the physics to rest, pocket events, journal."""
        if rt.session.status is not SessionStatus.ACTIVE:
            raise IllegalStateError(f"cannot shoot while {rt.session.status.value}")
        shot = ShotInput(direction=direction, drag_fraction=drag_fraction)
        days = drag_to_days(self.day_rule, drag_fraction, rt.session.days_remaining)

        launched = apply_shot(self.table, rt.balls, shot)
        rested, trace = simulate_until_rest(self.table, launched, record_frames=record_frames)
        by_id = {b.id: b for b in rested}
        cue = next(b for b in rested if b.kind is BallKind.CUE)
        if cue.state is BallState.POCKETED:
            rested = respot_cue(self.table, rested)

        pocketed_ids = [
            by_id[ball_id].event_id
            for ball_id, _pocket, _t in trace.pocket_events
            if by_id[ball_id].kind is not BallKind.CUE
        ]

        rt.balls = rested
        self._append(rt, EntryKind.SHOT_TAKEN, {
            "direction": {"x": direction.x, "y": direction.y},
            "drag_fraction": drag_fraction,
            "days_charged": days,
            "balls_after": [b.to_dict() for b in rested],
        })
        career.apply_shot_outcome(rt.session, days, pocketed_ids)
        self._append(rt, EntryKind.EVENTS_POCKETED, {"event_ids": pocketed_ids})
        if rt.session.status is SessionStatus.COMPLETED:
            self._append(rt, EntryKind.TERMINATED, {
                "reason": rt.session.completion_reason.value,
            })
        self._save(rt)
        pocketed = [rt.session.event(eid) for eid in pocketed_ids]
        return ShotResult(days_charged=days, trace=trace, pocketed=pocketed, runtime=rt)

    def resolve_decision(self, rt: RuntimeSession, accept: bool) -> CareerEvent:
        ev = career.resolve_decision(rt.session, accept)
        self._append(rt, EntryKind.DECISION_RESOLVED, {"event_id": ev.id, "accept": accept})
        self._save(rt)
        return ev

    def get_report(self, rt: RuntimeSession) -> dict:
        """Generate the journey report once; cached and journaled after."""
        if rt.report is not None:
            return rt.report
        journey = report_mod.generate_report(rt.provider, rt.session)
        rt.report = journey.to_dict()
        self._append(rt, EntryKind.REPORT_GENERATED, {"report": rt.report})
        self._save(rt)
        return rt.report

    def load(self, session_id: str) -> RuntimeSession:
        """Rehydrate a stored session (fold-verified against its snapshot)."""
        snapshot, journal = store.load(self.backend, session_id)
        session = Session.from_dict(snapshot["session"])
        provider_name = snapshot.get("provider") or "template"
        return RuntimeSession(
            session=session,
            balls=[Ball.from_dict(b) for b in snapshot["balls"]],
            report=snapshot.get("report"),
            provider=make_provider(provider_name, session.rng_seed),
            provider_name=provider_name,
            next_seq=len(journal),
        )
