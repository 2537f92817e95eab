"""Career session state machine: day accounting, round lifecycle, decisions.

Sessions move through AwaitingRound → Active → (AwaitingDecision) → back,
until six milestones are collected or the 730-day budget runs out. State
transitions mutate the session in place; one logical writer per session id
is assumed (the service serializes requests, the CLI is single-threaded).
"""

from __future__ import annotations

import datetime as dt
import math
import random
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import ConsistencyError, IllegalStateError, NotVisibleError, ValidationError
from .events import (
    CareerEvent,
    EventCategory,
    EventStatus,
    LabelVariant,
    RoundBundle,
    UserProfile,
)
from .physics import Ball, BallKind, BallState, Table, Vec2
from .prompts import GenerationContext

DAY_BUDGET = 730
MILESTONE_TARGET = 6


class SessionStatus(str, Enum):
    ACTIVE = "Active"
    AWAITING_DECISION = "AwaitingDecision"
    AWAITING_ROUND = "AwaitingRound"
    COMPLETED = "Completed"


class CompletionReason(str, Enum):
    SIX_MILESTONES = "SixMilestones"
    DAYS_EXHAUSTED = "DaysExhausted"


_KIND_FOR_CATEGORY = {
    EventCategory.MILESTONE: BallKind.MILESTONE,
    EventCategory.RANDOM: BallKind.RANDOM,
    EventCategory.SKILL: BallKind.SKILL,
}


@dataclass(frozen=True)
class DayCostRule:
    """Linear drag-to-days mapping, clamped to the remaining budget."""

    max_days_per_shot: int = 90
    min_days_per_shot: int = 1

    def __post_init__(self):
        if not (1 <= self.min_days_per_shot < self.max_days_per_shot <= DAY_BUDGET):
            raise ValidationError("day cost rule requires 1 <= min < max <= 730")


def drag_to_days(rule: DayCostRule, drag_fraction: float, days_remaining: int) -> int:
    """Days charged for a shot; always at least one, never past the budget."""
    if not (0.0 < drag_fraction <= 1.0):
        raise ValidationError("drag_fraction must lie in (0, 1]")
    if days_remaining < 1:
        raise ValidationError("no days remaining")
    days = math.ceil(drag_fraction * rule.max_days_per_shot)
    upper = min(rule.max_days_per_shot, days_remaining)
    return max(rule.min_days_per_shot, min(days, upper))


@dataclass
class Session:
    id: str
    profile: UserProfile
    rng_seed: int
    day_elapsed: int = 0
    milestones_achieved: int = 0
    current_round: int = 1
    rounds: list[RoundBundle] = field(default_factory=list)
    timeline: list[tuple[str, int]] = field(default_factory=list)  # (event id, day)
    accepted_changes: list[tuple[str, str]] = field(default_factory=list)
    pending_decisions: list[str] = field(default_factory=list)  # FIFO of event ids
    resume_status: Optional[SessionStatus] = None  # transition interrupted by a decision
    status: SessionStatus = SessionStatus.AWAITING_ROUND
    completion_reason: Optional[CompletionReason] = None

    @property
    def days_remaining(self) -> int:
        return DAY_BUDGET - self.day_elapsed

    @property
    def pending_decision(self) -> Optional[str]:
        return self.pending_decisions[0] if self.pending_decisions else None

    def event(self, event_id: str) -> CareerEvent:
        for bundle in self.rounds:
            for ev in bundle.events():
                if ev.id == event_id:
                    return ev
        raise ConsistencyError(f"unknown event id {event_id!r}")

    def events(self) -> list[CareerEvent]:
        return [ev for bundle in self.rounds for ev in bundle.events()]

    def pocketed_events(self) -> list[CareerEvent]:
        """Events in timeline (pocket) order."""
        return [self.event(eid) for eid, _day in self.timeline]

    def current_date(self) -> dt.date:
        return self.profile.start_date + dt.timedelta(days=self.day_elapsed)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "profile": self.profile.to_dict(),
            "rng_seed": self.rng_seed,
            "day_elapsed": self.day_elapsed,
            "milestones_achieved": self.milestones_achieved,
            "current_round": self.current_round,
            "rounds": [b.to_dict() for b in self.rounds],
            "timeline": [{"event_id": eid, "day": day} for eid, day in self.timeline],
            "accepted_changes": [[a, b] for a, b in self.accepted_changes],
            "pending_decisions": list(self.pending_decisions),
            "resume_status": self.resume_status.value if self.resume_status else None,
            "status": self.status.value,
            "completion_reason": self.completion_reason.value if self.completion_reason else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Session":
        return cls(
            id=d["id"],
            profile=UserProfile.from_dict(d["profile"]),
            rng_seed=d["rng_seed"],
            day_elapsed=d["day_elapsed"],
            milestones_achieved=d["milestones_achieved"],
            current_round=d["current_round"],
            rounds=[RoundBundle.from_dict(b) for b in d["rounds"]],
            timeline=[(t["event_id"], t["day"]) for t in d["timeline"]],
            accepted_changes=[tuple(pair) for pair in d["accepted_changes"]],
            pending_decisions=list(d["pending_decisions"]),
            resume_status=SessionStatus(d["resume_status"]) if d.get("resume_status") else None,
            status=SessionStatus(d["status"]),
            completion_reason=(
                CompletionReason(d["completion_reason"]) if d.get("completion_reason") else None
            ),
        )


def new_session(profile: UserProfile, seed: int, session_id: Optional[str] = None) -> Session:
    """Fresh session at day 0, waiting for its first round."""
    if not isinstance(seed, int):
        raise ValidationError("seed must be an integer")
    return Session(id=session_id or uuid.uuid4().hex[:12], profile=profile, rng_seed=seed)


def generation_context(session: Session) -> GenerationContext:
    """Context for generating the session's current round."""
    pocketed = tuple(
        (ev.title, ev.body, ev.category, ev.label) for ev in session.pocketed_events()
    )
    return GenerationContext(
        profile=session.profile,
        round_index=session.current_round,
        pocketed_events=pocketed,
        accepted_changes=tuple(session.accepted_changes),
        current_date=session.current_date(),
    )


def apply_rack_state(session: Session, bundle: RoundBundle) -> None:
    """State-only part of racking: discard leftovers, install the bundle."""
    if session.status is not SessionStatus.AWAITING_ROUND:
        raise IllegalStateError(f"cannot rack while {session.status.value}")
    if bundle.round_index != session.current_round:
        raise ConsistencyError(
            f"bundle is for round {bundle.round_index}, session expects {session.current_round}"
        )
    for ev in session.events():
        if ev.status is EventStatus.ON_TABLE:
            ev.status = EventStatus.DISCARDED
    session.rounds.append(bundle)
    session.status = SessionStatus.ACTIVE


def place_rack_balls(table: Table, seed: int, bundle: RoundBundle) -> list[Ball]:
    """Deterministic rack layout for one round.

    Milestone at the foot spot, the six skill/random balls shuffled onto two
    rows of three behind it with jitter up to ball_radius/2 per axis, cue at
    the head spot. Row spacing (3.5 r) leaves >= 2.5 r between centers under
    worst-case jitter, so racks never start interpenetrating.
    """
    rng = random.Random(f"{seed}:rack:{bundle.round_index}")
    r = table.ball_radius
    foot = table.foot_spot()
    spacing = 3.5 * r

    slots = [
        Vec2(foot.x + spacing, foot.y - spacing),
        Vec2(foot.x + spacing, foot.y),
        Vec2(foot.x + spacing, foot.y + spacing),
        Vec2(foot.x + 2 * spacing, foot.y - spacing),
        Vec2(foot.x + 2 * spacing, foot.y),
        Vec2(foot.x + 2 * spacing, foot.y + spacing),
    ]
    minor = [*bundle.randoms, *bundle.skills]
    rng.shuffle(minor)

    balls = [
        Ball(id="cue", kind=BallKind.CUE, position=table.head_spot(), velocity=Vec2(0.0, 0.0)),
        Ball(
            id=bundle.milestone.id,
            kind=BallKind.MILESTONE,
            position=foot,
            velocity=Vec2(0.0, 0.0),
            event_id=bundle.milestone.id,
        ),
    ]
    for slot, ev in zip(slots, minor):
        jx = rng.uniform(-r / 2.0, r / 2.0)
        jy = rng.uniform(-r / 2.0, r / 2.0)
        balls.append(Ball(
            id=ev.id,
            kind=_KIND_FOR_CATEGORY[ev.category],
            position=Vec2(slot.x + jx, slot.y + jy),
            velocity=Vec2(0.0, 0.0),
            event_id=ev.id,
        ))
    return balls


def rack_round(session: Session, bundle: RoundBundle, table: Table) -> list[Ball]:
    """Install a validated bundle and return the freshly placed balls."""
    apply_rack_state(session, bundle)
    return place_rack_balls(table, session.rng_seed, bundle)


def apply_shot_outcome(session: Session, shot_days: int, pocketed_event_ids: list[str]) -> Session:
    """Charge the shot's days and pocket events in capture order.

    A pocketed Change-labeled random queues a decision; pocketing the
    round's milestone advances the counter and queues the next round.
    Termination is evaluated last (milestone condition first).
    """
    if session.status is not SessionStatus.ACTIVE:
        raise IllegalStateError(f"cannot apply a shot while {session.status.value}")
    if shot_days < 1:
        raise ValidationError("a shot costs at least one day")

    session.day_elapsed = min(DAY_BUDGET, session.day_elapsed + shot_days)

    milestone_pocketed = False
    for event_id in pocketed_event_ids:
        ev = session.event(event_id)
        if ev.status is not EventStatus.ON_TABLE:
            raise ConsistencyError(f"event {event_id!r} is {ev.status.value}, not on the table")
        ev.status = EventStatus.POCKETED
        ev.pocketed_on_day = session.day_elapsed
        session.timeline.append((event_id, session.day_elapsed))
        if ev.category is EventCategory.RANDOM and ev.label.variant is LabelVariant.CHANGE:
            session.pending_decisions.append(event_id)
        elif ev.category is EventCategory.MILESTONE:
            milestone_pocketed = True

    if milestone_pocketed:
        session.milestones_achieved += 1
        session.current_round += 1

    resume = SessionStatus.AWAITING_ROUND if milestone_pocketed else SessionStatus.ACTIVE
    if session.pending_decisions:
        session.status = SessionStatus.AWAITING_DECISION
        session.resume_status = resume
    else:
        session.status = resume
        session.resume_status = None
    return check_termination(session)


def resolve_decision(session: Session, accept: bool) -> CareerEvent:
    """Resolve the oldest pending direction-change decision.

    Returns the decided event; the caller journals (event id, accept).
    """
    if session.status is not SessionStatus.AWAITING_DECISION:
        raise IllegalStateError("no pending decision")
    event_id = session.pending_decisions.pop(0)
    ev = session.event(event_id)
    if accept:
        session.accepted_changes.append((ev.label.change_from, ev.label.change_to))
    if not session.pending_decisions:
        session.status = session.resume_status or SessionStatus.ACTIVE
        session.resume_status = None
    return ev


def check_termination(session: Session) -> Session:
    """Complete the session when either bound is hit; milestones win ties."""
    if session.status is SessionStatus.COMPLETED:
        return session
    if session.milestones_achieved >= MILESTONE_TARGET:
        reason = CompletionReason.SIX_MILESTONES
    elif session.day_elapsed >= DAY_BUDGET:
        reason = CompletionReason.DAYS_EXHAUSTED
    else:
        return session
    session.status = SessionStatus.COMPLETED
    session.completion_reason = reason
    # The run is over; an unresolved decision can no longer redirect it.
    session.pending_decisions.clear()
    session.resume_status = None
    return session


def visible_hint(session: Session, balls: list[Ball], ball_id: str) -> str:
    """Hover text for an on-table ball: hint for skills/randoms, title for
    the milestone, nothing for the cue. Never the label or body."""
    ball = next((b for b in balls if b.id == ball_id), None)
    if ball is None:
        raise ConsistencyError(f"unknown ball id {ball_id!r}")
    if ball.state is not BallState.ON_TABLE:
        raise NotVisibleError(f"ball {ball_id!r} is {ball.state.value}")
    if ball.kind is BallKind.CUE:
        return ""
    ev = session.event(ball.event_id)
    if ev.category is EventCategory.MILESTONE:
        return ev.title
    return ev.hint
