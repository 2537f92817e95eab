"""cuepath: a server-authoritative career-exploration pool game.

Strike the cue ball to pocket generated career events; each shot spends
simulated days, and a run ends at six milestones or 730 days with a
journey report.
"""

from .career import (
    CompletionReason,
    DayCostRule,
    Session,
    SessionStatus,
    drag_to_days,
    new_session,
)
from .engine import GameEngine, RuntimeSession, ShotResult
from .events import (
    CareerEvent,
    EventCategory,
    EventStatus,
    LabelVariant,
    RoundBundle,
    SentimentLabel,
    UserProfile,
)
from .physics import (
    Ball,
    BallKind,
    BallState,
    FrameTrace,
    ShotInput,
    Table,
    Vec2,
    make_table,
    simulate_until_rest,
)
from .providers import Provider, RemoteProvider, TemplateProvider, make_provider

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BallKind",
    "BallState",
    "CareerEvent",
    "CompletionReason",
    "DayCostRule",
    "EventCategory",
    "EventStatus",
    "FrameTrace",
    "GameEngine",
    "LabelVariant",
    "Provider",
    "RemoteProvider",
    "RoundBundle",
    "RuntimeSession",
    "SentimentLabel",
    "Session",
    "SessionStatus",
    "ShotInput",
    "ShotResult",
    "Table",
    "TemplateProvider",
    "UserProfile",
    "Vec2",
    "drag_to_days",
    "make_provider",
    "make_table",
    "new_session",
    "simulate_until_rest",
]
