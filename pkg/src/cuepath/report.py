"""Terminal journey report: summary counts plus the two analysis fields."""

from __future__ import annotations

from dataclasses import dataclass

from .career import CompletionReason, Session, SessionStatus
from .errors import IllegalStateError, SchemaError, ValidationError
from .events import CareerEvent, EventCategory
from .grammar import decode_json_object
from .prompts import build_report_prompt, render_intro
from .providers import Provider

ANALYSIS_KEY = "careerAnalysis"
SUGGESTIONS_KEY = "futureSuggestions"


@dataclass
class JourneySummary:
    """Pocketed events partitioned by category, plus the day count."""

    milestones: list[CareerEvent]
    skills: list[CareerEvent]
    randoms: list[CareerEvent]
    days_used: int
    completion_reason: CompletionReason


@dataclass
class JourneyReport:
    career_analysis: str
    future_suggestions: str
    milestones: list[CareerEvent]
    skills: list[CareerEvent]
    randoms: list[CareerEvent]
    days_used: int
    completion_reason: CompletionReason

    def to_dict(self) -> dict:
        return {
            ANALYSIS_KEY: self.career_analysis,
            SUGGESTIONS_KEY: self.future_suggestions,
            "milestones": [e.to_dict() for e in self.milestones],
            "skills": [e.to_dict() for e in self.skills],
            "randoms": [e.to_dict() for e in self.randoms],
            "days_used": self.days_used,
            "completion_reason": self.completion_reason.value,
        }


def summarize_journey(session: Session) -> JourneySummary:
    """Partition the timeline by category; only valid once Completed."""
    if session.status is not SessionStatus.COMPLETED:
        raise IllegalStateError("journey summary requires a completed session")
    summary = JourneySummary([], [], [], session.day_elapsed, session.completion_reason)
    for ev in session.pocketed_events():
        if ev.category is EventCategory.MILESTONE:
            summary.milestones.append(ev)
        elif ev.category is EventCategory.SKILL:
            summary.skills.append(ev)
        else:
            summary.randoms.append(ev)
    return summary


def serialize_timeline(session: Session) -> str:
    """'title | body [label]' per pocketed event, or 'None' when empty."""
    lines = []
    for ev in session.pocketed_events():
        line = f"{ev.title} | {ev.body}"
        if ev.label is not None:
            line += f" [{ev.label.render()}]"
        lines.append(line)
    return "\n".join(lines) if lines else "None"


def build_session_report_prompt(session: Session) -> str:
    if session.status is not SessionStatus.COMPLETED:
        raise IllegalStateError("report prompt requires a completed session")
    return build_report_prompt(render_intro(session.profile), serialize_timeline(session))


def parse_report_response(raw: str) -> tuple[str, str]:
    """Extract (careerAnalysis, futureSuggestions) from a report payload."""
    obj = decode_json_object(raw)
    for key in (ANALYSIS_KEY, SUGGESTIONS_KEY):
        if key not in obj:
            raise SchemaError(f"report payload missing {key!r}")
        if not isinstance(obj[key], str):
            raise SchemaError(f"report field {key!r} must be a string")
        if not obj[key].strip():
            raise ValidationError(f"report field {key!r} is empty")
    return obj[ANALYSIS_KEY], obj[SUGGESTIONS_KEY]


def generate_report(provider: Provider, session: Session) -> JourneyReport:
    """Full report flow: prompt → provider → parse → assemble."""
    prompt = build_session_report_prompt(session)
    analysis, suggestions = parse_report_response(provider.submit(prompt))
    summary = summarize_journey(session)
    return JourneyReport(
        career_analysis=analysis,
        future_suggestions=suggestions,
        milestones=summary.milestones,
        skills=summary.skills,
        randoms=summary.randoms,
        days_used=summary.days_used,
        completion_reason=summary.completion_reason,
    )
