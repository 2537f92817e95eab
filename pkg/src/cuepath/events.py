"""Career event domain types shared by the session state machine and pipeline."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

from .errors import ValidationError


class LabelVariant(str, Enum):
    POSITIVE = "Positive"
    NEUTRAL = "Neutral"
    NEGATIVE = "Negative"
    CHANGE = "Change"


class EventCategory(str, Enum):
    MILESTONE = "Milestone"
    RANDOM = "Random"
    SKILL = "Skill"


class EventStatus(str, Enum):
    ON_TABLE = "OnTable"
    POCKETED = "Pocketed"
    DISCARDED = "Discarded"


@dataclass(frozen=True)
class SentimentLabel:
    """Hidden outcome polarity of a random event.

    Change labels carry the direction pair ("HCI" -> "AR/VR"); the other
    variants carry nothing.
    """

    variant: LabelVariant
    change_from: str = ""
    change_to: str = ""

    def __post_init__(self):
        if self.variant is LabelVariant.CHANGE:
            if not self.change_from.strip() or not self.change_to.strip():
                raise ValidationError("Change label requires non-empty from/to")
        elif self.change_from or self.change_to:
            raise ValidationError(f"{self.variant.value} label carries no direction")

    def render(self) -> str:
        """Canonical bracketed-token text, e.g. 'Change: HCI → AR/VR'."""
        if self.variant is LabelVariant.CHANGE:
            return f"Change: {self.change_from} → {self.change_to}"
        return self.variant.value

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "change_from": self.change_from,
            "change_to": self.change_to,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SentimentLabel":
        return cls(LabelVariant(d["variant"]), d.get("change_from", ""), d.get("change_to", ""))


@dataclass
class CareerEvent:
    """One generated event: a milestone, a skill, or a labeled random event."""

    id: str
    round_index: int
    category: EventCategory
    title: str
    body: str
    label: Optional[SentimentLabel] = None
    hint: Optional[str] = None
    status: EventStatus = EventStatus.ON_TABLE
    pocketed_on_day: Optional[int] = None
    image_prompt: Optional[str] = None

    def __post_init__(self):
        if self.category is EventCategory.RANDOM and self.label is None:
            raise ValidationError(f"random event {self.id} requires a label")
        if self.category is not EventCategory.RANDOM and self.label is not None:
            raise ValidationError(f"{self.category.value} event {self.id} must not carry a label")
        if self.category is EventCategory.MILESTONE:
            if self.hint is not None:
                raise ValidationError("milestone events carry no hint")
        elif self.hint is None:
            raise ValidationError(f"{self.category.value} event {self.id} requires a hint")

    def copy(self) -> "CareerEvent":
        return replace(self)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "round_index": self.round_index,
            "category": self.category.value,
            "title": self.title,
            "body": self.body,
            "label": self.label.to_dict() if self.label else None,
            "hint": self.hint,
            "status": self.status.value,
            "pocketed_on_day": self.pocketed_on_day,
            "image_prompt": self.image_prompt,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CareerEvent":
        return cls(
            id=d["id"],
            round_index=d["round_index"],
            category=EventCategory(d["category"]),
            title=d["title"],
            body=d["body"],
            label=SentimentLabel.from_dict(d["label"]) if d.get("label") else None,
            hint=d.get("hint"),
            status=EventStatus(d["status"]),
            pocketed_on_day=d.get("pocketed_on_day"),
            image_prompt=d.get("image_prompt"),
        )


@dataclass
class RoundBundle:
    """One generation round: 1 milestone + 3 random events + 3 skills."""

    round_index: int
    milestone: CareerEvent
    randoms: list[CareerEvent]
    skills: list[CareerEvent]
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.round_index < 1:
            raise ValidationError("round_index must be >= 1")
        if self.milestone.category is not EventCategory.MILESTONE:
            raise ValidationError("bundle milestone has wrong category")
        if len(self.randoms) != 3 or any(e.category is not EventCategory.RANDOM for e in self.randoms):
            raise ValidationError("bundle requires exactly 3 random events")
        if len(self.skills) != 3 or any(e.category is not EventCategory.SKILL for e in self.skills):
            raise ValidationError("bundle requires exactly 3 skill events")
        for e in self.events():
            if e.round_index != self.round_index:
                raise ValidationError(f"event {e.id} round_index mismatch")

    def events(self) -> list[CareerEvent]:
        return [self.milestone, *self.randoms, *self.skills]

    def to_dict(self) -> dict:
        return {
            "round_index": self.round_index,
            "milestone": self.milestone.to_dict(),
            "randoms": [e.to_dict() for e in self.randoms],
            "skills": [e.to_dict() for e in self.skills],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RoundBundle":
        return cls(
            round_index=d["round_index"],
            milestone=CareerEvent.from_dict(d["milestone"]),
            randoms=[CareerEvent.from_dict(e) for e in d["randoms"]],
            skills=[CareerEvent.from_dict(e) for e in d["skills"]],
            warnings=list(d.get("warnings", [])),
        )


@dataclass(frozen=True)
class UserProfile:
    """Who is playing and where they want to be in two years."""

    intro: str
    goal: str
    start_date: dt.date

    def __post_init__(self):
        if not self.intro.strip():
            raise ValidationError("profile intro must be non-empty")
        if not self.goal.strip():
            raise ValidationError("profile goal must be non-empty")

    def to_dict(self) -> dict:
        return {"intro": self.intro, "goal": self.goal, "start_date": self.start_date.isoformat()}

    @classmethod
    def from_dict(cls, d: dict) -> "UserProfile":
        return cls(d["intro"], d["goal"], dt.date.fromisoformat(d["start_date"]))
