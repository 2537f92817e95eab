"""Prompt assembly from the versioned template resources.

Templates ship verbatim under resources/ and are rendered by literal token
substitution only, so a rendered prompt with its slot values masked back out
is byte-identical to the shipped file. Round templates use <name> tokens,
image/report templates use ${name} tokens.
"""

from __future__ import annotations

import datetime as dt
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources as importlib_resources
from typing import Optional

from .errors import CategoryError
from .events import CareerEvent, EventCategory, SentimentLabel, UserProfile

logger = logging.getLogger(__name__)

ROUND_PROMPT_RESOURCE = "round_prompt.txt"
IMAGE_PROMPT_RESOURCE = "image_prompt.txt"
REPORT_PROMPT_RESOURCE = "report_prompt.txt"
BASELINE_PROMPT_RESOURCE = "baseline_chat_prompt.txt"
FIXTURE_ROUND_RESOURCE = "fixture_round1.json"
FINETUNE_EXAMPLE_RESOURCE = "finetune_example.json"

# Slots of the round template, in template order. <currentMilestoneNum>
# occurs many times; substitution replaces every occurrence.
ROUND_PROMPT_SLOTS = (
    "<currentMilestoneNum>",
    "<acceptedChangesStr>",
    "<userIntro>",
    "<pocketedEvents>",
    "<pastExperiencesStr>",
    "<acceptedDirectionChanges>",
    "<currentTime>",
)
IMAGE_PROMPT_SLOTS = ("${bigEventContent}",)
REPORT_PROMPT_SLOTS = ("${userIntro}", "${allEvents}")


@lru_cache(maxsize=None)
def load_resource(name: str) -> str:
    return importlib_resources.files("cuepath.resources").joinpath(name).read_text(encoding="utf-8")


def substitute(template: str, mapping: dict[str, str]) -> str:
    """Replace every occurrence of each literal token with its value.

    Single pass over the template: substituted values are never rescanned,
    so a value containing another slot's token stays intact.
    """
    if not mapping:
        return template
    pattern = re.compile("|".join(re.escape(token) for token in mapping))
    return pattern.sub(lambda m: mapping[m.group(0)], template)


@dataclass(frozen=True)
class GenerationContext:
    """Everything a round generation needs to know about the session so far."""

    profile: UserProfile
    round_index: int
    pocketed_events: tuple[tuple[str, str, EventCategory, Optional[SentimentLabel]], ...] = ()
    accepted_changes: tuple[tuple[str, str], ...] = ()
    current_date: dt.date = field(default_factory=dt.date.today)


def render_intro(profile: UserProfile) -> str:
    return f"{profile.intro} Two-year goal: {profile.goal}"


def render_pocketed_events(
    events: tuple[tuple[str, str, EventCategory, Optional[SentimentLabel]], ...],
) -> str:
    if not events:
        return "None yet"
    lines = []
    for title, body, category, label in events:
        line = f"- {category.value}: {title} | {body}"
        if label is not None:
            line += f" [{label.render()}]"
        lines.append(line)
    return "\n".join(lines)


def render_past_experiences(
    events: tuple[tuple[str, str, EventCategory, Optional[SentimentLabel]], ...],
) -> str:
    if not events:
        return "None yet"
    return "; ".join(title for title, _body, _cat, _label in events)


def render_accepted_changes(changes: tuple[tuple[str, str], ...]) -> str:
    if not changes:
        return "None"
    return "; ".join(f"{a} → {b}" for a, b in changes)


def render_accepted_changes_sentence(changes: tuple[tuple[str, str], ...]) -> str:
    if not changes:
        return ""
    listed = "; ".join(f"{a} → {b}" for a, b in changes)
    return f"The user has accepted the following direction changes: {listed}."


def build_round_prompt(ctx: GenerationContext) -> str:
    """Render the round-generation template for the given context."""
    mapping = {
        "<currentMilestoneNum>": str(ctx.round_index),
        "<acceptedChangesStr>": render_accepted_changes_sentence(ctx.accepted_changes),
        "<userIntro>": render_intro(ctx.profile),
        "<pocketedEvents>": render_pocketed_events(ctx.pocketed_events),
        "<pastExperiencesStr>": render_past_experiences(ctx.pocketed_events),
        "<acceptedDirectionChanges>": render_accepted_changes(ctx.accepted_changes),
        "<currentTime>": ctx.current_date.isoformat(),
    }
    return substitute(load_resource(ROUND_PROMPT_RESOURCE), mapping)


def build_image_prompt(milestone: CareerEvent) -> str:
    """Render the scene-illustration prompt for a milestone event.

    Image synthesis is out of scope; the string is kept on the event for
    downstream use.
    """
    if milestone.category is not EventCategory.MILESTONE:
        raise CategoryError(f"image prompts are milestone-only, got {milestone.category.value}")
    if not milestone.body.strip():
        logger.warning("milestone %s has an empty body; image prompt will lack a scene", milestone.id)
    content = f"{milestone.title} | {milestone.body}"
    return substitute(load_resource(IMAGE_PROMPT_RESOURCE), {"${bigEventContent}": content})


def build_report_prompt(intro: str, all_events: str) -> str:
    """Render the journey-analysis template (used by the report module)."""
    return substitute(
        load_resource(REPORT_PROMPT_RESOURCE),
        {"${userIntro}": intro, "${allEvents}": all_events},
    )
