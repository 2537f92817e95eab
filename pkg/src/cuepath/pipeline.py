"""Round generation: prompt → provider → strict parse → validation → retry.

Violations are data, not exceptions: validate_round returns the full list
and generate_round owns the retry policy. Structural problems (bad JSON,
bad keys, bad grammar) are hard failures; hint word counts and body
sentence counts are soft and can be accepted with warnings once the retry
budget runs out.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from .errors import DecodeError, GenerationError, GrammarError, SchemaError
from .events import CareerEvent, EventCategory, LabelVariant, RoundBundle
from .grammar import decode_json_object, parse_event_string
from .prompts import GenerationContext, build_image_prompt, build_round_prompt

logger = logging.getLogger(__name__)

DEFAULT_RETRY_BUDGET = 2
RETRY_INSTRUCTION = "Your previous output violated: {issues}. Regenerate the full JSON object."

HINT_MIN_WORDS = 2
HINT_MAX_WORDS = 6
# Bodies of skills and random events must contain at least one finished
# sentence (terminal-punctuation approximation).
MIN_BODY_SENTENCES = 1
_SENTENCE_END = re.compile(r"[.!?]")
_LABEL_WORDS = tuple(v.value.lower() for v in LabelVariant)

SOFT_CODES = frozenset({"hint-word-count", "body-sentence-count"})


@dataclass(frozen=True)
class Violation:
    code: str
    key: str
    message: str

    @property
    def soft(self) -> bool:
        return self.code in SOFT_CODES

    def __str__(self) -> str:
        return f"{self.key}: {self.message}"


def round_keys(round_index: int) -> list[str]:
    """The 13 payload keys expected for one round."""
    n = round_index
    keys = [f"bigEvent{n}"]
    for slot in (1, 2, 3):
        keys += [f"randomEvent{n}-{slot}", f"randomEvent{n}-{slot}-hint"]
    for slot in (1, 2, 3):
        keys += [f"skill{n}-{slot}", f"skill{n}-{slot}-hint"]
    return keys


def parse_round_response(raw: str, round_index: int) -> RoundBundle:
    """Decode and split a raw round payload into a structured bundle.

    Raises DecodeError / SchemaError / GrammarError (with the offending key
    named) rather than returning partial results.
    """
    obj = decode_json_object(raw)
    expected = round_keys(round_index)
    missing = [k for k in expected if k not in obj]
    extra = [k for k in obj if k not in expected]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing keys {missing}")
        if extra:
            parts.append(f"unexpected keys {extra}")
        raise SchemaError(f"round {round_index} payload: " + "; ".join(parts))

    def parsed(key: str, expect_label: bool):
        value = obj[key]
        if not isinstance(value, str):
            raise SchemaError(f"{key}: value must be a string")
        try:
            return parse_event_string(value, expect_label)
        except GrammarError as exc:
            raise type(exc)(f"{key}: {exc}") from exc

    def hint(key: str) -> str:
        value = obj[key]
        if not isinstance(value, str):
            raise SchemaError(f"{key}: hint must be a string")
        return value.strip()

    n = round_index
    title, body, _ = parsed(f"bigEvent{n}", expect_label=False)
    milestone = CareerEvent(
        id=f"bigEvent{n}", round_index=n, category=EventCategory.MILESTONE,
        title=title, body=body,
    )
    randoms = []
    for slot in (1, 2, 3):
        key = f"randomEvent{n}-{slot}"
        title, body, label = parsed(key, expect_label=True)
        randoms.append(CareerEvent(
            id=key, round_index=n, category=EventCategory.RANDOM,
            title=title, body=body, label=label, hint=hint(f"{key}-hint"),
        ))
    skills = []
    for slot in (1, 2, 3):
        key = f"skill{n}-{slot}"
        title, body, _ = parsed(key, expect_label=False)
        skills.append(CareerEvent(
            id=key, round_index=n, category=EventCategory.SKILL,
            title=title, body=body, hint=hint(f"{key}-hint"),
        ))
    return RoundBundle(round_index=n, milestone=milestone, randoms=randoms, skills=skills)


def validate_round(bundle: RoundBundle) -> list[Violation]:
    """Content checks beyond structure; empty list means the round is clean."""
    violations: list[Violation] = []

    for event in bundle.events():
        if not event.title.strip():
            violations.append(Violation("empty-text", event.id, "title is empty"))
        if not event.body.strip():
            violations.append(Violation("empty-text", event.id, "body is empty"))

    for event in [*bundle.randoms, *bundle.skills]:
        words = len(event.hint.split())
        if not (HINT_MIN_WORDS <= words <= HINT_MAX_WORDS):
            violations.append(Violation(
                "hint-word-count", event.id,
                f"hint has {words} words, expected {HINT_MIN_WORDS}-{HINT_MAX_WORDS}",
            ))
        lowered = event.hint.lower()
        for word in _LABEL_WORDS:
            if word in lowered:
                violations.append(Violation(
                    "hint-reveals-label", event.id, f"hint contains label word {word!r}",
                ))
        sentences = len(_SENTENCE_END.findall(event.body))
        if sentences < MIN_BODY_SENTENCES:
            violations.append(Violation(
                "body-sentence-count", event.id,
                f"body has {sentences} sentences, expected at least {MIN_BODY_SENTENCES}",
            ))

    if all(e.label and e.label.variant is LabelVariant.POSITIVE for e in bundle.randoms):
        violations.append(Violation(
            "all-positive", f"round {bundle.round_index}",
            "all three random events are Positive; outcomes must stay mixed",
        ))
    return violations


def generate_round(
    provider,
    ctx: GenerationContext,
    *,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
) -> RoundBundle:
    """Produce a validated round, retrying with a correction instruction.

    Soft-only violations are accepted (with warnings on the bundle) once
    the budget is exhausted; anything structural left at that point raises
    GenerationError. Transport errors propagate as-is.
    """
    base_prompt = build_round_prompt(ctx)
    prompt = base_prompt
    soft_fallback: tuple[RoundBundle, list[Violation]] | None = None
    last_issue = "no attempts made"

    for attempt in range(retry_budget + 1):
        raw = provider.submit(prompt)
        try:
            bundle = parse_round_response(raw, ctx.round_index)
        except (DecodeError, SchemaError, GrammarError) as exc:
            last_issue = str(exc)
            issues = [last_issue]
        else:
            violations = validate_round(bundle)
            if not violations:
                _attach_image_prompt(bundle)
                return bundle
            if all(v.soft for v in violations):
                soft_fallback = (bundle, violations)
            last_issue = "; ".join(str(v) for v in violations)
            issues = [str(v) for v in violations]
        logger.info("round %d attempt %d rejected: %s", ctx.round_index, attempt + 1, last_issue)
        prompt = base_prompt + "\n\n" + RETRY_INSTRUCTION.format(issues="; ".join(issues))

    if soft_fallback is not None:
        bundle, violations = soft_fallback
        bundle.warnings = [str(v) for v in violations]
        logger.warning("round %d accepted with warnings: %s", ctx.round_index, bundle.warnings)
        _attach_image_prompt(bundle)
        return bundle
    raise GenerationError(
        f"round {ctx.round_index} generation failed after {retry_budget + 1} attempts: {last_issue}"
    )


def _attach_image_prompt(bundle: RoundBundle) -> None:
    bundle.milestone.image_prompt = build_image_prompt(bundle.milestone)
