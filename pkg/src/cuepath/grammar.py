"""Event-string grammar: 'title: <title> | <body> [<label>]'.

parse/format round-trip exactly (modulo space runs around the separator),
which the test suite leans on heavily. Provider payloads arrive as JSON but
frequently wrapped in markdown fences or prose, so decoding tolerates a
single fence pair and falls back to the outermost brace span.
"""

from __future__ import annotations

import json
import re
from typing import Optional

from .errors import DecodeError, GrammarError, MissingLabelError, UnknownLabelError
from .events import LabelVariant, SentimentLabel

TITLE_PREFIX = "title:"
SEPARATOR = " | "

# Trailing "[...]" token (no nested brackets), possibly padded with spaces.
_TRAILING_BRACKET = re.compile(r"\s*\[([^\[\]]*)\]\s*$")
# Change direction accepts both arrow spellings; "→" is canonical on output.
_CHANGE_ARROW = re.compile(r"→|->")
_SEPARATOR_RUNS = re.compile(r" *\| *")
_FENCE_OPEN = re.compile(r"^\s*```[\w-]*\s*\n")
_FENCE_CLOSE = re.compile(r"\n\s*```\s*$")


def parse_label_token(token: str) -> SentimentLabel:
    """Parse the inside of a bracketed label token."""
    token = token.strip()
    if token in (LabelVariant.POSITIVE.value, LabelVariant.NEUTRAL.value, LabelVariant.NEGATIVE.value):
        return SentimentLabel(LabelVariant(token))
    if token.startswith("Change:") or token.startswith("Change :"):
        direction = token.split(":", 1)[1]
        parts = _CHANGE_ARROW.split(direction, maxsplit=1)
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise UnknownLabelError(f"Change label missing a 'from → to' direction: [{token}]")
        return SentimentLabel(LabelVariant.CHANGE, parts[0].strip(), parts[1].strip())
    raise UnknownLabelError(f"unknown label token: [{token}]")


def parse_event_string(raw: str, expect_label: bool) -> tuple[str, str, Optional[SentimentLabel]]:
    """Split an event string into (title, body, label).

    With expect_label the trailing bracketed token is required and parsed;
    without it a trailing bracket is tolerated and dropped (the milestone
    image-label slot).
    """
    text = raw.strip()
    if not text.startswith(TITLE_PREFIX):
        raise GrammarError(f"event string must start with {TITLE_PREFIX!r}: {raw[:60]!r}")
    rest = text[len(TITLE_PREFIX):]
    if SEPARATOR not in rest:
        raise GrammarError(f"event string missing {SEPARATOR!r} separator: {raw[:60]!r}")
    title, body = rest.split(SEPARATOR, 1)
    title = title.strip()
    body = body.strip()

    label: Optional[SentimentLabel] = None
    m = _TRAILING_BRACKET.search(body)
    if expect_label:
        if m is None:
            raise MissingLabelError(f"random event missing trailing [label]: {raw[:60]!r}")
        label = parse_label_token(m.group(1))
        body = body[:m.start()].strip()
    elif m is not None:
        body = body[:m.start()].strip()
    return title, body, label


def format_event_string(title: str, body: str, label: Optional[SentimentLabel]) -> str:
    """Inverse of parse_event_string, canonical spacing and arrow."""
    text = f"{TITLE_PREFIX} {title}{SEPARATOR}{body}"
    if label is not None:
        text += f" [{label.render()}]"
    return text


def normalize_event_string(raw: str) -> str:
    """Collapse space runs around the '|' separator; used by round-trip checks."""
    return _SEPARATOR_RUNS.sub(SEPARATOR, raw.strip())


def decode_json_object(payload: str) -> dict:
    """Decode a JSON object, stripping one markdown fence pair if present.

    Falls back to the outermost '{'..'}' span, which covers payloads wrapped
    in prose. Anything that still fails, or decodes to a non-object, raises
    DecodeError.
    """
    text = payload.strip()
    if _FENCE_OPEN.match(text):
        text = _FENCE_OPEN.sub("", text, count=1)
        text = _FENCE_CLOSE.sub("", text, count=1)
        text = text.strip()

    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        start = text.find("{")
        end = text.rfind("}")
        if start == -1 or end <= start:
            raise DecodeError("payload contains no JSON object")
        try:
            obj = json.loads(text[start:end + 1])
        except json.JSONDecodeError as exc:
            raise DecodeError(f"payload is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise DecodeError(f"payload decodes to {type(obj).__name__}, expected object")
    return obj
