"""Fixture and template integrity checks (shared by the CLI and tests).

The shipped round-1 payload is ground truth for the parser, and the prompt
templates must survive rendering byte-for-byte outside their slots. Each
check returns a result rather than raising so the CLI can list all
failures at once.
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass

from .errors import CuepathError
from .events import LabelVariant
from .grammar import format_event_string, normalize_event_string, parse_event_string
from .pipeline import parse_round_response, validate_round
from .prompts import (
    BASELINE_PROMPT_RESOURCE,
    FINETUNE_EXAMPLE_RESOURCE,
    FIXTURE_ROUND_RESOURCE,
    IMAGE_PROMPT_RESOURCE,
    IMAGE_PROMPT_SLOTS,
    REPORT_PROMPT_RESOURCE,
    REPORT_PROMPT_SLOTS,
    ROUND_PROMPT_RESOURCE,
    ROUND_PROMPT_SLOTS,
    load_resource,
    substitute,
)

FIXTURE_TITLES = {
    "Enroll in HCI Master's",
    "Homesick",
    "Graduate Satisfied",
    "Become Interested in AR/VR",
    "HCI Basic Knowledge",
    "User Research",
    "UI Prototyping",
}


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}" + (
            f"\n      {self.detail}" if self.detail and not self.ok else ""
        )


def check_fixture_parses() -> CheckResult:
    name = "fixture round parses into 1 milestone + 3 randoms + 3 skills"
    try:
        bundle = parse_round_response(load_resource(FIXTURE_ROUND_RESOURCE), 1)
    except CuepathError as exc:
        return CheckResult(name, False, str(exc))
    titles = {e.title for e in bundle.events()}
    if titles != FIXTURE_TITLES:
        return CheckResult(name, False, f"titles {sorted(titles)} != expected")
    variants = sorted(e.label.variant.value for e in bundle.randoms)
    if variants != ["Change", "Negative", "Positive"]:
        return CheckResult(name, False, f"random labels {variants}")
    change = next(e.label for e in bundle.randoms if e.label.variant is LabelVariant.CHANGE)
    if (change.change_from, change.change_to) != ("HCI", "AR/VR"):
        return CheckResult(name, False, f"change direction {change.change_from}→{change.change_to}")
    return CheckResult(name, True)


def check_fixture_validates() -> CheckResult:
    name = "fixture round passes content validation with zero violations"
    bundle = parse_round_response(load_resource(FIXTURE_ROUND_RESOURCE), 1)
    violations = validate_round(bundle)
    if violations:
        return CheckResult(name, False, "; ".join(str(v) for v in violations))
    return CheckResult(name, True)


def check_fixture_roundtrip() -> CheckResult:
    name = "fixture event strings survive parse→format round-trip"
    payload = json.loads(load_resource(FIXTURE_ROUND_RESOURCE))
    failures = []
    for key, value in payload.items():
        if key.endswith("-hint"):
            continue
        expect_label = key.startswith("randomEvent")
        title, body, label = parse_event_string(value, expect_label)
        rebuilt = format_event_string(title, body, label)
        if rebuilt != normalize_event_string(value):
            failures.append(key)
    if failures:
        return CheckResult(name, False, f"round-trip mismatch on {failures}")
    return CheckResult(name, True)


def _masked_render(resource: str, slots: tuple[str, ...]) -> CheckResult:
    name = f"{resource} renders byte-identically with slots masked"
    template = load_resource(resource)
    sentinels = {token: f"\x00{i}\x00" for i, token in enumerate(slots)}
    rendered = substitute(template, sentinels)
    masked = rendered
    for token, sentinel in sentinels.items():
        masked = masked.replace(sentinel, token)
    if masked != template:
        diff = "\n".join(difflib.unified_diff(
            template.splitlines(), masked.splitlines(), "template", "masked", lineterm="",
        ))
        return CheckResult(name, False, diff[:2000])
    return CheckResult(name, True)


def check_prompt_fidelity() -> list[CheckResult]:
    return [
        _masked_render(ROUND_PROMPT_RESOURCE, ROUND_PROMPT_SLOTS),
        _masked_render(IMAGE_PROMPT_RESOURCE, IMAGE_PROMPT_SLOTS),
        _masked_render(REPORT_PROMPT_RESOURCE, REPORT_PROMPT_SLOTS),
    ]


def check_finetune_example() -> CheckResult:
    name = "fine-tuning example output matches the fixture round"
    example = json.loads(load_resource(FINETUNE_EXAMPLE_RESOURCE))
    try:
        bundle = parse_round_response(example["output"], 1)
    except CuepathError as exc:
        return CheckResult(name, False, str(exc))
    reference = parse_round_response(load_resource(FIXTURE_ROUND_RESOURCE), 1)
    if bundle.to_dict() != reference.to_dict():
        return CheckResult(name, False, "example output diverges from fixture_round1.json")
    return CheckResult(name, True)


def check_baseline_prompt() -> CheckResult:
    name = "baseline chat prompt resource is present"
    text = load_resource(BASELINE_PROMPT_RESOURCE)
    if not text.strip():
        return CheckResult(name, False, "resource is empty")
    return CheckResult(name, True)


def run_all_checks() -> list[CheckResult]:
    return [
        check_fixture_parses(),
        check_fixture_validates(),
        check_fixture_roundtrip(),
        *check_prompt_fidelity(),
        check_finetune_example(),
        check_baseline_prompt(),
    ]
