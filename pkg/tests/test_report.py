"""Journey report: summary partition, prompt, parsing, idempotence."""

import json

import pytest

from conftest import make_profile
from cuepath.career import CompletionReason, SessionStatus, new_session, rack_round
from cuepath.errors import IllegalStateError, SchemaError, ValidationError
from cuepath.physics import make_table
from cuepath.report import (
    build_session_report_prompt,
    generate_report,
    parse_report_response,
    serialize_timeline,
    summarize_journey,
)
from cuepath.providers import TemplateProvider
from test_career import make_bundle


def completed_session(pockets=("milestone", "skill", "random")):
    table = make_table()
    session = new_session(make_profile(), seed=11)
    bundle = make_bundle(round_index=1)
    rack_round(session, bundle, table)
    from cuepath.career import apply_shot_outcome

    ids = []
    if "skill" in pockets:
        ids.append(bundle.skills[0].id)
    if "random" in pockets:
        ids.append(bundle.randoms[0].id)
    if "milestone" in pockets:
        ids.append(bundle.milestone.id)
    apply_shot_outcome(session, 730, ids)
    assert session.status is SessionStatus.COMPLETED
    return session, bundle


class TestSummarizeJourney:
    def test_partition_counts(self):
        session, _ = completed_session()
        summary = summarize_journey(session)
        assert (len(summary.milestones), len(summary.skills), len(summary.randoms)) == (1, 1, 1)
        assert summary.days_used == 730
        assert summary.completion_reason is CompletionReason.DAYS_EXHAUSTED

    def test_partition_is_total(self):
        session, _ = completed_session()
        summary = summarize_journey(session)
        total = len(summary.milestones) + len(summary.skills) + len(summary.randoms)
        assert total == len(session.timeline)

    def test_active_session_rejected(self):
        session = new_session(make_profile(), seed=1)
        with pytest.raises(IllegalStateError):
            summarize_journey(session)


class TestReportPrompt:
    def test_contains_future_suggestions_requirement(self):
        session, _ = completed_session()
        prompt = build_session_report_prompt(session)
        assert '"futureSuggestions"' in prompt
        assert "Output only valid JSON format." in prompt

    def test_timeline_serialization(self):
        session, bundle = completed_session()
        text = serialize_timeline(session)
        assert f"{bundle.skills[0].title} | {bundle.skills[0].body}" in text
        assert "[Positive]" in text  # random slot 1 label

    def test_empty_timeline_renders_none(self):
        session, _ = completed_session(pockets=())
        assert serialize_timeline(session) == "None"
        prompt = build_session_report_prompt(session)
        assert "Complete journey (all pocketed events): None" in prompt


class TestParseReportResponse:
    def test_plain(self):
        raw = json.dumps({"careerAnalysis": "Solid run.", "futureSuggestions": "Do more."})
        assert parse_report_response(raw) == ("Solid run.", "Do more.")

    def test_missing_key(self):
        with pytest.raises(SchemaError):
            parse_report_response(json.dumps({"careerAnalysis": "only one"}))

    def test_empty_value(self):
        raw = json.dumps({"careerAnalysis": "", "futureSuggestions": "x"})
        with pytest.raises(ValidationError):
            parse_report_response(raw)

    def test_fenced(self):
        raw = "```json\n" + json.dumps(
            {"careerAnalysis": "A", "futureSuggestions": "B"}) + "\n```"
        assert parse_report_response(raw) == ("A", "B")


class TestGenerateReport:
    def test_full_flow(self):
        session, _ = completed_session()
        report = generate_report(TemplateProvider(11), session)
        assert report.career_analysis and report.future_suggestions
        assert report.days_used == 730
        data = report.to_dict()
        assert set(data) >= {"careerAnalysis", "futureSuggestions", "milestones",
                             "skills", "randoms", "days_used", "completion_reason"}

    def test_idempotent_with_template_provider(self):
        session, _ = completed_session()
        a = generate_report(TemplateProvider(11), session).to_dict()
        b = generate_report(TemplateProvider(11), session).to_dict()
        assert a == b

    def test_references_journey_titles(self):
        session, bundle = completed_session()
        report = generate_report(TemplateProvider(11), session)
        assert bundle.skills[0].title in report.career_analysis

    def test_requires_completed(self):
        session = new_session(make_profile(), seed=2)
        with pytest.raises(IllegalStateError):
            generate_report(TemplateProvider(1), session)
