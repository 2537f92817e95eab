"""Event-string grammar and tolerant JSON decoding."""

import json

import pytest
from hypothesis import given, strategies as st

from cuepath.errors import (
    DecodeError,
    GrammarError,
    MissingLabelError,
    UnknownLabelError,
)
from cuepath.events import LabelVariant, SentimentLabel
from cuepath.grammar import (
    decode_json_object,
    format_event_string,
    normalize_event_string,
    parse_event_string,
    parse_label_token,
)


class TestParseEventString:
    def test_fixture_negative(self):
        raw = ("title: Homesick | You find it hard to adapt to the United States, miss "
               "your family and friends, and become unmotivated. As a result, your grades "
               "in your first semester drop and you fail two courses. [Negative]")
        title, body, label = parse_event_string(raw, expect_label=True)
        assert title == "Homesick"
        assert body.startswith("You find it hard")
        assert body.endswith("fail two courses.")
        assert label.variant is LabelVariant.NEGATIVE

    def test_fixture_change(self):
        raw = ("title: Become Interested in AR/VR | After taking a course in AR/VR design, "
               "you realize that this is what you want to do and hope to become an AR/VR "
               "designer in the future. [Change: HCI → AR/VR]")
        title, body, label = parse_event_string(raw, expect_label=True)
        assert label == SentimentLabel(LabelVariant.CHANGE, "HCI", "AR/VR")

    def test_ascii_arrow_accepted(self):
        _, _, label = parse_event_string("title: T | Body. [Change: A -> B]", True)
        assert (label.change_from, label.change_to) == ("A", "B")
        assert label.render() == "Change: A → B"

    def test_missing_prefix(self):
        with pytest.raises(GrammarError):
            parse_event_string("Homesick | body [Negative]", True)

    def test_missing_separator(self):
        with pytest.raises(GrammarError):
            parse_event_string("title: Homesick body [Negative]", True)

    def test_missing_label(self):
        with pytest.raises(MissingLabelError):
            parse_event_string("title: T | No label here.", True)

    def test_unknown_label(self):
        with pytest.raises(UnknownLabelError):
            parse_event_string("title: T | Body. [Great]", True)

    def test_change_without_direction(self):
        with pytest.raises(UnknownLabelError):
            parse_event_string("title: T | Body. [Change: onwards]", True)

    def test_trailing_bracket_tolerated_without_label(self):
        title, body, label = parse_event_string(
            "title: Enroll | You enroll and begin. [a scenic image]", False)
        assert label is None
        assert body == "You enroll and begin."

    def test_no_trailing_bracket_without_label(self):
        _, body, label = parse_event_string("title: Enroll | You enroll and begin.", False)
        assert body == "You enroll and begin."
        assert label is None

    def test_body_keeps_later_pipes(self):
        _, body, _ = parse_event_string("title: T | left | right.", False)
        assert body == "left | right."


class TestFormatRoundTrip:
    def test_normalize_collapses_separator_spaces(self):
        assert normalize_event_string("title: T  |   Body.") == "title: T | Body."

    @given(
        title=st.text(
            alphabet=st.characters(whitelist_categories=("L", "N"), whitelist_characters=" '-/"),
            min_size=1, max_size=40,
        ).map(str.strip).filter(lambda s: s and "|" not in s),
        body=st.text(
            alphabet=st.characters(whitelist_categories=("L", "N"), whitelist_characters=" ,'-/"),
            min_size=1, max_size=120,
        ).map(str.strip).filter(lambda s: s),
        variant=st.sampled_from([None, LabelVariant.POSITIVE, LabelVariant.NEUTRAL,
                                 LabelVariant.NEGATIVE, LabelVariant.CHANGE]),
    )
    def test_parse_format_identity(self, title, body, variant):
        body = body + "."
        if variant is LabelVariant.CHANGE:
            label = SentimentLabel(variant, "From Here", "To There")
        elif variant is not None:
            label = SentimentLabel(variant)
        else:
            label = None
        raw = format_event_string(title, body, label)
        t2, b2, l2 = parse_event_string(raw, expect_label=label is not None)
        assert (t2, b2, l2) == (title, body, label)
        assert format_event_string(t2, b2, l2) == normalize_event_string(raw)


class TestParseLabelToken:
    def test_variants(self):
        for word in ("Positive", "Neutral", "Negative"):
            assert parse_label_token(word).variant.value == word

    def test_change_trimming(self):
        label = parse_label_token("Change:  HCI  →  AR/VR ")
        assert (label.change_from, label.change_to) == ("HCI", "AR/VR")


class TestDecodeJsonObject:
    PAYLOAD = {"a": 1, "b": "two"}

    def test_plain(self):
        assert decode_json_object(json.dumps(self.PAYLOAD)) == self.PAYLOAD

    def test_fenced(self):
        text = "```\n" + json.dumps(self.PAYLOAD) + "\n```"
        assert decode_json_object(text) == self.PAYLOAD

    def test_fenced_with_language(self):
        text = "```json\n" + json.dumps(self.PAYLOAD, indent=2) + "\n```"
        assert decode_json_object(text) == self.PAYLOAD

    def test_prose_wrapped(self):
        text = "Here is the result you asked for:\n" + json.dumps(self.PAYLOAD) + "\nHope it helps!"
        assert decode_json_object(text) == self.PAYLOAD

    def test_refusal_is_decode_error(self):
        with pytest.raises(DecodeError):
            decode_json_object("I cannot help with that.")

    def test_array_rejected(self):
        with pytest.raises(DecodeError):
            decode_json_object("[1, 2, 3]")

    def test_braces_inside_strings_survive(self):
        payload = {"k": "a {curly} value"}
        text = "Sure: " + json.dumps(payload)
        assert decode_json_object(text) == payload
