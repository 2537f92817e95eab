"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import datetime as dt
import random
from contextlib import contextmanager

import pytest

from cuepath.career import SessionStatus
from cuepath.engine import GameEngine, RuntimeSession
from cuepath.events import UserProfile
from cuepath.physics import Ball, BallKind, Vec2, make_table
from cuepath.policy import nearest_pocket_shot
from cuepath.prompts import GenerationContext, load_resource
from cuepath.providers import TemplateProvider
from cuepath.store import MemoryStore

START_DATE = dt.date(2026, 1, 1)

# One line per acceptance criterion, printed after the run (see the
# pytest_terminal_summary hook below).
ACCEPTANCE_LINES: list[str] = []


@contextmanager
def criterion(number: int, description: str):
    """Record a PASS/FAIL summary line for one acceptance criterion."""
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"criterion {number}: FAIL — {description} ({exc})")
        raise
    ACCEPTANCE_LINES.append(f"criterion {number}: PASS — {description}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table():
    return make_table()


@pytest.fixture
def profile():
    return UserProfile(
        intro="I am a first-year master's student majoring in HCI in the United States.",
        goal="Become a PhD student in human-computer interaction within two years.",
        start_date=START_DATE,
    )


@pytest.fixture(scope="session")
def fixture_raw():
    return load_resource("fixture_round1.json")


def make_profile(tag: str = "") -> UserProfile:
    return UserProfile(
        intro=f"I am an early-career software engineer exploring my options. {tag}".strip(),
        goal="Grow into a senior engineering role in two years.",
        start_date=START_DATE,
    )


def make_context(profile: UserProfile, round_index: int = 1, **kwargs) -> GenerationContext:
    kwargs.setdefault("current_date", START_DATE)
    return GenerationContext(profile=profile, round_index=round_index, **kwargs)


def cue_and_target(vx: float = 1.0) -> list[Ball]:
    """A moving cue and one resting skill ball dead ahead, mid-table."""
    return [
        Ball(id="cue", kind=BallKind.CUE, position=Vec2(0.5, 0.5), velocity=Vec2(vx, 0.0)),
        Ball(id="t1", kind=BallKind.SKILL, position=Vec2(1.0, 0.5), velocity=Vec2(0.0, 0.0),
             event_id="t1"),
    ]


def run_policy_session(seed: int, backend=None, *, noise: float = 0.0) -> tuple[GameEngine, RuntimeSession, int]:
    """Drive one auto-policy session to completion; returns shot count too."""
    engine = GameEngine(backend or MemoryStore())
    provider = TemplateProvider(seed)
    profile = make_profile()
    from cuepath.cli import deterministic_session_id

    rt = engine.create_session(
        profile, seed, provider, session_id=deterministic_session_id(seed, profile)
    )
    decision_rng = random.Random(f"{seed}:decisions")
    aim_rng = random.Random(f"{seed}:aim")
    shots = 0
    while rt.session.status is not SessionStatus.COMPLETED:
        if rt.session.status is SessionStatus.AWAITING_ROUND:
            engine.advance_round(rt)
        elif rt.session.status is SessionStatus.AWAITING_DECISION:
            engine.resolve_decision(rt, decision_rng.random() < 0.5)
        else:
            direction, drag = nearest_pocket_shot(
                engine.table, rt.balls, noise_rad=noise, rng=aim_rng
            )
            engine.take_shot(rt, direction, drag, record_frames=False)
            shots += 1
    engine.get_report(rt)
    return engine, rt, shots
