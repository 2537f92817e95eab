"""Headless play: scripted or auto-policy runs, fixture checks, replay.

Runs share the exact engine/store code paths with the HTTP service, so a
journal written by either replays identically in both.
"""

from __future__ import annotations

import argparse
import datetime as dt
import hashlib
import json
import math
import random
import sys
import textwrap
from pathlib import Path

from .career import SessionStatus
from .engine import GameEngine, RuntimeSession
from .errors import CuepathError
from .events import UserProfile
from .fixtures import run_all_checks
from .physics import Vec2
from .policy import nearest_pocket_shot
from .providers import make_provider
from .store import FileStore, MemoryStore, canonical_json, replay as replay_journal
from .store import JOURNAL_FILE

DEFAULT_INTRO = (
    "I am an early-career explorer trying to turn scattered interests into a direction."
)
DEFAULT_GOAL = "Find and commit to a concrete role I can grow in over the next two years."
DEFAULT_START_DATE = "2026-01-01"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SCRIPT = 2


def deterministic_session_id(seed: int, profile: UserProfile) -> str:
    digest = hashlib.sha256(
        f"{seed}|{profile.intro}|{profile.goal}|{profile.start_date}".encode("utf-8")
    ).hexdigest()
    return digest[:12]


def _read_script(path: str) -> list[dict]:
    steps = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            step = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CuepathError(f"script line {line_no}: not valid JSON: {exc}")
        if step.get("type") not in ("shot", "decision"):
            raise CuepathError(f"script line {line_no}: type must be 'shot' or 'decision'")
        step["_line"] = line_no
        steps.append(step)
    return steps


def _script_direction(step: dict) -> Vec2:
    d = step.get("direction") or {}
    x, y = float(d.get("x", 0.0)), float(d.get("y", 0.0))
    norm = math.hypot(x, y)
    if norm == 0.0 or not math.isfinite(norm):
        raise CuepathError(f"script line {step['_line']}: direction must be a non-zero vector")
    if abs(norm - 1.0) <= 1e-9:  # already unit: keep bits exact for replays
        return Vec2(x, y)
    return Vec2(x / norm, y / norm)


def cmd_run(args) -> int:
    backend = FileStore(args.store_dir) if args.store_dir else MemoryStore()
    engine = GameEngine(backend)
    provider = make_provider(args.provider, args.seed)
    profile = UserProfile(args.intro, args.goal, dt.date.fromisoformat(args.start_date))
    rt = engine.create_session(
        profile, args.seed, provider,
        session_id=deterministic_session_id(args.seed, profile),
    )

    decision_rng = random.Random(f"{args.seed}:decisions")
    aim_rng = random.Random(f"{args.seed}:aim")
    script = _read_script(args.script) if args.script else None
    cursor = 0

    while rt.session.status is not SessionStatus.COMPLETED:
        status = rt.session.status
        if status is SessionStatus.AWAITING_ROUND:
            engine.advance_round(rt)
            continue
        if script is not None:
            if cursor >= len(script):
                print(
                    f"script exhausted at seq {rt.next_seq} with session still "
                    f"{status.value}", file=sys.stderr,
                )
                return EXIT_SCRIPT
            step = script[cursor]
            cursor += 1
            if step["type"] == "shot":
                if status is not SessionStatus.ACTIVE:
                    print(
                        f"script line {step['_line']}: shot while session is "
                        f"{status.value} (seq {rt.next_seq})", file=sys.stderr,
                    )
                    return EXIT_SCRIPT
                engine.take_shot(
                    rt, _script_direction(step), float(step["drag_fraction"]),
                    record_frames=False,
                )
            else:
                if status is not SessionStatus.AWAITING_DECISION:
                    print(
                        f"script line {step['_line']}: decision but nothing pending "
                        f"(seq {rt.next_seq})", file=sys.stderr,
                    )
                    return EXIT_SCRIPT
                engine.resolve_decision(rt, bool(step.get("accept", False)))
        else:
            if status is SessionStatus.AWAITING_DECISION:
                engine.resolve_decision(rt, decision_rng.random() < 0.5)
            else:
                direction, drag = nearest_pocket_shot(
                    engine.table, rt.balls, noise_rad=args.noise, rng=aim_rng,
                )
                engine.take_shot(rt, direction, drag, record_frames=False)

    report = engine.get_report(rt)
    if args.format == "json":
        print(json.dumps({
            "session_id": rt.session.id,
            "day_elapsed": rt.session.day_elapsed,
            "milestones_achieved": rt.session.milestones_achieved,
            "completion_reason": rt.session.completion_reason.value,
            "report": report,
        }, indent=2, ensure_ascii=False))
    else:
        _print_text_report(rt, report)
    if args.store_dir:
        print(f"journal: {Path(args.store_dir) / rt.session.id / JOURNAL_FILE}", file=sys.stderr)
    return EXIT_OK


def _print_text_report(rt: RuntimeSession, report: dict) -> None:
    session = rt.session
    print("Career Journey Report")
    print("=====================")
    print(f"Session {session.id} — {session.completion_reason.value} "
          f"after {session.day_elapsed} days, "
          f"{session.milestones_achieved}/6 milestones")
    for heading, key in (("Milestones", "milestones"), ("Skills", "skills"),
                         ("Random events", "randoms")):
        items = report[key]
        print(f"\n{heading} ({len(items)}):")
        for ev in items:
            label = ev.get("label")
            suffix = f" [{label['variant']}]" if label else ""
            print(f"  - day {ev['pocketed_on_day']:>3}: {ev['title']}{suffix}")
    print("\nCareer analysis:")
    print(textwrap.fill(report["careerAnalysis"], width=78, initial_indent="  ",
                        subsequent_indent="  "))
    print("\nFuture suggestions:")
    print(textwrap.fill(report["futureSuggestions"], width=78, initial_indent="  ",
                        subsequent_indent="  "))


def cmd_validate_fixtures(_args) -> int:
    results = run_all_checks()
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.ok]
    if failed:
        print(f"\n{len(failed)} of {len(results)} checks failed")
        return EXIT_ERROR
    print(f"\nall {len(results)} checks passed")
    return EXIT_OK


def _read_journal_file(path: Path) -> list[dict]:
    if path.is_dir():
        path = path / JOURNAL_FILE
    entries = []
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines()):
        if not line.strip():
            continue
        try:
            entries.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise CuepathError(f"journal line {line_no}: corrupt entry: {exc}")
    return entries


def cmd_replay(args) -> int:
    snapshot = replay_journal(_read_journal_file(Path(args.journal)))
    print(canonical_json(snapshot))
    return EXIT_OK


def cmd_report(args) -> int:
    if not args.store_dir:
        print("report requires --store-dir", file=sys.stderr)
        return EXIT_ERROR
    engine = GameEngine(FileStore(args.store_dir))
    rt = engine.load(args.session_id)
    report = engine.get_report(rt)
    if args.format == "json":
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        _print_text_report(rt, report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cuepath", description="Career pool, headless")
    parser.add_argument("--provider", choices=("template", "remote"), default="template")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--store-dir", default=None)
    parser.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="play one session to completion")
    run_p.add_argument("--script", help="NDJSON steps: {type: shot|decision, ...}")
    run_p.add_argument("--policy", choices=("nearest-pocket",), default="nearest-pocket")
    run_p.add_argument("--noise", type=float, default=0.0,
                       help="aim noise stddev in radians (Monte-Carlo runs)")
    run_p.add_argument("--intro", default=DEFAULT_INTRO)
    run_p.add_argument("--goal", default=DEFAULT_GOAL)
    run_p.add_argument("--start-date", default=DEFAULT_START_DATE)
    run_p.set_defaults(func=cmd_run)

    fx_p = sub.add_parser("validate-fixtures", help="check shipped fixtures and templates")
    fx_p.set_defaults(func=cmd_validate_fixtures)

    rp_p = sub.add_parser("replay", help="fold a journal and print the snapshot")
    rp_p.add_argument("journal", help="journal.ndjson path or session directory")
    rp_p.set_defaults(func=cmd_replay)

    rep_p = sub.add_parser("report", help="print the report for a stored session")
    rep_p.add_argument("session_id")
    rep_p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CuepathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
