"""Session persistence: append-only journal plus a snapshot, per session.

File layout: <store_dir>/<session_id>/journal.ndjson (one canonical JSON
entry per line) and snapshot.json. Both carry schema_version 1. The journal
is the source of truth; replay() folds it through the career state machine
using journaled generation output and physics outcomes (nothing is
re-queried or re-simulated), and load() verifies the fold matches the
snapshot.
"""

from __future__ import annotations

import json
import os
from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path
from typing import Optional

from . import career
from .career import Session
from .errors import (
    ConcurrencyError,
    CorruptionError,
    CuepathError,
    NotFoundError,
    ReplayError,
    StorageError,
)
from .events import RoundBundle, UserProfile
from .physics import Ball

SCHEMA_VERSION = 1
JOURNAL_FILE = "journal.ndjson"
SNAPSHOT_FILE = "snapshot.json"


class EntryKind(str, Enum):
    SESSION_CREATED = "SessionCreated"
    ROUND_GENERATED = "RoundGenerated"
    SHOT_TAKEN = "ShotTaken"
    EVENTS_POCKETED = "EventsPocketed"
    DECISION_RESOLVED = "DecisionResolved"
    ROUND_RACKED = "RoundRacked"
    TERMINATED = "Terminated"
    REPORT_GENERATED = "ReportGenerated"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def make_entry(seq: int, kind: EntryKind, timestamp: str, payload: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "seq": seq,
        "kind": kind.value,
        "timestamp": timestamp,
        "payload": payload,
    }


def build_snapshot(
    session: Session,
    balls: list[Ball],
    report: Optional[dict],
    provider_name: str,
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "provider": provider_name,
        "session": session.to_dict(),
        "balls": [b.to_dict() for b in balls],
        "report": report,
    }


class StorageBackend(ABC):
    """Journal + snapshot storage; one logical writer per session id."""

    @abstractmethod
    def create(self, session_id: str) -> None: ...

    @abstractmethod
    def exists(self, session_id: str) -> bool: ...

    @abstractmethod
    def append(self, session_id: str, entry: dict) -> int: ...

    @abstractmethod
    def read_journal(self, session_id: str) -> list[dict]: ...

    @abstractmethod
    def write_snapshot(self, session_id: str, snapshot: dict) -> None: ...

    @abstractmethod
    def read_snapshot(self, session_id: str) -> dict: ...

    @abstractmethod
    def list_sessions(self) -> list[str]: ...

    def _check_entry(self, entry: dict, last_seq: int, terminated: bool) -> None:
        seq = entry.get("seq")
        if seq != last_seq + 1:
            raise ConcurrencyError(f"expected seq {last_seq + 1}, got {seq}")
        if seq == 0 and entry.get("kind") != EntryKind.SESSION_CREATED.value:
            raise StorageError("first journal entry must be SessionCreated")
        if terminated and entry.get("kind") == EntryKind.TERMINATED.value:
            raise StorageError("Terminated may appear at most once")


class MemoryStore(StorageBackend):
    """In-memory backend for tests and throwaway runs."""

    def __init__(self):
        self._journals: dict[str, list[dict]] = {}
        self._snapshots: dict[str, dict] = {}

    def create(self, session_id: str) -> None:
        if session_id in self._journals:
            raise ConcurrencyError(f"session {session_id!r} already exists")
        self._journals[session_id] = []

    def exists(self, session_id: str) -> bool:
        return session_id in self._journals

    def append(self, session_id: str, entry: dict) -> int:
        journal = self._journals.get(session_id)
        if journal is None:
            raise NotFoundError(f"no session {session_id!r}")
        terminated = any(e["kind"] == EntryKind.TERMINATED.value for e in journal)
        self._check_entry(entry, len(journal) - 1, terminated)
        journal.append(json.loads(canonical_json(entry)))
        return entry["seq"]

    def read_journal(self, session_id: str) -> list[dict]:
        if session_id not in self._journals:
            raise NotFoundError(f"no session {session_id!r}")
        return [json.loads(canonical_json(e)) for e in self._journals[session_id]]

    def write_snapshot(self, session_id: str, snapshot: dict) -> None:
        if session_id not in self._journals:
            raise NotFoundError(f"no session {session_id!r}")
        self._snapshots[session_id] = json.loads(canonical_json(snapshot))

    def read_snapshot(self, session_id: str) -> dict:
        if session_id not in self._snapshots:
            raise NotFoundError(f"no snapshot for session {session_id!r}")
        return json.loads(canonical_json(self._snapshots[session_id]))

    def list_sessions(self) -> list[str]:
        return sorted(self._journals)


class FileStore(StorageBackend):
    """One directory per session; appends are flushed and fsynced."""

    def __init__(self, root: str | Path, *, fsync: bool = True):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.fsync = fsync
        self._last_seq: dict[str, int] = {}
        self._terminated: dict[str, bool] = {}

    def _dir(self, session_id: str) -> Path:
        if not session_id or "/" in session_id or session_id.startswith("."):
            raise StorageError(f"invalid session id {session_id!r}")
        return self.root / session_id

    def create(self, session_id: str) -> None:
        d = self._dir(session_id)
        if d.exists():
            raise ConcurrencyError(f"session {session_id!r} already exists")
        d.mkdir(parents=True)
        self._last_seq[session_id] = -1
        self._terminated[session_id] = False

    def exists(self, session_id: str) -> bool:
        return self._dir(session_id).is_dir()

    def _prime_cache(self, session_id: str) -> None:
        if session_id in self._last_seq:
            return
        journal = self.read_journal(session_id)
        self._last_seq[session_id] = journal[-1]["seq"] if journal else -1
        self._terminated[session_id] = any(
            e["kind"] == EntryKind.TERMINATED.value for e in journal
        )

    def append(self, session_id: str, entry: dict) -> int:
        d = self._dir(session_id)
        if not d.is_dir():
            raise NotFoundError(f"no session {session_id!r}")
        self._prime_cache(session_id)
        self._check_entry(entry, self._last_seq[session_id], self._terminated[session_id])
        line = canonical_json(entry) + "\n"
        try:
            with open(d / JOURNAL_FILE, "a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                if self.fsync:
                    os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageError(f"journal append failed: {exc}") from exc
        self._last_seq[session_id] = entry["seq"]
        if entry["kind"] == EntryKind.TERMINATED.value:
            self._terminated[session_id] = True
        return entry["seq"]

    def read_journal(self, session_id: str) -> list[dict]:
        d = self._dir(session_id)
        if not d.is_dir():
            raise NotFoundError(f"no session {session_id!r}")
        path = d / JOURNAL_FILE
        if not path.exists():
            return []
        entries: list[dict] = []
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorruptionError(
                        f"journal line {line_no} is not valid JSON (truncated write?)"
                    ) from exc
                entries.append(entry)
        for i, entry in enumerate(entries):
            if entry.get("seq") != i:
                raise CorruptionError(f"journal seq gap at line {i}: got {entry.get('seq')}")
        return entries

    def write_snapshot(self, session_id: str, snapshot: dict) -> None:
        d = self._dir(session_id)
        if not d.is_dir():
            raise NotFoundError(f"no session {session_id!r}")
        tmp = d / (SNAPSHOT_FILE + ".tmp")
        try:
            tmp.write_text(canonical_json(snapshot) + "\n", encoding="utf-8")
            tmp.replace(d / SNAPSHOT_FILE)
        except OSError as exc:
            raise StorageError(f"snapshot write failed: {exc}") from exc

    def read_snapshot(self, session_id: str) -> dict:
        path = self._dir(session_id) / SNAPSHOT_FILE
        if not path.exists():
            raise NotFoundError(f"no snapshot for session {session_id!r}")
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CorruptionError(f"snapshot is not valid JSON: {exc}") from exc

    def list_sessions(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir() if p.is_dir())


def replay(journal: list[dict]) -> dict:
    """Fold a journal back into a snapshot dict.

    Generation output comes from RoundGenerated payloads and ball states
    from ShotTaken/RoundRacked payloads; the career state machine replays
    every transition and anything inconsistent raises ReplayError naming
    the sequence number.
    """
    if not journal:
        raise ReplayError("journal is empty (missing SessionCreated)")

    session: Optional[Session] = None
    balls: list[Ball] = []
    report: Optional[dict] = None
    provider_name = ""
    pending_bundle: Optional[RoundBundle] = None
    pending_shot_days: Optional[int] = None

    for entry in journal:
        seq = entry.get("seq", -1)
        kind = entry.get("kind")
        payload = entry.get("payload", {})
        try:
            if kind == EntryKind.SESSION_CREATED.value:
                if session is not None:
                    raise ReplayError("duplicate SessionCreated", seq)
                session = career.new_session(
                    UserProfile.from_dict(payload["profile"]),
                    payload["seed"],
                    payload["session_id"],
                )
                provider_name = payload.get("provider", "")
                continue
            if session is None:
                raise ReplayError("first journal entry must be SessionCreated", seq)

            if kind == EntryKind.ROUND_GENERATED.value:
                if pending_bundle is not None:
                    raise ReplayError("two RoundGenerated entries without a rack", seq)
                pending_bundle = RoundBundle.from_dict(payload["bundle"])
            elif kind == EntryKind.ROUND_RACKED.value:
                if pending_bundle is None:
                    raise ReplayError("RoundRacked without a generated round", seq)
                if payload["round_index"] != pending_bundle.round_index:
                    raise ReplayError("racked round index mismatch", seq)
                career.apply_rack_state(session, pending_bundle)
                balls = [Ball.from_dict(b) for b in payload["balls"]]
                pending_bundle = None
            elif kind == EntryKind.SHOT_TAKEN.value:
                if pending_shot_days is not None:
                    raise ReplayError("ShotTaken without its EventsPocketed", seq)
                pending_shot_days = payload["days_charged"]
                balls = [Ball.from_dict(b) for b in payload["balls_after"]]
            elif kind == EntryKind.EVENTS_POCKETED.value:
                if pending_shot_days is None:
                    raise ReplayError("EventsPocketed without a preceding ShotTaken", seq)
                career.apply_shot_outcome(session, pending_shot_days, payload["event_ids"])
                pending_shot_days = None
            elif kind == EntryKind.DECISION_RESOLVED.value:
                ev = career.resolve_decision(session, payload["accept"])
                if ev.id != payload["event_id"]:
                    raise ReplayError(
                        f"decision resolved {ev.id!r}, journal says {payload['event_id']!r}", seq
                    )
            elif kind == EntryKind.TERMINATED.value:
                if session.status is not career.SessionStatus.COMPLETED:
                    raise ReplayError("Terminated entry but session is not completed", seq)
                if session.completion_reason.value != payload["reason"]:
                    raise ReplayError("termination reason mismatch", seq)
            elif kind == EntryKind.REPORT_GENERATED.value:
                report = payload["report"]
            else:
                raise ReplayError(f"unknown journal kind {kind!r}", seq)
        except ReplayError:
            raise
        except (CuepathError, KeyError, TypeError, ValueError) as exc:
            raise ReplayError(f"{type(exc).__name__}: {exc}", seq) from exc

    return build_snapshot(session, balls, report, provider_name)


def load(backend: StorageBackend, session_id: str) -> tuple[dict, list[dict]]:
    """Read (snapshot, journal), verifying the snapshot equals the fold."""
    if not backend.exists(session_id):
        raise NotFoundError(f"no session {session_id!r}")
    journal = backend.read_journal(session_id)
    snapshot = backend.read_snapshot(session_id)
    folded = replay(journal)
    if canonical_json(folded) != canonical_json(snapshot):
        raise CorruptionError(f"session {session_id!r}: snapshot diverges from journal fold")
    return snapshot, journal
