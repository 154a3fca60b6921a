"""Append-only event log backing the engine.

Every state change is an event appended here before it is applied, so
replaying the log from an empty store reproduces the exact same state. The
on-disk format is JSON lines, one event per line, sequence numbers starting
at 1 with no gaps.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import IntegrityError, ParseError

EVENT_KINDS = (
    "post_created",
    "warning_raised",
    "user_action",
    "post_deleted",
    "incident_reported",
    "threshold_adjusted",
)


@dataclass(frozen=True)
class EventRecord:
    seq: int
    kind: str
    payload: dict
    at: float = field(default_factory=time.time)

    def __post_init__(self):
        if self.seq < 1:
            raise IntegrityError(f"event seq must be positive, got {self.seq}")
        if self.kind not in EVENT_KINDS:
            raise IntegrityError(f"unknown event kind: {self.kind!r}")

    def to_json(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, "at": self.at, "payload": self.payload}

    @classmethod
    def from_json(cls, obj: dict) -> "EventRecord":
        try:
            return cls(
                seq=obj["seq"],
                kind=obj["kind"],
                at=obj["at"],
                payload=obj["payload"],
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed event record: {exc}") from None


class EventLog:
    """In-memory event sequence with an optional JSONL file behind it."""

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self._events: list[EventRecord] = []
        self._sink: IO[str] | None = None
        if self.path is not None and self.path.exists():
            self._events = list(read_events(self.path))
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._sink = self.path.open("a", encoding="utf-8")

    @property
    def last_seq(self) -> int:
        return self._events[-1].seq if self._events else 0

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[EventRecord]:
        return iter(self._events)

    def append(self, kind: str, payload: dict, at: float | None = None) -> EventRecord:
        record = EventRecord(
            seq=self.last_seq + 1,
            kind=kind,
            payload=payload,
            at=time.time() if at is None else at,
        )
        self._events.append(record)
        if self._sink is not None:
            self._sink.write(json.dumps(record.to_json(), sort_keys=True) + "\n")
            self._sink.flush()
        return record

    def close(self) -> None:
        if self._sink is not None:
            self._sink.close()
            self._sink = None


def read_events(source: Path | str | IO[str]) -> Iterator[EventRecord]:
    """Parse a JSONL event stream, enforcing the dense 1..N sequence."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            yield from _parse_lines(handle)
    else:
        yield from _parse_lines(source)


def _parse_lines(lines: Iterable[str]) -> Iterator[EventRecord]:
    expected = 1
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad event line: {exc}", line=lineno) from None
        record = EventRecord.from_json(obj)
        if record.seq != expected:
            raise IntegrityError(
                f"event sequence broken at line {lineno}: "
                f"expected seq {expected}, got {record.seq}"
            )
        expected += 1
        yield record
