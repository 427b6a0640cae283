"""Trial transcripts: timestamped event/action records plus a summary.

A transcript is the full observable record of one device run: every input
event, the actions the device emitted for it, and the logical time at
which it happened.  Trial-level fields (attempt times, error count,
auxiliary measurements) are filled in by whoever drove the run.

Export formats: one JSON object per line for the event log
(:func:`entries_to_jsonl`) and a single JSON summary per trial
(:func:`summary`).
"""

from __future__ import annotations

import base64
import dataclasses
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


@dataclass(frozen=True)
class TranscriptEntry:
    """One processed input: logical time, the event, the emitted actions."""

    t_ms: float
    event: Any
    actions: tuple[Any, ...] = ()


@dataclass
class TrialTranscript:
    """Record of one trial run. ``test_id`` 0 means a raw scripted replay."""

    test_id: int = 0
    participant_id: int = 0
    entries: list[TranscriptEntry] = field(default_factory=list)
    per_attempt_times_s: list[float] = field(default_factory=list)
    errors: int = 0
    completed: bool = False
    aux: dict[str, float] = field(default_factory=dict)


def to_wire(obj: Any) -> Any:
    """Convert events/actions/values into JSON-serializable structures.

    Dataclasses gain a ``"type"`` field carrying the class name; bytes are
    base64; enums collapse to their value.  Anything with a ``hex``
    property and a ``value`` of bytes (tag uids) becomes its hex string.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if isinstance(getattr(obj, "value", None), bytes) and hasattr(obj, "hex"):
            return obj.hex
        out: dict[str, Any] = {"type": type(obj).__name__}
        for f in dataclasses.fields(obj):
            out[f.name] = to_wire(getattr(obj, f.name))
        return out
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bytes):
        return base64.b64encode(obj).decode("ascii")
    if isinstance(obj, dict):
        return {str(k): to_wire(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_wire(v) for v in obj]
    return obj


def entry_to_wire(entry: TranscriptEntry) -> dict[str, Any]:
    return {
        "t_ms": entry.t_ms,
        "event": to_wire(entry.event),
        "actions": [to_wire(a) for a in entry.actions],
    }


def entries_to_jsonl(transcript: TrialTranscript) -> str:
    """The event log, one JSON object per line, LF endings."""
    lines = [
        json.dumps(entry_to_wire(e), sort_keys=True, ensure_ascii=False)
        for e in transcript.entries
    ]
    return "".join(line + "\n" for line in lines)


def summary(transcript: TrialTranscript) -> dict[str, Any]:
    """Trial summary as a JSON-ready dict."""
    action_counts: dict[str, int] = {}
    for entry in transcript.entries:
        for action in entry.actions:
            name = type(action).__name__
            action_counts[name] = action_counts.get(name, 0) + 1
    end = transcript.entries[-1].t_ms if transcript.entries else 0.0
    return {
        "test_id": transcript.test_id,
        "participant_id": transcript.participant_id,
        "n_events": len(transcript.entries),
        "duration_ms": end,
        "per_attempt_times_s": list(transcript.per_attempt_times_s),
        "errors": transcript.errors,
        "completed": transcript.completed,
        "aux": dict(sorted(transcript.aux.items())),
        "action_counts": dict(sorted(action_counts.items())),
    }
