"""Control loop of the glove: an event-driven finite state machine.

Modes and the one-button interaction model:

    DETECT       idle, reader polling for tags
    PROMPT_NEW   an unbound tag was read; waiting for the record button
    RECORDING    capturing audio for a tag; stores on completion
    PLAYBACK     playing the clip bound to the tag just read

Reading a bound tag plays its clip and arms a short-lived *read context*
(``last_read``).  While that context is fresh, the button means "replace
this tag's recording": the old binding is deleted and a new capture
starts.  Reading an unbound tag prompts instead, and the button starts
the first capture.  Time enters only through ``Tick`` events, so the
machine is a pure function of its inputs and runs identically anywhere.

``step`` applies ``StoreBinding``/``DeleteBinding`` effects to the given
database itself; the returned action list is the observable record of
what happened (playback requests, prompts, stored clips).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import NamedTuple, Union

from .tagdb import AudioClip, PersistenceError, TagDatabase, TagUid, make_clip
from .transcript import TranscriptEntry, TrialTranscript

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    DETECT = "DETECT"
    PROMPT_NEW = "PROMPT_NEW"
    RECORDING = "RECORDING"
    PLAYBACK = "PLAYBACK"


@dataclass(frozen=True)
class DeviceConfig:
    record_duration_ms: int = 3000
    context_timeout_ms: int = 10000
    playback_preemptible: bool = True

    def __post_init__(self) -> None:
        if self.record_duration_ms <= 0:
            raise ValueError("record_duration_ms must be positive")
        if self.context_timeout_ms < 0:
            raise ValueError("context_timeout_ms must be >= 0")


# --- events ------------------------------------------------------------------


@dataclass(frozen=True)
class TagRead:
    uid: TagUid
    latency_ms: float = 0.0


@dataclass(frozen=True)
class ButtonDown:
    pass


@dataclass(frozen=True)
class RecordingInput:
    label: str
    payload: bytes = b""


@dataclass(frozen=True)
class Tick:
    dt_ms: int

    def __post_init__(self) -> None:
        if self.dt_ms <= 0:
            raise ValueError("dt_ms must be positive")


Event = Union[TagRead, ButtonDown, RecordingInput, Tick]


# --- actions -----------------------------------------------------------------


@dataclass(frozen=True)
class NotifyNewTag:
    uid: TagUid


@dataclass(frozen=True)
class StartRecording:
    uid: TagUid


@dataclass(frozen=True)
class StoreBinding:
    uid: TagUid
    clip: AudioClip


@dataclass(frozen=True)
class PlayClip:
    uid: TagUid
    clip: AudioClip


@dataclass(frozen=True)
class DeleteBinding:
    uid: TagUid


DeviceAction = Union[NotifyNewTag, StartRecording, StoreBinding, PlayClip, DeleteBinding]


# --- state -------------------------------------------------------------------


@dataclass(frozen=True)
class ReadContext:
    """Most recent bound-tag read; ages on ticks and expires."""

    uid: TagUid
    age_ms: int = 0


@dataclass(frozen=True)
class DeviceState:
    mode: Mode = Mode.DETECT
    uid: TagUid | None = None          # target of PROMPT_NEW / RECORDING / PLAYBACK
    clip: AudioClip | None = None      # playing clip while in PLAYBACK
    elapsed_ms: int = 0                # progress through RECORDING / PLAYBACK
    age_ms: int = 0                    # age of a PROMPT_NEW prompt
    pending_label: str | None = None   # held RecordingInput, stored on completion
    pending_payload: bytes = b""
    last_read: ReadContext | None = None


IDLE = DeviceState()


class StoreBindingError(RuntimeError):
    """A completed recording could not be stored.

    Carries ``state``: the DETECT state the device falls back to, so a
    driver can keep running after surfacing the failure.
    """

    def __init__(self, message: str, state: DeviceState) -> None:
        super().__init__(message)
        self.state = state


class StepResult(NamedTuple):
    state: DeviceState
    actions: tuple[DeviceAction, ...]
    db: TagDatabase


def step(
    state: DeviceState,
    event: Event,
    db: TagDatabase,
    cfg: DeviceConfig = DeviceConfig(),
) -> StepResult:
    """Advance the machine by one event.

    Deterministic in (state, event, db contents, cfg).  Database effects
    (delete on replace, store on recording completion) are applied to
    ``db`` and mirrored in the returned actions.

    Raises:
        StoreBindingError: the database rejected a completed recording;
            the exception carries the DETECT fallback state.
    """
    if isinstance(event, TagRead):
        return _on_tag_read(state, event.uid, db, cfg)
    if isinstance(event, ButtonDown):
        return _on_button(state, db, cfg)
    if isinstance(event, RecordingInput):
        return _on_recording_input(state, event, db)
    if isinstance(event, Tick):
        return _on_tick(state, event.dt_ms, db, cfg)
    raise TypeError(f"unknown event {event!r}")


def _detect_read(state: DeviceState, uid: TagUid, db: TagDatabase) -> StepResult:
    """Shared handling of a read from detection (or a preempting read)."""
    clip = db.lookup(uid)
    if clip is not None:
        new = replace(
            state,
            mode=Mode.PLAYBACK,
            uid=uid,
            clip=clip,
            elapsed_ms=0,
            age_ms=0,
            last_read=ReadContext(uid, 0),
        )
        return StepResult(new, (PlayClip(uid, clip),), db)
    # unknown tag: prompt; the existing read context is left as-is
    new = replace(state, mode=Mode.PROMPT_NEW, uid=uid, clip=None, elapsed_ms=0, age_ms=0)
    return StepResult(new, (NotifyNewTag(uid),), db)


def _on_tag_read(state: DeviceState, uid: TagUid, db: TagDatabase, cfg: DeviceConfig) -> StepResult:
    if state.mode is Mode.RECORDING:
        return StepResult(state, (), db)  # reader is busy capturing
    if state.mode is Mode.PLAYBACK:
        if uid == state.uid:
            # same tag re-read: refresh the context, keep playing
            return StepResult(replace(state, last_read=ReadContext(uid, 0)), (), db)
        if not cfg.playback_preemptible:
            return StepResult(state, (), db)
        return _detect_read(state, uid, db)
    if state.mode is Mode.PROMPT_NEW:
        if uid == state.uid:
            # same unknown tag again: refresh the prompt, no second notify
            return StepResult(replace(state, age_ms=0), (), db)
        return _detect_read(state, uid, db)
    return _detect_read(state, uid, db)


def _on_button(state: DeviceState, db: TagDatabase, cfg: DeviceConfig) -> StepResult:
    if state.mode is Mode.PROMPT_NEW:
        assert state.uid is not None
        new = replace(
            state,
            mode=Mode.RECORDING,
            elapsed_ms=0,
            age_ms=0,
            pending_label=None,
            pending_payload=b"",
        )
        return StepResult(new, (StartRecording(state.uid),), db)
    if state.mode is Mode.RECORDING:
        return StepResult(state, (), db)
    # DETECT or PLAYBACK: replace flow when a fresh read context exists
    ctx = state.last_read
    if ctx is not None and ctx.age_ms < cfg.context_timeout_ms:
        db.remove(ctx.uid)
        new = replace(
            state,
            mode=Mode.RECORDING,
            uid=ctx.uid,
            clip=None,
            elapsed_ms=0,
            age_ms=0,
            pending_label=None,
            pending_payload=b"",
        )
        return StepResult(new, (DeleteBinding(ctx.uid), StartRecording(ctx.uid)), db)
    return StepResult(state, (), db)  # no context: nothing to act on


def _on_recording_input(state: DeviceState, event: RecordingInput, db: TagDatabase) -> StepResult:
    if state.mode is not Mode.RECORDING:
        logger.debug("recording input outside RECORDING ignored: %r", event.label)
        return StepResult(state, (), db)
    new = replace(state, pending_label=event.label, pending_payload=event.payload)
    return StepResult(new, (), db)


def _age_context(ctx: ReadContext | None, dt_ms: int, cfg: DeviceConfig) -> ReadContext | None:
    if ctx is None:
        return None
    age = ctx.age_ms + dt_ms
    if age >= cfg.context_timeout_ms:
        return None
    return ReadContext(ctx.uid, age)


def _on_tick(state: DeviceState, dt_ms: int, db: TagDatabase, cfg: DeviceConfig) -> StepResult:
    ctx = _age_context(state.last_read, dt_ms, cfg)

    if state.mode is Mode.PROMPT_NEW:
        age = state.age_ms + dt_ms
        if age >= cfg.context_timeout_ms:
            return StepResult(
                replace(IDLE, last_read=ctx), (), db
            )
        return StepResult(replace(state, age_ms=age, last_read=ctx), (), db)

    if state.mode is Mode.RECORDING:
        assert state.uid is not None
        elapsed = state.elapsed_ms + dt_ms
        if elapsed < cfg.record_duration_ms:
            return StepResult(replace(state, elapsed_ms=elapsed, last_read=ctx), (), db)
        clip = make_clip(
            label=state.pending_label or "",
            payload=state.pending_payload,
            duration_ms=cfg.record_duration_ms,
        )
        fallback = replace(IDLE, last_read=ctx)
        try:
            db.bind(state.uid, clip)
        except PersistenceError as exc:
            raise StoreBindingError(str(exc), fallback) from exc
        return StepResult(fallback, (StoreBinding(state.uid, clip),), db)

    if state.mode is Mode.PLAYBACK:
        assert state.clip is not None
        elapsed = state.elapsed_ms + dt_ms
        if elapsed < state.clip.duration_ms:
            return StepResult(replace(state, elapsed_ms=elapsed, last_read=ctx), (), db)
        return StepResult(replace(IDLE, last_read=ctx), (), db)  # no completion cue

    return StepResult(replace(state, last_read=ctx), (), db)


def run_script(
    events: list[Event],
    cfg: DeviceConfig = DeviceConfig(),
    db: TagDatabase | None = None,
) -> tuple[TrialTranscript, TagDatabase]:
    """Replay an event list from idle, recording a transcript.

    The logical clock advances with every Tick and with each TagRead's
    scan latency; button and recording inputs are instantaneous.
    """
    if db is None:
        db = TagDatabase()
    state = IDLE
    clock_ms = 0.0
    transcript = TrialTranscript()
    for event in events:
        if isinstance(event, Tick):
            clock_ms += event.dt_ms
        elif isinstance(event, TagRead):
            clock_ms += event.latency_ms
        state, actions, db = step(state, event, db, cfg)
        transcript.entries.append(TranscriptEntry(t_ms=clock_ms, event=event, actions=actions))
    return transcript, db
