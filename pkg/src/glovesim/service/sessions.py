"""Session state and the per-session serialization discipline.

One :class:`Session` owns one device, one database, one scene, and an
append-only event log.  Every mutation happens under the session's
condition lock, so concurrent HTTP requests against the same session
serialize; distinct sessions never share state.  The condition doubles
as the wake-up signal for event-stream subscribers.

Event kinds on the log:

    session   lifecycle marker (created, closed)
    read      a scan attempt: the locked-on tag or ``{"uid": null}``
    action    one device action, in emission order
    state     mode transition observed after an input
"""

from __future__ import annotations

import asyncio
import secrets
from typing import Any, Optional

from ..device import (
    ButtonDown,
    DeviceConfig,
    DeviceState,
    Event,
    IDLE,
    Mode,
    RecordingInput,
    TagRead,
    Tick,
)
from ..device import step as device_step
from ..rfmodel import HandPose, RfParams, scan
from ..scene import Scene
from ..tagdb import TagDatabase, make_clip
from ..transcript import to_wire


class SessionNotFound(KeyError):
    pass


class Session:
    def __init__(
        self,
        session_id: str,
        scene: Scene,
        cfg: DeviceConfig,
        pose_dt_ms: int,
        prebind: bool,
        rf: RfParams = RfParams(),
    ) -> None:
        self.session_id = session_id
        self.scene = scene
        self.cfg = cfg
        self.rf = rf
        self.pose_dt_ms = pose_dt_ms
        self.db = TagDatabase()
        if prebind:
            for uid, label in scene.labels_by_uid().items():
                self.db.bind(uid, make_clip(label, duration_ms=1000))
        self.state: DeviceState = IDLE
        self.clock_ms: float = 0.0
        self.events: list[dict[str, Any]] = []
        self.changed = asyncio.Condition()
        self.closed = False
        self._record("session", {"status": "created"})

    # -- event log (call under the condition lock, or before first await) ----

    def _record(self, kind: str, data: dict[str, Any]) -> dict[str, Any]:
        event = {
            "seq": len(self.events) + 1,
            "t_ms": self.clock_ms,
            "kind": kind,
            "data": data,
        }
        self.events.append(event)
        return event

    def events_after(self, seq: int) -> list[dict[str, Any]]:
        # seqs are 1..N and dense: slice instead of scanning
        return self.events[max(seq, 0):]

    # -- device plumbing ------------------------------------------------------

    def _feed(self, event: Event) -> None:
        """Advance clock, step the device, log actions and transitions."""
        if isinstance(event, Tick):
            self.clock_ms += event.dt_ms
        elif isinstance(event, TagRead):
            self.clock_ms += event.latency_ms
        before = self.state.mode
        self.state, actions, self.db = device_step(self.state, event, self.db, self.cfg)
        for action in actions:
            self._record("action", to_wire(action))
        if self.state.mode != before:
            self._record(
                "state",
                {
                    "mode": self.state.mode.value,
                    "uid": self.state.uid.hex if self.state.uid else None,
                },
            )

    async def apply_pose(
        self, x_mm: float, y_mm: float, facing_deg: float, dt_ms: Optional[int]
    ) -> list[dict[str, Any]]:
        async with self.changed:
            start = len(self.events)
            self._feed(Tick(dt_ms or self.pose_dt_ms))
            if self.state.mode is not Mode.RECORDING:  # antenna is off while recording
                result = scan(HandPose(x_mm, y_mm, facing_deg), self.scene.tag_placements(), self.rf)
                if result is None:
                    self._record("read", {"uid": None})
                else:
                    self._record(
                        "read",
                        {
                            "uid": result.uid.hex,
                            "distance_mm": result.distance_mm,
                            "offset_deg": result.offset_deg,
                            "latency_ms": result.latency_ms,
                            "gain_dbi": result.gain_dbi,
                        },
                    )
                    self._feed(TagRead(result.uid, latency_ms=result.latency_ms))
            self.changed.notify_all()
            return self.events[start:]

    async def apply_button(self) -> list[dict[str, Any]]:
        async with self.changed:
            start = len(self.events)
            self._feed(ButtonDown())
            self.changed.notify_all()
            return self.events[start:]

    async def apply_recording(self, label: str, payload: bytes) -> list[dict[str, Any]]:
        async with self.changed:
            start = len(self.events)
            self._feed(RecordingInput(label=label, payload=payload))
            self.changed.notify_all()
            return self.events[start:]

    async def apply_tick(self, dt_ms: int) -> list[dict[str, Any]]:
        async with self.changed:
            start = len(self.events)
            self._feed(Tick(dt_ms))
            self.changed.notify_all()
            return self.events[start:]

    async def close(self) -> None:
        async with self.changed:
            self.closed = True
            self._record("session", {"status": "closed"})
            self.changed.notify_all()

    # -- views (reads of immutable snapshots; safe without the lock) ---------

    def state_view(self) -> dict[str, Any]:
        s = self.state
        view: dict[str, Any] = {
            "mode": s.mode.value,
            "uid": s.uid.hex if s.uid else None,
            "label": s.clip.label if s.clip else None,
            "elapsed_ms": s.elapsed_ms,
            "age_ms": s.age_ms,
            "last_read": None,
        }
        if s.last_read is not None:
            view["last_read"] = {"uid": s.last_read.uid.hex, "age_ms": s.last_read.age_ms}
        return view

    def session_view(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "clock_ms": self.clock_ms,
            "state": self.state_view(),
            "bindings": len(self.db.bindings()),
            "next_seq": len(self.events),
        }


class SessionRegistry:
    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}

    def create(
        self,
        scene: Scene,
        cfg: DeviceConfig,
        pose_dt_ms: int,
        prebind: bool,
    ) -> Session:
        session_id = secrets.token_hex(8)
        session = Session(session_id, scene, cfg, pose_dt_ms, prebind)
        self._sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise SessionNotFound(session_id) from None

    async def remove(self, session_id: str) -> None:
        session = self.get(session_id)
        del self._sessions[session_id]
        await session.close()
