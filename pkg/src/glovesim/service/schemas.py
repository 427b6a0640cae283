"""Request/response bodies for the session service.

All bodies are strict: unknown fields are rejected, which turns client
typos into 400s instead of silent drops.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CreateSessionRequest(StrictModel):
    """Start a session from a built-in setup or an inline scenario."""

    setup: Optional[int] = Field(default=None, ge=1, le=4)
    scene_seed: int = 0
    scene: Optional[dict[str, Any]] = None
    prebind: bool = False
    record_duration_ms: int = Field(default=3000, gt=0)
    context_timeout_ms: int = Field(default=10000, ge=0)
    playback_preemptible: bool = True
    pose_dt_ms: int = Field(default=100, gt=0)

    @model_validator(mode="after")
    def _one_source(self) -> "CreateSessionRequest":
        if (self.setup is None) == (self.scene is None):
            raise ValueError("provide exactly one of 'setup' or 'scene'")
        return self


class PoseRequest(StrictModel):
    x_mm: float
    y_mm: float
    facing_deg: float = 0.0
    dt_ms: Optional[int] = Field(default=None, gt=0)


class RecordingRequest(StrictModel):
    label: str
    payload_b64: str = ""


class TickRequest(StrictModel):
    dt_ms: int = Field(gt=0)


class LastReadView(StrictModel):
    uid: str
    age_ms: int


class StateView(StrictModel):
    mode: str
    uid: Optional[str] = None
    label: Optional[str] = None
    elapsed_ms: int = 0
    age_ms: int = 0
    last_read: Optional[LastReadView] = None


class SessionView(StrictModel):
    session_id: str
    clock_ms: float
    state: StateView
    bindings: int
    next_seq: int


class EventView(StrictModel):
    seq: int
    t_ms: float
    kind: str
    data: dict[str, Any]


class InputResponse(StrictModel):
    """State after one input, plus the events that input generated."""

    session: SessionView
    events: list[EventView]


class EventsResponse(StrictModel):
    events: list[EventView]
    next_since: int


class HealthResponse(StrictModel):
    status: str
