"""HTTP/WebSocket surface of the session service.

Commands are JSON over HTTP; the event stream is one JSON object per
WebSocket message.  ``GET /sessions/{id}/events`` serves the same log
for clients that poll instead: everything on the stream is in the log.

Error mapping: unknown session ids are 404, anything wrong with a body
(unknown fields, bad types, bad scenario documents) is 400.
"""

from __future__ import annotations

import asyncio
import base64
import binascii
from typing import Any

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ..device import DeviceConfig
from ..scene import SceneError, build_setup, scene_from_dict, scene_to_dict
from .schemas import (
    CreateSessionRequest,
    EventsResponse,
    HealthResponse,
    InputResponse,
    PoseRequest,
    RecordingRequest,
    SessionView,
    TickRequest,
)
from .sessions import Session, SessionNotFound, SessionRegistry

_STREAM_KEEPALIVE_S = 20.0


def create_app() -> FastAPI:
    app = FastAPI(title="glove session service", docs_url=None, redoc_url=None)
    # browser clients are served from their own origin (static files)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = SessionRegistry()
    app.state.registry = registry

    @app.exception_handler(RequestValidationError)
    async def bad_body(request: Request, exc: RequestValidationError) -> JSONResponse:
        # keep only the serializable parts of each error
        detail = [
            {"loc": list(e.get("loc", ())), "msg": e.get("msg", ""), "type": e.get("type", "")}
            for e in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.exception_handler(SessionNotFound)
    async def no_session(request: Request, exc: SessionNotFound) -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": "unknown session"})

    def input_response(session: Session, events: list[dict[str, Any]]) -> InputResponse:
        return InputResponse(session=session.session_view(), events=events)

    @app.get("/healthz", response_model=HealthResponse)
    async def healthz() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.post("/sessions", response_model=SessionView, status_code=201)
    async def create_session(body: CreateSessionRequest) -> Any:
        if body.scene is not None:
            try:
                scene = scene_from_dict(body.scene)
            except SceneError as exc:
                return JSONResponse(status_code=400, content={"detail": str(exc)})
        else:
            scene = build_setup(body.setup, body.scene_seed)
        cfg = DeviceConfig(
            record_duration_ms=body.record_duration_ms,
            context_timeout_ms=body.context_timeout_ms,
            playback_preemptible=body.playback_preemptible,
        )
        session = registry.create(scene, cfg, body.pose_dt_ms, body.prebind)
        return session.session_view()

    @app.get("/sessions/{session_id}", response_model=SessionView)
    async def get_session(session_id: str) -> Any:
        return registry.get(session_id).session_view()

    @app.delete("/sessions/{session_id}", status_code=204)
    async def delete_session(session_id: str) -> None:
        await registry.remove(session_id)

    @app.get("/sessions/{session_id}/scene")
    async def get_scene(session_id: str) -> Any:
        return scene_to_dict(registry.get(session_id).scene)

    @app.post("/sessions/{session_id}/pose", response_model=InputResponse)
    async def post_pose(session_id: str, body: PoseRequest) -> InputResponse:
        session = registry.get(session_id)
        events = await session.apply_pose(body.x_mm, body.y_mm, body.facing_deg, body.dt_ms)
        return input_response(session, events)

    @app.post("/sessions/{session_id}/button", response_model=InputResponse)
    async def post_button(session_id: str) -> InputResponse:
        session = registry.get(session_id)
        events = await session.apply_button()
        return input_response(session, events)

    @app.post("/sessions/{session_id}/recording", response_model=InputResponse)
    async def post_recording(session_id: str, body: RecordingRequest) -> Any:
        session = registry.get(session_id)
        try:
            payload = base64.b64decode(body.payload_b64, validate=True)
        except binascii.Error:
            return JSONResponse(status_code=400, content={"detail": "payload_b64 is not base64"})
        events = await session.apply_recording(body.label, payload)
        return input_response(session, events)

    @app.post("/sessions/{session_id}/tick", response_model=InputResponse)
    async def post_tick(session_id: str, body: TickRequest) -> InputResponse:
        session = registry.get(session_id)
        events = await session.apply_tick(body.dt_ms)
        return input_response(session, events)

    @app.get("/sessions/{session_id}/events", response_model=EventsResponse)
    async def get_events(session_id: str, since: int = 0) -> Any:
        session = registry.get(session_id)
        events = session.events_after(since)
        next_since = events[-1]["seq"] if events else since
        return {"events": events, "next_since": next_since}

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str, since: int = 0) -> None:
        try:
            session = registry.get(session_id)
        except SessionNotFound:
            await websocket.close(code=4404)
            return
        await websocket.accept()

        gone = asyncio.Event()

        async def watch_disconnect() -> None:
            # the stream is server-push; the only inbound frame we expect is the close
            try:
                while True:
                    message = await websocket.receive()
                    if message["type"] == "websocket.disconnect":
                        break
            finally:
                gone.set()
                async with session.changed:
                    session.changed.notify_all()

        watcher = asyncio.create_task(watch_disconnect())
        seq = since
        try:
            while not gone.is_set():
                batch = session.events_after(seq)
                if batch:
                    for event in batch:
                        await websocket.send_json(event)
                        seq = event["seq"]
                    continue
                if session.closed:
                    break
                async with session.changed:
                    if gone.is_set() or session.closed or session.events_after(seq):
                        continue
                    try:
                        await asyncio.wait_for(
                            session.changed.wait(), timeout=_STREAM_KEEPALIVE_S
                        )
                    except asyncio.TimeoutError:
                        pass
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            watcher.cancel()

    return app
