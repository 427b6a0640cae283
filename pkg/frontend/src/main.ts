// Page wiring: connect form, steering loop, record controls, event feed.

import { ApiError, SessionClient, Subscription, TransportStatus } from "./client.js";
import { EventFeed } from "./feed.js";
import { drawScene } from "./render.js";
import { speakIfAvailable } from "./speech.js";
import { Steering } from "./steering.js";
import type { FeedEvent, SceneDoc } from "./types.js";

const STEP_MS = 100;

const serverInput = document.getElementById("server") as HTMLInputElement;
const setupSelect = document.getElementById("setup") as HTMLSelectElement;
const connectButton = document.getElementById("connect") as HTMLButtonElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const transportBadge = document.getElementById("transport") as HTMLSpanElement;
const modeBadge = document.getElementById("mode") as HTMLSpanElement;
const playingLine = document.getElementById("playing") as HTMLDivElement;
const lastReadLine = document.getElementById("last-read") as HTMLDivElement;
const recordButton = document.getElementById("record") as HTMLButtonElement;
const labelForm = document.getElementById("label-form") as HTMLFormElement;
const labelInput = document.getElementById("label") as HTMLInputElement;
const submitButton = document.getElementById("submit-label") as HTMLButtonElement;
const feedList = document.getElementById("feed") as HTMLUListElement;
const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d") as CanvasRenderingContext2D;

let client: SessionClient | null = null;
let sessionId = "";
let scene: SceneDoc | null = null;
let steering: Steering | null = null;
let feed = new EventFeed();
let subscription: Subscription | null = null;
let stepTimer: ReturnType<typeof setInterval> | null = null;
let busy = false;

function showBanner(text: string): void {
  banner.textContent = text;
  banner.hidden = text === "";
}

function describe(event: FeedEvent): string {
  const d = event.data;
  switch (event.kind) {
    case "session":
      return `session ${String(d.status ?? "")}`;
    case "read":
      return d.uid === null ? "read: nothing in range" : `read ${String(d.uid)}`;
    case "action": {
      const clip = d.clip as { label?: unknown } | undefined;
      const label = typeof clip?.label === "string" ? ` "${clip.label}"` : "";
      return `${String(d.type)}${label}`;
    }
    case "state":
      return `mode ${String(d.mode)}`;
    default:
      return event.kind;
  }
}

function redraw(): void {
  if (scene && steering) {
    drawScene(ctx, scene, steering.pose, feed.view.lastReadUid);
  }
  const view = feed.view;
  modeBadge.textContent = view.mode;
  modeBadge.dataset.mode = view.mode;
  playingLine.textContent = view.playingLabel === null ? "" : `last clip: "${view.playingLabel}"`;
  lastReadLine.textContent =
    view.lastReadUid === null ? "no tag in range" : `tag in range: ${view.lastReadUid}`;
  recordButton.disabled = client === null;
  submitButton.disabled = !view.recording;
  labelInput.placeholder = view.recording ? "name this object" : "press record over a tag first";

  feedList.replaceChildren(
    ...feed.events.slice(-14).map((event) => {
      const item = document.createElement("li");
      item.textContent = `#${event.seq}  ${(event.t_ms / 1000).toFixed(1)}s  ${describe(event)}`;
      return item;
    }),
  );
}

function onEvent(event: FeedEvent): void {
  if (!feed.push(event)) return;
  if (event.kind === "action" && event.data.type === "PlayClip") {
    const clip = event.data.clip as { label?: unknown } | undefined;
    if (typeof clip?.label === "string") speakIfAvailable(clip.label);
  }
  redraw();
}

function onStatus(status: TransportStatus): void {
  transportBadge.textContent = status;
}

async function stepLoop(): Promise<void> {
  if (!client || !steering || busy) return;
  const pose = steering.step(STEP_MS);
  busy = true;
  try {
    if (pose) {
      await client.pose(sessionId, pose);
    } else if (feed.view.mode !== "DETECT") {
      // idle but mid-recording/playback: let session time keep moving
      await client.tick(sessionId, STEP_MS);
    }
  } catch (err) {
    showBanner(err instanceof Error ? err.message : String(err));
  } finally {
    busy = false;
  }
  if (pose) redraw();
}

function teardown(): void {
  subscription?.close();
  subscription = null;
  if (stepTimer !== null) clearInterval(stepTimer);
  stepTimer = null;
  client = null;
  scene = null;
  steering = null;
  feed = new EventFeed();
}

async function connect(): Promise<void> {
  teardown();
  showBanner("");
  connectButton.disabled = true;
  try {
    const base = serverInput.value.trim();
    const next = new SessionClient(base);
    await next.health();
    const session = await next.createSession({ setup: Number(setupSelect.value) });
    sessionId = session.session_id;
    scene = await next.scene(sessionId);
    const extent = scene.extent;
    steering = new Steering({
      x_mm: (extent.x_min_mm + extent.x_max_mm) / 2,
      y_mm: (extent.y_min_mm + extent.y_max_mm) / 2,
      facing_deg: 0,
    });
    steering.clampTo(extent);
    client = next;
    subscription = client.subscribe(sessionId, 0, { onEvent, onStatus });
    stepTimer = setInterval(() => void stepLoop(), STEP_MS);
    redraw();
  } catch (err) {
    const detail =
      err instanceof ApiError ? `server rejected the request (${err.status})` : String(err);
    showBanner(`connection failed: ${detail} - check the URL and retry`);
  } finally {
    connectButton.disabled = false;
  }
}

connectButton.addEventListener("click", () => void connect());

recordButton.addEventListener("click", () => {
  if (!client) return;
  client.button(sessionId).catch((err: unknown) => showBanner(String(err)));
  labelInput.focus();
});

labelForm.addEventListener("submit", (ev) => {
  ev.preventDefault();
  if (!client) return;
  const label = labelInput.value.trim();
  if (label === "") return;
  client.recording(sessionId, label).catch((err: unknown) => showBanner(String(err)));
  labelInput.value = "";
});

window.addEventListener("keydown", (ev) => {
  if (ev.target instanceof HTMLInputElement || ev.target instanceof HTMLSelectElement) return;
  if (steering?.keyDown(ev.code)) ev.preventDefault();
});

window.addEventListener("keyup", (ev) => {
  steering?.keyUp(ev.code);
});

window.addEventListener("blur", () => steering?.releaseAll());

redraw();
