// View-state reducer over the session event stream.
//
// The server log is the source of truth; this module folds it into
// what the screen shows. applyEvent is pure, EventFeed adds the seq
// bookkeeping (dedupe on reconnect, bounded history).

import type { FeedEvent } from "./types.js";

export interface Toast {
  text: string;
  tMs: number;
}

export interface ViewState {
  mode: string;
  lastReadUid: string | null;
  promptUid: string | null;
  recording: boolean;
  playingLabel: string | null;
  storedCount: number;
  toasts: Toast[];
}

const MAX_TOASTS = 6;

export function initialView(): ViewState {
  return {
    mode: "DETECT",
    lastReadUid: null,
    promptUid: null,
    recording: false,
    playingLabel: null,
    storedCount: 0,
    toasts: [],
  };
}

function withToast(view: ViewState, text: string, tMs: number): ViewState {
  const toasts = [...view.toasts, { text, tMs }].slice(-MAX_TOASTS);
  return { ...view, toasts };
}

function applyAction(view: ViewState, data: Record<string, unknown>, tMs: number): ViewState {
  const uid = typeof data.uid === "string" ? data.uid : "";
  switch (data.type) {
    case "NotifyNewTag":
      return withToast({ ...view, promptUid: uid }, `unknown tag ${uid}`, tMs);
    case "StartRecording":
      return withToast(view, `recording for ${uid}`, tMs);
    case "StoreBinding": {
      const clip = data.clip as { label?: unknown } | undefined;
      const label = typeof clip?.label === "string" ? clip.label : "";
      const next = { ...view, storedCount: view.storedCount + 1 };
      return withToast(next, `stored "${label}"`, tMs);
    }
    case "PlayClip": {
      const clip = data.clip as { label?: unknown } | undefined;
      const label = typeof clip?.label === "string" ? clip.label : "";
      return withToast({ ...view, playingLabel: label }, `playing "${label}"`, tMs);
    }
    case "DeleteBinding":
      return withToast(view, `replacing ${uid}`, tMs);
    default:
      return view;
  }
}

export function applyEvent(view: ViewState, event: FeedEvent): ViewState {
  const data = event.data;
  switch (event.kind) {
    case "read": {
      const uid = typeof data.uid === "string" ? data.uid : null;
      return { ...view, lastReadUid: uid };
    }
    case "action":
      return applyAction(view, data, event.t_ms);
    case "state": {
      const mode = typeof data.mode === "string" ? data.mode : view.mode;
      return {
        ...view,
        mode,
        recording: mode === "RECORDING",
        promptUid: mode === "PROMPT_NEW" ? view.promptUid : null,
      };
    }
    default:
      return view;
  }
}

export class EventFeed {
  view: ViewState = initialView();
  events: FeedEvent[] = [];
  private maxEvents: number;

  constructor(maxEvents = 500) {
    this.maxEvents = maxEvents;
  }

  get cursor(): number {
    const last = this.events[this.events.length - 1];
    return last === undefined ? 0 : last.seq;
  }

  /** Returns false for duplicates and out-of-order arrivals. */
  push(event: FeedEvent): boolean {
    if (event.seq <= this.cursor) return false;
    this.events.push(event);
    if (this.events.length > this.maxEvents) {
      this.events.splice(0, this.events.length - this.maxEvents);
    }
    this.view = applyEvent(this.view, event);
    return true;
  }

  seqs(): number[] {
    return this.events.map((e) => e.seq);
  }
}
