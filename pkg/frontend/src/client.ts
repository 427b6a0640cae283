// HTTP + WebSocket client for the session service.
//
// Subscriptions keep a seq cursor, so a reconnect (or the polling
// fallback) resumes exactly where the stream left off: every event is
// delivered once, in order, no matter how the transport behaves.

import type {
  CreateSessionOptions,
  FeedEvent,
  InputResponse,
  Pose,
  SceneDoc,
  SessionView,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export interface WebSocketLike {
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  close(): void;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

export type TransportStatus = "websocket" | "polling" | "closed";

export interface SubscribeHandlers {
  onEvent: (event: FeedEvent) => void;
  onStatus?: (status: TransportStatus) => void;
}

export interface Subscription {
  close(): void;
}

export interface ClientOptions {
  fetchFn?: typeof fetch;
  // null disables WebSocket entirely (polling only)
  webSocketFactory?: WebSocketFactory | null;
  pollIntervalMs?: number;
  reconnectDelayMs?: number;
}

const defaultWsFactory: WebSocketFactory = (url) =>
  new WebSocket(url) as unknown as WebSocketLike;

export class SessionClient {
  private fetchFn: typeof fetch;
  private wsFactory: WebSocketFactory | null;
  private pollIntervalMs: number;
  private reconnectDelayMs: number;

  constructor(public baseUrl: string, options: ClientOptions = {}) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = options.fetchFn ?? globalThis.fetch.bind(globalThis);
    this.wsFactory =
      options.webSocketFactory === undefined ? defaultWsFactory : options.webSocketFactory;
    this.pollIntervalMs = options.pollIntervalMs ?? 250;
    this.reconnectDelayMs = options.reconnectDelayMs ?? 500;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }

  createSession(options: CreateSessionOptions): Promise<SessionView> {
    return this.request("POST", "/sessions", options);
  }

  getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${id}`);
  }

  deleteSession(id: string): Promise<void> {
    return this.request("DELETE", `/sessions/${id}`);
  }

  scene(id: string): Promise<SceneDoc> {
    return this.request("GET", `/sessions/${id}/scene`);
  }

  pose(id: string, pose: Pose, dtMs?: number): Promise<InputResponse> {
    return this.request("POST", `/sessions/${id}/pose`, {
      x_mm: pose.x_mm,
      y_mm: pose.y_mm,
      facing_deg: pose.facing_deg,
      ...(dtMs === undefined ? {} : { dt_ms: dtMs }),
    });
  }

  button(id: string): Promise<InputResponse> {
    return this.request("POST", `/sessions/${id}/button`);
  }

  recording(id: string, label: string): Promise<InputResponse> {
    return this.request("POST", `/sessions/${id}/recording`, { label });
  }

  tick(id: string, dtMs: number): Promise<InputResponse> {
    return this.request("POST", `/sessions/${id}/tick`, { dt_ms: dtMs });
  }

  events(id: string, since: number): Promise<{ events: FeedEvent[]; next_since: number }> {
    return this.request("GET", `/sessions/${id}/events?since=${since}`);
  }

  streamUrl(id: string, since: number): string {
    const ws = this.baseUrl.replace(/^http/, "ws");
    return `${ws}/sessions/${id}/stream?since=${since}`;
  }

  subscribe(id: string, since: number, handlers: SubscribeHandlers): Subscription {
    let cursor = since;
    let closed = false;
    let socket: WebSocketLike | null = null;
    let timer: ReturnType<typeof setTimeout> | null = null;
    let polling = false;

    const deliver = (event: FeedEvent) => {
      if (closed) return;
      if (event.seq > cursor) {
        cursor = event.seq;
        handlers.onEvent(event);
      }
    };

    const startPolling = () => {
      if (closed || polling) return;
      polling = true;
      handlers.onStatus?.("polling");
      const poll = async () => {
        if (closed) return;
        try {
          const page = await this.events(id, cursor);
          page.events.forEach(deliver);
        } catch {
          // transient failure: keep the cursor, try again next round
        }
        if (!closed) timer = setTimeout(poll, this.pollIntervalMs);
      };
      void poll();
    };

    const startWebSocket = () => {
      if (closed) return;
      if (!this.wsFactory) {
        startPolling();
        return;
      }
      let sawTraffic = false;
      try {
        socket = this.wsFactory(this.streamUrl(id, cursor));
      } catch {
        startPolling();
        return;
      }
      socket.onopen = () => {
        sawTraffic = true;
        handlers.onStatus?.("websocket");
      };
      socket.onmessage = (ev) => {
        sawTraffic = true;
        deliver(JSON.parse(String(ev.data)) as FeedEvent);
      };
      socket.onerror = () => {
        // the close handler decides what to do next
      };
      socket.onclose = () => {
        socket = null;
        if (closed) return;
        if (sawTraffic) {
          timer = setTimeout(startWebSocket, this.reconnectDelayMs);
        } else {
          startPolling(); // endpoint refused: likely no ws support on the path
        }
      };
    };

    startWebSocket();

    return {
      close: () => {
        closed = true;
        if (timer !== null) clearTimeout(timer);
        socket?.close();
        handlers.onStatus?.("closed");
      },
    };
  }
}
