// Wire types mirroring the session service's JSON schemas.

export interface LastReadView {
  uid: string;
  age_ms: number;
}

export interface StateView {
  mode: string;
  uid: string | null;
  label: string | null;
  elapsed_ms: number;
  age_ms: number;
  last_read: LastReadView | null;
}

export interface SessionView {
  session_id: string;
  clock_ms: number;
  state: StateView;
  bindings: number;
  next_seq: number;
}

export type EventKind = "session" | "read" | "action" | "state";

export interface FeedEvent {
  seq: number;
  t_ms: number;
  kind: EventKind;
  data: Record<string, unknown>;
}

export interface InputResponse {
  session: SessionView;
  events: FeedEvent[];
}

export interface RectDoc {
  x_min_mm: number;
  y_min_mm: number;
  x_max_mm: number;
  y_max_mm: number;
}

export interface SceneObjectDoc {
  object_id: string;
  name: string;
  shape: string;
  color: string;
  material: string;
  x_mm: number;
  y_mm: number;
  tag: string | null;
}

export interface RegionDoc {
  region_id: number;
  bounds: RectDoc;
  tag: string;
}

export interface SceneDoc {
  extent: RectDoc;
  objects: SceneObjectDoc[];
  regions: RegionDoc[];
  setup?: number;
}

export interface Pose {
  x_mm: number;
  y_mm: number;
  facing_deg: number;
}

export interface CreateSessionOptions {
  setup?: number;
  scene_seed?: number;
  scene?: SceneDoc;
  prebind?: boolean;
  pose_dt_ms?: number;
}
