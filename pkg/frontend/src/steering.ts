// Keyboard steering for the hand marker.
//
// Arrow keys / WASD translate, Q and E rotate. step() integrates the
// held keys over the elapsed interval and returns the new pose, or
// null when nothing is held so an idle hand produces no traffic.

import type { Pose, RectDoc } from "./types.js";

export interface SteeringConfig {
  speedMmPerS: number;
  turnDegPerS: number;
}

const DEFAULTS: SteeringConfig = { speedMmPerS: 150, turnDegPerS: 90 };

const KEY_VECTORS: Record<string, [number, number]> = {
  ArrowUp: [0, 1],
  KeyW: [0, 1],
  ArrowDown: [0, -1],
  KeyS: [0, -1],
  ArrowLeft: [-1, 0],
  KeyA: [-1, 0],
  ArrowRight: [1, 0],
  KeyD: [1, 0],
};

const KEY_TURNS: Record<string, number> = {
  KeyQ: 1,
  KeyE: -1,
};

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

export class Steering {
  pose: Pose;
  private config: SteeringConfig;
  private held = new Set<string>();
  private bounds: RectDoc | null = null;

  constructor(start: Pose, config: Partial<SteeringConfig> = {}) {
    this.pose = { ...start };
    this.config = { ...DEFAULTS, ...config };
  }

  /** Poses from step() stay inside this rectangle. */
  clampTo(bounds: RectDoc): void {
    this.bounds = bounds;
  }

  keyDown(code: string): boolean {
    if (!(code in KEY_VECTORS) && !(code in KEY_TURNS)) return false;
    this.held.add(code);
    return true;
  }

  keyUp(code: string): boolean {
    return this.held.delete(code);
  }

  releaseAll(): void {
    this.held.clear();
  }

  step(dtMs: number): Pose | null {
    let dx = 0;
    let dy = 0;
    let turn = 0;
    for (const code of this.held) {
      const vec = KEY_VECTORS[code];
      if (vec) {
        dx += vec[0];
        dy += vec[1];
      }
      turn += KEY_TURNS[code] ?? 0;
    }
    if (dx === 0 && dy === 0 && turn === 0) return null;

    const dt = dtMs / 1000;
    const norm = Math.hypot(dx, dy) || 1;
    let x = this.pose.x_mm + (dx / norm) * this.config.speedMmPerS * dt;
    let y = this.pose.y_mm + (dy / norm) * this.config.speedMmPerS * dt;
    if (this.bounds) {
      x = clamp(x, this.bounds.x_min_mm, this.bounds.x_max_mm);
      y = clamp(y, this.bounds.y_min_mm, this.bounds.y_max_mm);
    }
    const facing = (((this.pose.facing_deg + turn * this.config.turnDegPerS * dt) % 360) + 360) % 360;
    this.pose = { x_mm: x, y_mm: y, facing_deg: facing };
    return { ...this.pose };
  }
}
