import { describe, expect, test } from "vitest";

import { Steering } from "../src/steering.js";

const START = { x_mm: 100, y_mm: 100, facing_deg: 0 };

describe("Steering", () => {
  test("no held keys means no pose traffic", () => {
    const s = new Steering(START);
    expect(s.step(100)).toBeNull();
    expect(s.pose).toEqual(START);
  });

  test("arrow keys translate at the configured speed", () => {
    const s = new Steering(START, { speedMmPerS: 200 });
    expect(s.keyDown("ArrowUp")).toBe(true);
    const pose = s.step(1000);
    expect(pose).not.toBeNull();
    expect(pose?.x_mm).toBeCloseTo(100, 9);
    expect(pose?.y_mm).toBeCloseTo(300, 9);
  });

  test("wasd mirrors the arrows", () => {
    const arrows = new Steering(START);
    const wasd = new Steering(START);
    arrows.keyDown("ArrowLeft");
    wasd.keyDown("KeyA");
    expect(arrows.step(500)).toEqual(wasd.step(500));
  });

  test("diagonal motion is normalized", () => {
    const s = new Steering(START, { speedMmPerS: 100 });
    s.keyDown("ArrowUp");
    s.keyDown("ArrowRight");
    const pose = s.step(1000);
    const step = 100 / Math.SQRT2;
    expect(pose?.x_mm).toBeCloseTo(100 + step, 6);
    expect(pose?.y_mm).toBeCloseTo(100 + step, 6);
  });

  test("opposed keys cancel to no movement", () => {
    const s = new Steering(START);
    s.keyDown("ArrowUp");
    s.keyDown("ArrowDown");
    expect(s.step(100)).toBeNull();
  });

  test("q and e rotate and wrap modulo 360", () => {
    const s = new Steering(START, { turnDegPerS: 90 });
    s.keyDown("KeyQ");
    expect(s.step(500)?.facing_deg).toBeCloseTo(45, 9);
    s.keyUp("KeyQ");
    s.keyDown("KeyE");
    expect(s.step(1000)?.facing_deg).toBeCloseTo(315, 9);
  });

  test("poses clamp to the configured bounds", () => {
    const s = new Steering({ x_mm: 90, y_mm: 90, facing_deg: 0 }, { speedMmPerS: 400 });
    s.clampTo({ x_min_mm: 0, y_min_mm: 0, x_max_mm: 100, y_max_mm: 100 });
    s.keyDown("ArrowUp");
    s.keyDown("ArrowRight");
    const pose = s.step(2000);
    expect(pose?.x_mm).toBe(100);
    expect(pose?.y_mm).toBe(100);
  });

  test("release stops movement", () => {
    const s = new Steering(START);
    s.keyDown("ArrowUp");
    expect(s.step(100)).not.toBeNull();
    expect(s.keyUp("ArrowUp")).toBe(true);
    expect(s.step(100)).toBeNull();
    s.keyDown("ArrowUp");
    s.keyDown("KeyQ");
    s.releaseAll();
    expect(s.step(100)).toBeNull();
  });

  test("unbound keys are not handled", () => {
    const s = new Steering(START);
    expect(s.keyDown("KeyZ")).toBe(false);
    expect(s.keyDown("Space")).toBe(false);
    expect(s.step(100)).toBeNull();
  });
});
