// Canvas renderer for the scene and the steerable hand marker.
// Scene coordinates are millimetres with y pointing up; the canvas
// transform flips y and letterboxes the extent into the viewport.

import type { Pose, RectDoc, SceneDoc, SceneObjectDoc } from "./types.js";

const PALETTE: Record<string, string> = {
  red: "#c0392b",
  green: "#27ae60",
  blue: "#2980b9",
  yellow: "#d4a017",
  white: "#bdc3c7",
  silver: "#95a5a6",
  brown: "#8e6e4b",
  black: "#2c3e50",
};

const MARGIN_PX = 16;

interface Transform {
  scale: number;
  toX(xMm: number): number;
  toY(yMm: number): number;
}

function fitExtent(extent: RectDoc, width: number, height: number): Transform {
  const wMm = extent.x_max_mm - extent.x_min_mm;
  const hMm = extent.y_max_mm - extent.y_min_mm;
  const scale = Math.min((width - 2 * MARGIN_PX) / wMm, (height - 2 * MARGIN_PX) / hMm);
  const xOff = (width - wMm * scale) / 2;
  const yOff = (height - hMm * scale) / 2;
  return {
    scale,
    toX: (xMm) => xOff + (xMm - extent.x_min_mm) * scale,
    toY: (yMm) => height - yOff - (yMm - extent.y_min_mm) * scale,
  };
}

function fillFor(obj: SceneObjectDoc): string {
  return PALETTE[obj.color] ?? "#7f8c8d";
}

function drawObject(
  ctx: CanvasRenderingContext2D,
  t: Transform,
  obj: SceneObjectDoc,
  highlighted: boolean,
): void {
  const x = t.toX(obj.x_mm);
  const y = t.toY(obj.y_mm);
  const r = Math.max(6, 30 * t.scale);
  ctx.beginPath();
  ctx.arc(x, y, r, 0, Math.PI * 2);
  if (obj.shape === "hole") {
    ctx.lineWidth = 3;
    ctx.strokeStyle = fillFor(obj);
    ctx.stroke();
  } else {
    ctx.fillStyle = fillFor(obj);
    ctx.fill();
    if (obj.material === "metal") {
      ctx.lineWidth = 2;
      ctx.strokeStyle = "#2c3e50";
      ctx.stroke();
    }
  }
  if (highlighted) {
    ctx.beginPath();
    ctx.arc(x, y, r + 5, 0, Math.PI * 2);
    ctx.lineWidth = 2;
    ctx.strokeStyle = "#f39c12";
    ctx.stroke();
  }
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(obj.name, x, y + r + 12);
}

function drawHand(ctx: CanvasRenderingContext2D, t: Transform, pose: Pose): void {
  const x = t.toX(pose.x_mm);
  const y = t.toY(pose.y_mm);
  // canvas y is flipped, so the screen angle is the negated facing
  const angle = (-pose.facing_deg * Math.PI) / 180;
  ctx.save();
  ctx.translate(x, y);
  ctx.rotate(angle);
  ctx.beginPath();
  ctx.moveTo(14, 0);
  ctx.lineTo(-8, 8);
  ctx.lineTo(-8, -8);
  ctx.closePath();
  ctx.fillStyle = "#8e44ad";
  ctx.fill();
  ctx.restore();
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  scene: SceneDoc,
  pose: Pose,
  lastReadUid: string | null,
): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  const t = fitExtent(scene.extent, width, height);

  ctx.strokeStyle = "#ccc";
  ctx.lineWidth = 1;
  ctx.strokeRect(
    t.toX(scene.extent.x_min_mm),
    t.toY(scene.extent.y_max_mm),
    (scene.extent.x_max_mm - scene.extent.x_min_mm) * t.scale,
    (scene.extent.y_max_mm - scene.extent.y_min_mm) * t.scale,
  );

  for (const region of scene.regions) {
    const b = region.bounds;
    ctx.fillStyle = "rgba(52, 152, 219, 0.08)";
    ctx.fillRect(
      t.toX(b.x_min_mm),
      t.toY(b.y_max_mm),
      (b.x_max_mm - b.x_min_mm) * t.scale,
      (b.y_max_mm - b.y_min_mm) * t.scale,
    );
    ctx.fillStyle = "#888";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "left";
    ctx.fillText(`R${region.region_id}`, t.toX(b.x_min_mm) + 3, t.toY(b.y_max_mm) + 11);
  }

  for (const obj of scene.objects) {
    drawObject(ctx, t, obj, obj.tag !== null && obj.tag === lastReadUid);
  }
  drawHand(ctx, t, pose);
}
