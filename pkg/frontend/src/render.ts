// Canvas rendering: two orthographic views (top X/Y, front X/Z) showing the
// physical arm opaque, the zero-delay twin translucent (orange on anomaly),
// the embodiment line, the scale disk and the mirror arrows.

import { jointPositions } from "./fk";
import type { Vec3 } from "./protocol";
import type { HandCursor } from "./cursor";
import { ViewModel } from "./viewmodel";

interface Panel {
  x0: number;
  y0: number;
  w: number;
  h: number;
  axes: [number, number]; // world axis indices drawn as (right, up)
  label: string;
}

const SCALE_PX_PER_M = 220;
const DISK_BASE_PX = 34;

function project(panel: Panel, p: Vec3): [number, number] {
  const cx = panel.x0 + panel.w / 2;
  const cy = panel.y0 + panel.h * 0.62;
  return [
    cx + p[panel.axes[0]] * SCALE_PX_PER_M,
    cy - p[panel.axes[1]] * SCALE_PX_PER_M,
  ];
}

function drawArm(
  ctx: CanvasRenderingContext2D,
  panel: Panel,
  points: Vec3[],
  stroke: string,
  alpha: number,
  width: number,
): void {
  ctx.save();
  ctx.globalAlpha = alpha;
  ctx.strokeStyle = stroke;
  ctx.lineWidth = width;
  ctx.lineCap = "round";
  ctx.beginPath();
  points.forEach((p, i) => {
    const [x, y] = project(panel, p);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
  for (const p of points) {
    const [x, y] = project(panel, p);
    ctx.beginPath();
    ctx.arc(x, y, width * 0.8, 0, Math.PI * 2);
    ctx.fillStyle = stroke;
    ctx.fill();
  }
  ctx.restore();
}

export function renderScene(
  canvas: HTMLCanvasElement,
  view: ViewModel,
  cursor: HandCursor,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#14161a";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  const panels: Panel[] = [
    { x0: 0, y0: 0, w: canvas.width / 2, h: canvas.height, axes: [0, 1], label: "top (x/y)" },
    { x0: canvas.width / 2, y0: 0, w: canvas.width / 2, h: canvas.height, axes: [0, 2], label: "front (x/z)" },
  ];

  for (const panel of panels) {
    ctx.strokeStyle = "#2a2e36";
    ctx.strokeRect(panel.x0 + 0.5, panel.y0 + 0.5, panel.w - 1, panel.h - 1);
    ctx.fillStyle = "#8a93a3";
    ctx.font = "12px system-ui";
    ctx.fillText(panel.label, panel.x0 + 10, panel.y0 + 18);

    const frame = view.frame;
    if (view.chain && frame) {
      const physical = jointPositions(view.chain, frame.physical_q);
      const virtual = jointPositions(view.chain, frame.virtual_q);
      drawArm(ctx, panel, physical, "#d8dde6", 1.0, 5);
      const tint = view.twinColor() === "orange" ? "#ff8c1a" : "#ffffff";
      drawArm(ctx, panel, virtual, tint, view.twinOpacity() + (view.twinColor() === "orange" ? 0.5 : 0), 5);

      // embodiment line: local cursor to the physical gripper
      const tcp = physical[physical.length - 1];
      const [hx, hy] = project(panel, cursor.pos);
      const [tx, ty] = project(panel, tcp);
      ctx.save();
      ctx.strokeStyle = view.lineColor() === "green" ? "#3ddc6a" : "#8a93a3";
      ctx.setLineDash([6, 4]);
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(hx, hy);
      ctx.lineTo(tx, ty);
      ctx.stroke();
      ctx.restore();
    }

    // hand cursor
    const [cx, cy] = project(panel, cursor.pos);
    ctx.strokeStyle = "#57a7ff";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(cx, cy, 7, 0, Math.PI * 2);
    ctx.stroke();
  }

  drawDisk(ctx, canvas, view);
}

function drawDisk(
  ctx: CanvasRenderingContext2D,
  canvas: HTMLCanvasElement,
  view: ViewModel,
): void {
  const cx = 70;
  const cy = canvas.height - 70;
  const r = view.diskRadius(DISK_BASE_PX);
  ctx.save();
  ctx.strokeStyle = view.lineColor() === "green" ? "#3ddc6a" : "#8a93a3";
  ctx.fillStyle = "rgba(61, 220, 106, 0.08)";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(cx, cy, r, 0, Math.PI * 2);
  ctx.fill();
  ctx.stroke();
  const [mx, my] = view.mirrorSigns();
  drawArrow(ctx, cx, cy, mx * (r + 12), 0, "#e3575a");
  drawArrow(ctx, cx, cy, 0, -my * (r + 12), "#57a7ff");
  ctx.fillStyle = "#8a93a3";
  ctx.font = "11px system-ui";
  ctx.fillText(`scale ${(view.mapping?.scale ?? 1).toFixed(2)}`, cx - 24, cy + r + 18);
  ctx.restore();
}

function drawArrow(
  ctx: CanvasRenderingContext2D,
  x0: number,
  y0: number,
  dx: number,
  dy: number,
  color: string,
): void {
  const x1 = x0 + dx;
  const y1 = y0 + dy;
  ctx.strokeStyle = color;
  ctx.fillStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(x0, y0);
  ctx.lineTo(x1, y1);
  ctx.stroke();
  const angle = Math.atan2(dy, dx);
  ctx.beginPath();
  ctx.moveTo(x1, y1);
  ctx.lineTo(x1 - 8 * Math.cos(angle - 0.4), y1 - 8 * Math.sin(angle - 0.4));
  ctx.lineTo(x1 - 8 * Math.cos(angle + 0.4), y1 - 8 * Math.sin(angle + 0.4));
  ctx.closePath();
  ctx.fill();
}
