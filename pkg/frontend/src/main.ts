// Browser entry: wires the gateway client, the hand cursor, and the canvas.

import { Console } from "./client";
import { HandCursor } from "./cursor";
import { renderScene } from "./render";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function start(): void {
  const canvas = el<HTMLCanvasElement>("scene");
  const status = el<HTMLSpanElement>("status");
  const urlInput = el<HTMLInputElement>("gateway-url");
  const connectBtn = el<HTMLButtonElement>("connect");
  const freezeBtn = el<HTMLButtonElement>("freeze-toggle");
  const flipX = el<HTMLButtonElement>("flip-x");
  const flipY = el<HTMLButtonElement>("flip-y");
  const scaleSlider = el<HTMLInputElement>("scale-drag");
  const aperture = el<HTMLInputElement>("aperture");
  const yaw = el<HTMLInputElement>("yaw");
  const pitch = el<HTMLInputElement>("pitch");
  const roll = el<HTMLInputElement>("roll");

  const cursor = new HandCursor();
  let consoleClient: Console | null = null;
  let streamTimer: ReturnType<typeof setInterval> | null = null;
  let t = 0;

  function refresh(): void {
    const view = consoleClient?.view;
    if (view) {
      status.textContent = `${view.status}${view.role ? ` (${view.role})` : ""}` +
        (view.lastError ? ` — ${view.lastError}` : "");
      status.style.color = view.status === "live" ? "#3ddc6a" : "#e3575a";
      freezeBtn.textContent = view.mapping?.frozen ? "unfreeze" : "freeze";
      renderScene(canvas, view, cursor);
    }
  }

  connectBtn.addEventListener("click", () => {
    consoleClient?.disconnect();
    if (streamTimer !== null) clearInterval(streamTimer);
    const client = new Console(urlInput.value);
    consoleClient = client;
    client.onUpdate = refresh;
    client.connect();
    t = 0;
    streamTimer = setInterval(() => {
      const dt = 1.0 / client.view.frameRate;
      client.sendHand(t, cursor.pos, cursor.orientation(), cursor.aperture);
      t += dt;
    }, 1000.0 / 35.0);
  });

  freezeBtn.addEventListener("click", () => {
    const frozen = consoleClient?.view.mapping?.frozen ?? false;
    consoleClient?.sendInteraction({ action: frozen ? "unfreeze" : "freeze" });
  });
  flipX.addEventListener("click", () =>
    consoleClient?.sendInteraction({ action: "arrow-flip", axis: "x" }));
  flipY.addEventListener("click", () =>
    consoleClient?.sendInteraction({ action: "arrow-flip", axis: "y" }));
  scaleSlider.addEventListener("change", () =>
    consoleClient?.sendInteraction({
      action: "scale-drag",
      scale: parseFloat(scaleSlider.value),
    }));
  aperture.addEventListener("input", () => {
    cursor.aperture = parseFloat(aperture.value);
  });
  yaw.addEventListener("input", () => { cursor.yaw = parseFloat(yaw.value); });
  pitch.addEventListener("input", () => { cursor.pitch = parseFloat(pitch.value); });
  roll.addEventListener("input", () => { cursor.roll = parseFloat(roll.value); });

  let dragging = false;
  let lastX = 0;
  let lastY = 0;
  canvas.addEventListener("pointerdown", (ev) => {
    dragging = true;
    lastX = ev.clientX;
    lastY = ev.clientY;
    canvas.setPointerCapture(ev.pointerId);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!dragging) return;
    cursor.dragBy(ev.clientX - lastX, ev.clientY - lastY);
    lastX = ev.clientX;
    lastY = ev.clientY;
    refresh();
  });
  canvas.addEventListener("pointerup", () => { dragging = false; });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    cursor.wheelBy(ev.deltaY);
    refresh();
  }, { passive: false });

  setInterval(refresh, 100);
}

window.addEventListener("DOMContentLoaded", start);
