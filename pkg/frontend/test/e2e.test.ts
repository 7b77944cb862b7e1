// Scripted end-to-end test: a live gateway process, the real client, and the
// view model, replaying a bundled trace plus explicit interactions.

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import WebSocket from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Console } from "../src/client";
import type { SocketLike } from "../src/client";
import type { FrameMessage, Quat, Vec3 } from "../src/protocol";

const REPO = join(__dirname, "..", "..");
const TRACE = join(REPO, "src", "armpilot", "data", "traces", "mapping_demo.jsonl");

let gateway: ChildProcess;
let url = "";

function wsFactory(target: string): SocketLike {
  return new WebSocket(target) as unknown as SocketLike;
}

async function startGateway(): Promise<string> {
  gateway = spawn("python3", ["-m", "armpilot.cli", "serve", "--port", "0"], {
    cwd: REPO,
    stdio: ["ignore", "pipe", "pipe"],
  });
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("gateway start timeout")), 20000);
    let buffer = "";
    gateway.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/listening on (ws:\/\/[\d.]+:\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
    gateway.on("exit", (code) => reject(new Error(`gateway exited early: ${code}`)));
  });
}

beforeAll(async () => {
  url = await startGateway();
}, 30000);

afterAll(() => {
  gateway?.kill();
});

interface TraceLine {
  t: number;
  pos?: Vec3;
  q?: Quat;
  aperture?: number;
  event?: unknown;
}

function loadTrace(): TraceLine[] {
  return readFileSync(TRACE, "utf-8")
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as TraceLine);
}

function nextFrame(client: Console, lastSeen: number): Promise<FrameMessage> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("frame timeout")), 10000);
    client.onUpdate = () => {
      const frame = client.view.frame;
      if (frame && frame.frame > lastSeen) {
        clearTimeout(timer);
        client.onUpdate = null;
        resolve(frame);
      }
    };
  });
}

function waitLive(client: Console): Promise<void> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("hello timeout")), 10000);
    client.onUpdate = () => {
      if (client.view.connected) {
        clearTimeout(timer);
        client.onUpdate = null;
        resolve();
      }
    };
  });
}

describe("operator console against a live gateway", () => {
  it("tracks the trace's frozen flag, anomaly tint, and clamped scale echo", async () => {
    const client = new Console(url, wsFactory);
    client.connect();
    await waitLive(client);
    expect(client.view.role).toBe("operator");
    expect(client.view.chain?.joints).toHaveLength(6);

    // stream the bundled trace (samples and its freeze/unfreeze/scale/flip
    // events) in lockstep, checking server-authoritative color semantics
    const trace = loadTrace();
    let lastFrame = -1;
    let sawFrozenFrames = 0;
    let sawActiveFrames = 0;
    let t = 0;
    for (const line of trace) {
      t = line.t;
      if (line.event !== undefined) {
        client.sendInteraction(
          line.event === "freeze"
            ? { action: "freeze" }
            : line.event === "unfreeze"
              ? { action: "unfreeze" }
              : typeof line.event === "object" && line.event !== null && "scale" in line.event
                ? { action: "scale-drag", scale: (line.event as { scale: number }).scale }
                : { action: "arrow-flip", axis: (line.event as { flip: "x" | "y" }).flip },
        );
        continue;
      }
      const waiter = nextFrame(client, lastFrame);
      client.sendHand(line.t, line.pos!, line.q!, line.aperture!);
      const frame = await waiter;
      lastFrame = frame.frame;
      // line color mirrors the frozen flag on every frame
      expect(client.view.lineColor()).toBe(frame.mapping.frozen ? "grey" : "green");
      // orange exactly when the frame carries the anomaly flag
      expect(client.view.twinColor()).toBe(frame.anomaly ? "orange" : "white");
      if (frame.mapping.frozen) sawFrozenFrames += 1;
      else sawActiveFrames += 1;
    }
    expect(sawFrozenFrames).toBeGreaterThan(0);
    expect(sawActiveFrames).toBeGreaterThan(0);

    // disk drag beyond the limit echoes back clamped to 2.0
    client.sendInteraction({ action: "scale-drag", scale: 2.3 });
    let waiter = nextFrame(client, lastFrame);
    const last = trace[trace.length - 1];
    client.sendHand(t + 0.1, last.pos!, last.q!, last.aperture!);
    let frame = await waiter;
    lastFrame = frame.frame;
    expect(frame.mapping.scale).toBe(2.0);
    expect(client.view.diskRadius(30)).toBe(60);

    // an impossible target turns the twin orange
    waiter = nextFrame(client, lastFrame);
    client.sendHand(t + 0.2, [5.0, -0.6, 0.35], [1, 0, 0, 0], 1.0);
    frame = await waiter;
    lastFrame = frame.frame;
    expect(frame.anomaly).toBe(true);
    expect(client.view.twinColor()).toBe("orange");

    client.disconnect();
  }, 120000);
});
