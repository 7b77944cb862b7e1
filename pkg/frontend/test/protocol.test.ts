import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import {
  eventMessage,
  handMessage,
  helloMessage,
  parseServerMessage,
} from "../src/protocol";
import { Console } from "../src/client";
import type { SocketLike } from "../src/client";

const GOLDEN_DIR = join(__dirname, "..", "..", "src", "armpilot", "data", "protocol");

describe("golden message compatibility", () => {
  it("parses every server-side golden message", () => {
    for (const name of ["hello_ack.json", "frame.json", "error.json"]) {
      const raw = readFileSync(join(GOLDEN_DIR, name), "utf-8").trim();
      const msg = parseServerMessage(raw);
      expect(msg.kind).toBeTruthy();
    }
  });

  it("emits client messages matching the golden schemas", () => {
    const goldenHand = JSON.parse(
      readFileSync(join(GOLDEN_DIR, "hand.json"), "utf-8"),
    );
    const ours = JSON.parse(
      handMessage(goldenHand.t, goldenHand.pos, goldenHand.q, goldenHand.aperture),
    );
    expect(ours).toEqual(goldenHand);

    const goldenHello = JSON.parse(
      readFileSync(join(GOLDEN_DIR, "hello.json"), "utf-8"),
    );
    expect(JSON.parse(helloMessage())).toEqual(goldenHello);

    for (const [file, payload] of [
      ["event_freeze.json", "freeze"],
      ["event_unfreeze.json", "unfreeze"],
      ["event_scale.json", { scale: 1.5 }],
      ["event_flip.json", { flip: "x" }],
    ] as const) {
      const golden = JSON.parse(readFileSync(join(GOLDEN_DIR, file), "utf-8"));
      expect(JSON.parse(eventMessage(payload))).toEqual(golden);
    }
  });

  it("golden directory covers every kind we speak", () => {
    const names = readdirSync(GOLDEN_DIR);
    for (const required of ["hello.json", "hand.json", "frame.json", "error.json"]) {
      expect(names).toContain(required);
    }
  });

  it("rejects unknown kinds", () => {
    expect(() => parseServerMessage('{"kind":"telemetry"}')).toThrow();
  });
});

class FakeSocket implements SocketLike {
  sent: string[] = [];
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  send(data: string): void {
    this.sent.push(data);
  }
  close(): void {
    this.onclose?.();
  }
}

describe("control liveness", () => {
  it("every interaction emits exactly one event message", () => {
    const socket = new FakeSocket();
    const client = new Console("ws://test", () => socket);
    client.connect();
    socket.onopen?.();
    expect(socket.sent).toHaveLength(1); // the hello
    socket.onmessage?.({
      data: readFileSync(join(GOLDEN_DIR, "hello_ack.json"), "utf-8").trim(),
    });
    client.sendInteraction({ action: "freeze" });
    client.sendInteraction({ action: "scale-drag", scale: 2.3 });
    client.sendInteraction({ action: "arrow-flip", axis: "y" });
    const events = socket.sent.slice(1).map((s) => JSON.parse(s));
    expect(events).toEqual([
      { kind: "event", event: "freeze" },
      { kind: "event", event: { scale: 2.3 } },
      { kind: "event", event: { flip: "y" } },
    ]);
    client.disconnect();
  });
});
