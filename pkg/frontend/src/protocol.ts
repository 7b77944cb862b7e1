// Wire protocol mirror of the gateway: JSON text messages over a WebSocket.
// Schemas are pinned by the golden files shipped with the engine package.

export const PROTOCOL_VERSION = 1;

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number];

export interface JointSpec {
  axis: Vec3;
  origin_t: Vec3;
  origin_q: Quat;
  limits: [number, number];
  max_vel: number;
}

export interface ChainSpec {
  base: { t: Vec3; q: Quat };
  tool: { t: Vec3; q: Quat };
  reach_radius_m: number;
  joints: JointSpec[];
}

export interface HelloAck {
  kind: "hello";
  version: number;
  role: "operator" | "observer";
  chain: ChainSpec;
  limits: Record<string, number>;
  frame_rate: number;
}

export interface MappingSummary {
  frozen: boolean;
  scale: number;
  mirror: [number, number];
}

export interface FrameMessage {
  kind: "frame";
  frame: number;
  t: number;
  hand: { t: number; pos: number[]; q: number[]; aperture: number };
  target: { pos: number[]; q: number[]; openness_mm: number };
  virtual_q: number[];
  physical_q: number[];
  gripper_mm: number;
  anomaly: boolean;
  overlap: boolean;
  lag_m: number;
  events: unknown[];
  mapping: MappingSummary;
}

export interface ErrorMessage {
  kind: "error";
  code?: string;
  message: string;
}

export type ServerMessage = HelloAck | FrameMessage | ErrorMessage;

export type EventPayload =
  | "freeze"
  | "unfreeze"
  | { scale: number }
  | { flip: "x" | "y" }
  | { rotation_offset: Quat };

export function helloMessage(): string {
  return JSON.stringify({ kind: "hello", version: PROTOCOL_VERSION });
}

export function handMessage(
  t: number,
  pos: Vec3,
  q: Quat,
  aperture: number,
): string {
  return JSON.stringify({ kind: "hand", t, pos, q, aperture });
}

export function eventMessage(event: EventPayload): string {
  return JSON.stringify({ kind: "event", event });
}

export function parseServerMessage(text: string): ServerMessage {
  const msg = JSON.parse(text) as { kind?: string };
  switch (msg.kind) {
    case "hello": {
      const hello = msg as HelloAck;
      if (typeof hello.version !== "number") throw new Error("hello without version");
      return hello;
    }
    case "frame": {
      const frame = msg as FrameMessage;
      for (const key of [
        "frame", "t", "hand", "target", "virtual_q", "physical_q",
        "gripper_mm", "anomaly", "overlap", "lag_m", "events", "mapping",
      ]) {
        if (!(key in frame)) throw new Error(`frame message missing ${key}`);
      }
      return frame;
    }
    case "error": {
      const err = msg as ErrorMessage;
      if (typeof err.message !== "string") throw new Error("error without message");
      return err;
    }
    default:
      throw new Error(`unknown server message kind: ${msg.kind}`);
  }
}
