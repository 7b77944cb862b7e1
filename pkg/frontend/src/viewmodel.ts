// Server-authoritative view state. Robot poses and mapping values render
// only from received messages; the local cursor is the one thing that leads.

import type {
  ChainSpec,
  FrameMessage,
  HelloAck,
  MappingSummary,
} from "./protocol";

export type ConnectionStatus = "disconnected" | "connecting" | "live";
export type LineColor = "green" | "grey";
export type TwinColor = "white" | "orange";

export const VIRTUAL_TWIN_OPACITY = 0.2;

export class ViewModel {
  status: ConnectionStatus = "disconnected";
  role: "operator" | "observer" | null = null;
  chain: ChainSpec | null = null;
  frameRate = 35;
  frame: FrameMessage | null = null;
  mapping: MappingSummary | null = null;
  lastError: string | null = null;
  /** true after a reconnect until the user unfreezes */
  showFrozenOverlay = false;

  onConnecting(): void {
    this.status = "connecting";
  }

  onHello(ack: HelloAck): void {
    this.status = "live";
    this.role = ack.role;
    this.chain = ack.chain;
    this.frameRate = ack.frame_rate;
    this.lastError = null;
  }

  /** Apply a frame; stale (out of order) frames are dropped. */
  onFrame(frame: FrameMessage): boolean {
    if (this.frame !== null && frame.frame <= this.frame.frame) {
      return false;
    }
    this.frame = frame;
    this.mapping = frame.mapping;
    if (!frame.mapping.frozen) {
      this.showFrozenOverlay = false;
    }
    return true;
  }

  onError(message: string): void {
    this.lastError = message;
  }

  onDisconnect(): void {
    this.status = "disconnected";
    this.role = null;
    // until the server confirms otherwise, render the mapping as frozen
    this.showFrozenOverlay = true;
    if (this.mapping !== null) {
      this.mapping = { ...this.mapping, frozen: true };
    }
  }

  get connected(): boolean {
    return this.status === "live";
  }

  /** Embodiment line: green while active, grey while frozen (or unknown). */
  lineColor(): LineColor {
    if (this.mapping === null || this.mapping.frozen) return "grey";
    return "green";
  }

  /** Virtual twin tint: orange exactly while the frame carries the anomaly flag. */
  twinColor(): TwinColor {
    return this.frame !== null && this.frame.anomaly ? "orange" : "white";
  }

  twinOpacity(): number {
    return VIRTUAL_TWIN_OPACITY;
  }

  /** Disk radius scales with the mapping ratio (server-confirmed value). */
  diskRadius(basePx: number): number {
    return basePx * (this.mapping?.scale ?? 1.0);
  }

  mirrorSigns(): [number, number] {
    return this.mapping?.mirror ?? [1, 1];
  }

  overlapNow(): boolean {
    return this.frame !== null && this.frame.overlap;
  }
}
