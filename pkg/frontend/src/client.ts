// Gateway client: hello handshake, hand streaming, interaction events.
// Works on the browser WebSocket and on ws's compatible implementation
// (injected for tests).

import {
  eventMessage,
  handMessage,
  helloMessage,
  parseServerMessage,
  type EventPayload,
  type Quat,
  type Vec3,
} from "./protocol";
import { ViewModel } from "./viewmodel";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export type Interaction =
  | { action: "freeze" }
  | { action: "unfreeze" }
  | { action: "scale-drag"; scale: number }
  | { action: "arrow-flip"; axis: "x" | "y" };

const defaultFactory: SocketFactory = (url) =>
  new (globalThis as { WebSocket: new (url: string) => SocketLike }).WebSocket(url);

export class Console {
  readonly view = new ViewModel();
  private socket: SocketLike | null = null;
  private readonly factory: SocketFactory;
  private reconnectDelayMs = 1000;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private shouldReconnect = true;
  onUpdate: (() => void) | null = null;

  constructor(private readonly url: string, factory?: SocketFactory) {
    this.factory = factory ?? defaultFactory;
  }

  connect(): void {
    this.shouldReconnect = true;
    this.view.onConnecting();
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => socket.send(helloMessage());
    socket.onmessage = (ev) => this.handleMessage(String(ev.data));
    socket.onclose = () => this.handleClose();
    socket.onerror = () => {
      /* the close handler drives reconnect */
    };
  }

  disconnect(): void {
    this.shouldReconnect = false;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.socket?.close();
  }

  private handleMessage(text: string): void {
    let msg;
    try {
      msg = parseServerMessage(text);
    } catch (err) {
      console.error("bad server message:", err);
      return;
    }
    if (msg.kind === "hello") this.view.onHello(msg);
    else if (msg.kind === "frame") this.view.onFrame(msg);
    else this.view.onError(msg.message);
    this.onUpdate?.();
  }

  private handleClose(): void {
    this.view.onDisconnect();
    this.onUpdate?.();
    if (this.shouldReconnect) {
      this.reconnectTimer = setTimeout(() => this.connect(), this.reconnectDelayMs);
    }
  }

  /** Stream the local cursor; call at tick cadence. */
  sendHand(t: number, pos: Vec3, q: Quat, aperture: number): void {
    if (this.view.connected) {
      this.socket?.send(handMessage(t, pos, q, aperture));
    }
  }

  /** Emit exactly one event message per user interaction. */
  sendInteraction(interaction: Interaction): void {
    if (!this.view.connected) return;
    let payload: EventPayload;
    switch (interaction.action) {
      case "freeze":
        payload = "freeze";
        break;
      case "unfreeze":
        payload = "unfreeze";
        break;
      case "scale-drag":
        payload = { scale: interaction.scale };
        break;
      case "arrow-flip":
        payload = { flip: interaction.axis };
        break;
    }
    this.socket?.send(eventMessage(payload));
  }
}
