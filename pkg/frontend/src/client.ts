/**
 * Reconnecting websocket wrapper. Each (re)connection is a fresh sequence
 * scope and re-asserts the username with a new hello, matching the relay's
 * duplicate-username replacement rule.
 */

import type { Outbound } from "./protocol.js";
import { encodeFrame } from "./protocol.js";

export interface RelayClientHooks {
  onOpen?: () => void;
  onInbound?: (raw: string) => void;
  onDiscarded?: (reason: string) => void;
  onClose?: () => void;
}

/** Reconnecting websocket that re-hellos as the same username. */
export class RelayClient {
  private ws: WebSocket | null = null;
  private url: string;
  private makeHelloFrame: () => Outbound;
  private hooks: RelayClientHooks;
  private retryMs = 500;
  private closed = false;

  constructor(url: string, makeHelloFrame: () => Outbound, hooks: RelayClientHooks = {}) {
    this.url = url;
    this.makeHelloFrame = makeHelloFrame;
    this.hooks = hooks;
  }

  connect(): void {
    if (this.closed) return;
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.retryMs = 500;
      ws.send(encodeFrame(this.makeHelloFrame()));
      this.hooks.onOpen?.();
    };
    ws.onmessage = (ev) => this.hooks.onInbound?.(String(ev.data));
    ws.onclose = () => {
      this.hooks.onClose?.();
      if (!this.closed) {
        setTimeout(() => this.connect(), this.retryMs);
        this.retryMs = Math.min(this.retryMs * 2, 8000);
      }
    };
  }

  /** Send, or discard with a visible reason when disconnected. */
  send(frame: Outbound): boolean {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) {
      this.hooks.onDiscarded?.("not connected; interaction discarded");
      return false;
    }
    this.ws.send(encodeFrame(frame));
    return true;
  }

  close(): void {
    this.closed = true;
    this.ws?.close();
  }
}
