/**
 * DOM overlay over the video element: captures pointer interactions in
 * normalized frame coordinates (tracking resizes live), draws the latency
 * spinner at each interaction point, and renders incoming updates.
 */

import { normalizePointer, toPixels, type FrameRect } from "./geometry.js";
import type { RelayClient } from "./client.js";
import type { InteractionSample, ViewerSession } from "./session.js";
import { makeScheduler } from "./spinner.js";
import type { NormPoint } from "./protocol.js";

interface ActiveStroke {
  press: InteractionSample;
  trajectory: InteractionSample[];
  latencyAtPress: number;
}

export class Overlay {
  private video: HTMLElement;
  private layer: HTMLCanvasElement;
  private session: ViewerSession;
  private client: RelayClient;
  private stroke: ActiveStroke | null = null;
  private spinners = makeScheduler();
  private spinnerAnchors = new Map<object, NormPoint>();

  constructor(video: HTMLElement, layer: HTMLCanvasElement, session: ViewerSession, client: RelayClient) {
    this.video = video;
    this.layer = layer;
    this.session = session;
    this.client = client;
    layer.addEventListener("pointerdown", (ev) => this.onDown(ev));
    layer.addEventListener("pointermove", (ev) => this.onMove(ev));
    layer.addEventListener("pointerup", (ev) => this.onUp(ev));
    requestAnimationFrame(() => this.draw());
  }

  frameRect(): FrameRect {
    const r = this.video.getBoundingClientRect();
    return { left: r.left, top: r.top, width: r.width, height: r.height };
  }

  private sample(ev: PointerEvent): InteractionSample {
    return {
      point: normalizePointer(ev.clientX, ev.clientY, this.frameRect()),
      atMs: this.session.now(),
    };
  }

  private onDown(ev: PointerEvent): void {
    this.layer.setPointerCapture(ev.pointerId);
    this.stroke = {
      press: this.sample(ev),
      trajectory: [],
      latencyAtPress: this.session.sampleLatency(),
    };
  }

  private onMove(ev: PointerEvent): void {
    this.stroke?.trajectory.push(this.sample(ev));
  }

  private onUp(ev: PointerEvent): void {
    if (!this.stroke) return;
    const { press, trajectory, latencyAtPress } = this.stroke;
    this.stroke = null;
    const release = this.sample(ev);
    const frame = this.session.finishInteraction(press, trajectory, release, latencyAtPress);
    if (this.client.send(frame)) {
      const handle = this.spinners.start(this.session.now(), latencyAtPress);
      this.spinnerAnchors.set(handle, press.point);
    }
  }

  private draw(): void {
    const ctx = this.layer.getContext("2d");
    if (ctx) {
      const rect = this.frameRect();
      this.layer.width = rect.width;
      this.layer.height = rect.height;
      ctx.clearRect(0, 0, rect.width, rect.height);
      const now = this.session.now();
      const running = this.spinners.sweep(now);
      for (const [handle, anchor] of [...this.spinnerAnchors]) {
        if (!running.includes(handle as never)) {
          this.spinnerAnchors.delete(handle);
          continue;
        }
        const h = handle as (typeof running)[number];
        const px = toPixels(anchor, { left: 0, top: 0, width: rect.width, height: rect.height });
        ctx.beginPath();
        ctx.strokeStyle = "rgba(255,255,255,0.9)";
        ctx.lineWidth = 3;
        ctx.arc(px.x, px.y, 14, -Math.PI / 2, -Math.PI / 2 + 2 * Math.PI * (1 - h.progress(now)));
        ctx.stroke();
      }
    }
    requestAnimationFrame(() => this.draw());
  }
}
