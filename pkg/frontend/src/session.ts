/**
 * Relay session logic, transport-agnostic: sequence numbering and
 * interaction capture -> wire frames. Kept free of DOM and network types so
 * the golden generator and tests drive it headlessly.
 */

import type { NormPoint } from "./protocol.js";
import {
  classifyRawInput,
  KIND_CLICK,
  makeContext,
  makeHello,
  makeMouseEvent,
} from "./protocol.js";
import type { PanelChange } from "./panel.js";

export interface InteractionSample {
  point: NormPoint;
  atMs: number;
}

export class ViewerSession {
  readonly user: string;
  private seq = 0;
  private latencyOf: () => number;
  private nowMs: () => number;

  constructor(user: string, latencyOf: () => number, nowMs: () => number) {
    this.user = user;
    this.latencyOf = latencyOf;
    this.nowMs = nowMs;
  }

  nextSeq(): number {
    this.seq += 1;
    return this.seq;
  }

  hello() {
    return makeHello(this.nextSeq(), this.user);
  }

  contextChange(change: PanelChange) {
    return makeContext(this.nextSeq(), this.user, change.data);
  }

  /**
   * Turn a finished press..release interaction into a mouse_event frame.
   * The broadcast latency is the one sampled when the stroke began.
   */
  finishInteraction(
    press: InteractionSample,
    trajectory: InteractionSample[],
    release: InteractionSample,
    latencyAtPress: number,
  ) {
    const holdMs = release.atMs - press.atMs;
    const kind = classifyRawInput(
      press.point,
      release.point,
      trajectory.map((s) => s.point),
      holdMs,
    );
    if (kind === KIND_CLICK) {
      return makeMouseEvent(this.nextSeq(), this.user, kind, [press.point], [0], latencyAtPress, press.atMs);
    }
    const samples = dedupeTimes([press, ...trajectory, release]);
    const points = samples.map((s) => s.point);
    const offsets = samples.map((s) => s.atMs - press.atMs);
    return makeMouseEvent(this.nextSeq(), this.user, kind, points, offsets, latencyAtPress, press.atMs);
  }

  sampleLatency(): number {
    return Math.max(0, this.latencyOf());
  }

  now(): number {
    return this.nowMs();
  }
}

/** Offsets must be non-decreasing with the first at 0; drop clock jitter. */
function dedupeTimes(samples: InteractionSample[]): InteractionSample[] {
  const out: InteractionSample[] = [];
  let last = -Infinity;
  for (const s of samples) {
    const at = Math.max(s.atMs, last);
    out.push({ point: s.point, atMs: at });
    last = at;
  }
  return out;
}
