/**
 * Wire protocol spoken to the relay: single-line JSON per websocket frame,
 * strictly increasing per-connection seq. Field layout mirrors the relay's
 * schema exactly; anything this module emits must decode cleanly there.
 */

export const KIND_CLICK = "click";
export const KIND_GESTURE = "gesture";

// Click/gesture discrimination, identical thresholds to the relay side.
export const MOTION_THRESHOLD = 0.01;
export const HOLD_TIMEOUT_MS = 250;

export interface NormPoint {
  x: number;
  y: number;
}

export interface MouseEventBody {
  type: "mouse_event";
  seq: number;
  user: string;
  kind: typeof KIND_CLICK | typeof KIND_GESTURE;
  points: [number, number][];
  offsets_ms: number[];
  latency_ms: number;
  client_ts_ms: number;
}

export interface ContextBody {
  type: "context";
  seq: number;
  user: string;
  data: Record<string, string>;
}

export interface HelloBody {
  type: "hello";
  seq: number;
  role: "viewer" | "app";
  user?: string;
}

export interface AppUpdateBody {
  type: "app_update";
  seq: number;
  audience: "all" | { user: string };
  payload: Record<string, string>;
}

export interface ErrorBody {
  type: "error";
  seq: number;
  code: string;
  detail: string;
}

export type Outbound = MouseEventBody | ContextBody | HelloBody;
export type Inbound = AppUpdateBody | ErrorBody;

export function makeHello(seq: number, user: string): HelloBody {
  return { type: "hello", seq, role: "viewer", user };
}

export function makeContext(seq: number, user: string, data: Record<string, string>): ContextBody {
  return { type: "context", seq, user, data };
}

export function makeMouseEvent(
  seq: number,
  user: string,
  kind: MouseEventBody["kind"],
  points: NormPoint[],
  offsetsMs: number[],
  latencyMs: number,
  clientTsMs: number,
): MouseEventBody {
  return {
    type: "mouse_event",
    seq,
    user,
    kind,
    points: points.map((p) => [p.x, p.y]),
    offsets_ms: offsetsMs.map((o) => Math.round(o)),
    latency_ms: Math.max(0, Math.round(latencyMs)),
    client_ts_ms: Math.round(clientTsMs),
  };
}

/** One frame per message; the relay expects single-line JSON text. */
export function encodeFrame(message: Outbound): string {
  return JSON.stringify(message);
}

export function decodeFrame(raw: string): Inbound | null {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const msg = obj as { type?: unknown };
  if (msg.type === "app_update" || msg.type === "error") {
    return obj as Inbound;
  }
  return null;
}

/**
 * Classify a raw press/release interaction. Gesture iff the pointer strayed
 * at least motionThreshold (normalized Euclidean) from the press point, or
 * the button was held at least holdTimeoutMs.
 */
export function classifyRawInput(
  press: NormPoint,
  release: NormPoint,
  trajectory: NormPoint[],
  holdMs: number,
  motionThreshold: number = MOTION_THRESHOLD,
  holdTimeoutMs: number = HOLD_TIMEOUT_MS,
): MouseEventBody["kind"] {
  let maxDisp = 0;
  for (const p of [...trajectory, release]) {
    const d = Math.hypot(p.x - press.x, p.y - press.y);
    if (d > maxDisp) maxDisp = d;
  }
  return maxDisp >= motionThreshold || holdMs >= holdTimeoutMs ? KIND_GESTURE : KIND_CLICK;
}
