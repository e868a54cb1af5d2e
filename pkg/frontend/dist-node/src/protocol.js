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
export function makeHello(seq, user) {
    return { type: "hello", seq, role: "viewer", user };
}
export function makeContext(seq, user, data) {
    return { type: "context", seq, user, data };
}
export function makeMouseEvent(seq, user, kind, points, offsetsMs, latencyMs, clientTsMs) {
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
export function encodeFrame(message) {
    return JSON.stringify(message);
}
export function decodeFrame(raw) {
    let obj;
    try {
        obj = JSON.parse(raw);
    }
    catch {
        return null;
    }
    if (typeof obj !== "object" || obj === null)
        return null;
    const msg = obj;
    if (msg.type === "app_update" || msg.type === "error") {
        return obj;
    }
    return null;
}
/**
 * Classify a raw press/release interaction. Gesture iff the pointer strayed
 * at least motionThreshold (normalized Euclidean) from the press point, or
 * the button was held at least holdTimeoutMs.
 */
export function classifyRawInput(press, release, trajectory, holdMs, motionThreshold = MOTION_THRESHOLD, holdTimeoutMs = HOLD_TIMEOUT_MS) {
    let maxDisp = 0;
    for (const p of [...trajectory, release]) {
        const d = Math.hypot(p.x - press.x, p.y - press.y);
        if (d > maxDisp)
            maxDisp = d;
    }
    return maxDisp >= motionThreshold || holdMs >= holdTimeoutMs ? KIND_GESTURE : KIND_CLICK;
}
