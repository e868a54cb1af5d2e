/**
 * Relay session logic, transport-agnostic: sequence numbering and
 * interaction capture -> wire frames. Kept free of DOM and network types so
 * the golden generator and tests drive it headlessly.
 */
import { classifyRawInput, KIND_CLICK, makeContext, makeHello, makeMouseEvent, } from "./protocol.js";
export class ViewerSession {
    user;
    seq = 0;
    latencyOf;
    nowMs;
    constructor(user, latencyOf, nowMs) {
        this.user = user;
        this.latencyOf = latencyOf;
        this.nowMs = nowMs;
    }
    nextSeq() {
        this.seq += 1;
        return this.seq;
    }
    hello() {
        return makeHello(this.nextSeq(), this.user);
    }
    contextChange(change) {
        return makeContext(this.nextSeq(), this.user, change.data);
    }
    /**
     * Turn a finished press..release interaction into a mouse_event frame.
     * The broadcast latency is the one sampled when the stroke began.
     */
    finishInteraction(press, trajectory, release, latencyAtPress) {
        const holdMs = release.atMs - press.atMs;
        const kind = classifyRawInput(press.point, release.point, trajectory.map((s) => s.point), holdMs);
        if (kind === KIND_CLICK) {
            return makeMouseEvent(this.nextSeq(), this.user, kind, [press.point], [0], latencyAtPress, press.atMs);
        }
        const samples = dedupeTimes([press, ...trajectory, release]);
        const points = samples.map((s) => s.point);
        const offsets = samples.map((s) => s.atMs - press.atMs);
        return makeMouseEvent(this.nextSeq(), this.user, kind, points, offsets, latencyAtPress, press.atMs);
    }
    sampleLatency() {
        return Math.max(0, this.latencyOf());
    }
    now() {
        return this.nowMs();
    }
}
/** Offsets must be non-decreasing with the first at 0; drop clock jitter. */
function dedupeTimes(samples) {
    const out = [];
    let last = -Infinity;
    for (const s of samples) {
        const at = Math.max(s.atMs, last);
        out.push({ point: s.point, atMs: at });
        last = at;
    }
    return out;
}
