/**
 * Scripted interaction session -> golden/session.jsonl.
 *
 * Drives the session logic exactly as the overlay would (pixel inputs
 * normalized against a frame rect, including a mid-session resize), and
 * writes every outbound frame to the golden file. The relay-side test
 * suite decodes each line with its own protocol module, so any drift in
 * this client's wire output fails CI without needing a browser.
 */
import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { ViewerSession } from "../src/session.js";
import { normalizePointer } from "../src/geometry.js";
import { PanelState } from "../src/panel.js";
import { encodeFrame } from "../src/protocol.js";
const frames = [];
let clock = 5_000;
let latency = 1_500;
let rect = { left: 0, top: 0, width: 1920, height: 1080 };
const session = new ViewerSession("goldie", () => latency, () => clock);
const panel = new PanelState();
function emit(frame) {
    frames.push(encodeFrame(frame));
}
function at(px, py) {
    return { point: normalizePointer(px, py, rect), atMs: clock };
}
function click(px, py, holdMs = 40) {
    const press = at(px, py);
    clock += holdMs;
    emit(session.finishInteraction(press, [], at(px, py), session.sampleLatency()));
}
function drag(path, stepMs = 25) {
    const press = at(path[0][0], path[0][1]);
    const trajectory = [];
    for (const [px, py] of path.slice(1, -1)) {
        clock += stepMs;
        trajectory.push(at(px, py));
    }
    clock += stepMs;
    const release = at(path[path.length - 1][0], path[path.length - 1][1]);
    emit(session.finishInteraction(press, trajectory, release, session.sampleLatency()));
}
emit(session.hello());
emit(session.contextChange(panel.select("item", "zombie")));
clock += 200;
click(960, 540); // dead center of a 1920x1080 frame -> (0.5, 0.5)
clock += 300;
click(482, 271);
emit(session.contextChange(panel.select("color", "#46a3ff")));
clock += 150;
drag([[600, 600], [700, 640], [820, 700], [900, 780]]);
// hold in place past the timeout: a gesture even without motion
const press = at(1200, 300);
clock += 400;
emit(session.finishInteraction(press, [], at(1200, 300), session.sampleLatency()));
// viewport resize: later coordinates normalize against the new geometry
rect = { left: 40, top: 20, width: 1280, height: 720 };
latency = 800;
clock += 500;
click(40 + 640, 20 + 360); // new visual center -> (0.5, 0.5)
emit(session.contextChange(panel.select("message", "hello from the crowd")));
clock += 120;
click(400, 500);
emit(session.contextChange(panel.command("undo")));
clock += 80;
drag([[200, 200], [260, 240], [200, 280]]); // small "<" chevron
emit(session.contextChange(panel.command("clear")));
const out = join(dirname(fileURLToPath(import.meta.url)), "..", "..", "golden", "session.jsonl");
mkdirSync(dirname(out), { recursive: true });
writeFileSync(out, frames.join("\n") + "\n");
console.log(`wrote ${frames.length} frames -> ${out}`);
