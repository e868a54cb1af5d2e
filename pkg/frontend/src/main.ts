/**
 * Bootstrap: bind the overlay to the page's video element and wire the
 * panel + websocket from URL parameters (?ws=...&user=...&latency=...).
 * Latency is supplied manually (field or URL) rather than scraped from any
 * platform UI; the harness injects it the same way.
 */

import { RelayClient } from "./client.js";
import { ViewerSession } from "./session.js";
import { Overlay } from "./overlay.js";
import { PanelState } from "./panel.js";
import { applyUpdate, initialWidgets, type WidgetState } from "./updates.js";
import { decodeFrame } from "./protocol.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
}

const params = new URLSearchParams(window.location.search);
const wsUrl = params.get("ws") ?? "ws://127.0.0.1:9870";
const user = params.get("user") ?? `viewer${Math.floor(Math.random() * 10_000)}`;

const latencyInput = byId<HTMLInputElement>("latency");
latencyInput.value = params.get("latency") ?? "1000";

const session = new ViewerSession(
  user,
  () => Number(latencyInput.value) || 0,
  () => performance.now(),
);

let widgets: WidgetState = initialWidgets();
const statusEl = byId<HTMLElement>("status");
const toastEl = byId<HTMLElement>("toast");

function renderWidgets(): void {
  byId<HTMLElement>("level").textContent = widgets.level ?? "-";
  byId<HTMLElement>("round").textContent =
    widgets.roundOpen === null ? "-" : widgets.roundOpen ? "open" : "closed";
  byId<HTMLElement>("winner").textContent = widgets.lastWinner ?? "-";
  const voteButtons = document.querySelectorAll<HTMLButtonElement>("[data-vote]");
  voteButtons.forEach((b) => (b.disabled = widgets.roundOpen === false));
}

function toast(text: string): void {
  toastEl.textContent = text;
  toastEl.classList.add("visible");
  setTimeout(() => toastEl.classList.remove("visible"), 2500);
}

const client = new RelayClient(wsUrl, () => session.hello(), {
  onOpen: () => (statusEl.textContent = `connected as ${user}`),
  onClose: () => (statusEl.textContent = "disconnected - retrying"),
  onDiscarded: toast,
  onInbound: (raw) => {
    const msg = decodeFrame(raw);
    if (msg === null) {
      console.warn("unparseable frame from relay", raw);
      return;
    }
    if (msg.type === "app_update") {
      widgets = applyUpdate(widgets, msg);
      renderWidgets();
    } else {
      toast(`relay error: ${msg.code}`);
    }
  },
});
client.connect();

const panel = new PanelState();

function sendPanel(change: { data: Record<string, string> }): void {
  client.send(session.contextChange(change));
}

byId<HTMLSelectElement>("item").addEventListener("change", (ev) => {
  sendPanel(panel.select("item", (ev.target as HTMLSelectElement).value));
});
byId<HTMLInputElement>("color").addEventListener("change", (ev) => {
  sendPanel(panel.select("color", (ev.target as HTMLInputElement).value));
});
byId<HTMLInputElement>("message").addEventListener("change", (ev) => {
  sendPanel(panel.select("message", (ev.target as HTMLInputElement).value));
});
byId<HTMLButtonElement>("undo").addEventListener("click", () => sendPanel(panel.command("undo")));
byId<HTMLButtonElement>("clear").addEventListener("click", () => sendPanel(panel.command("clear")));

const video = byId<HTMLVideoElement>("video");
const layer = byId<HTMLCanvasElement>("overlay");
new Overlay(video, layer, session, client);

const source = params.get("video");
if (source) {
  video.src = source;
  void video.play().catch(() => undefined);
}
