"""Shared machinery for the headless reference applications.

Each app is a single-threaded state machine with a fixed tick (matching the
camera-buffer cadence): ticks push a camera snapshot and advance app logic;
admitted viewer events are resolved against the historical camera, run
through the policy gate, then applied by the concrete app. Every handled
event produces one outcome string ("ok" or a rejection reason), tallied and
logged so harness reports can reconcile exactly.
"""

from __future__ import annotations

import json

from ..aggregation import RoundClosed
from ..compensation import CameraBuffer, CameraState, StaleIntent, resolve
from ..gesture import COMMAND_UNRECOGNIZED, classify
from ..policy import CooldownState, GateConfig, RoleTable, admit
from ..protocol import AppUpdate, KIND_GESTURE

OUTCOME_OK = "ok"
OUTCOME_STALE = "stale_intent"
OUTCOME_IGNORED_KIND = "ignored_kind"
OUTCOME_NO_ACTION = "no_action"
OUTCOME_NO_ROUND = "no_round"
OUTCOME_ROUND_CLOSED = "round_closed"
OUTCOME_MISSED_REGION = "missed_region"
OUTCOME_NO_ANCHOR = "no_anchor"
OUTCOME_TOO_CLOSE = "too_close"
OUTCOME_INSUFFICIENT_FUNDS = "insufficient_funds"
OUTCOME_UNKNOWN_ITEM = "unknown_item"

DEFAULT_TICK_MS = 100


class BaseApp:
    """Deterministic tick loop + event admission shared by all apps."""

    kind = "base"

    def __init__(
        self,
        extent=(16.0, 9.0),
        center=(0.0, 0.0),
        tick_period_ms=DEFAULT_TICK_MS,
        camera_capacity=100,
        gate=None,
        roles=None,
        gesture_commands=False,
    ):
        self.extent = (float(extent[0]), float(extent[1]))
        self.center = (float(center[0]), float(center[1]))
        self.tick_period_ms = tick_period_ms
        self.camera = CameraBuffer(capacity=camera_capacity, period_ms=tick_period_ms)
        self.camera_history = []  # full trajectory, for ground-truth lookups
        self.gate = gate or GateConfig()
        self.roles = roles or RoleTable()
        self.cooldowns = CooldownState()
        self.gesture_commands = gesture_commands
        self.command_log = []  # (ts, user, command, score) when decoding is on
        self.now_ms = None
        self.tick_count = 0
        self.outcomes = {}
        self.event_log = []
        self._updates = []

    # -- sink protocol (what the relay hub calls) ----------------------------

    def on_event(self, admitted) -> str:
        try:
            world_points = resolve(self.camera, admitted)
        except StaleIntent:
            return self._record(admitted, OUTCOME_STALE)
        reason = admit(
            admitted.event.user, self.gate, self.roles, self.cooldowns, admitted.server_ts_ms
        )
        if reason is not None:
            return self._record(admitted, reason)
        try:
            outcome = self._apply_event(admitted, world_points)
        except RoundClosed:
            outcome = OUTCOME_ROUND_CLOSED
        if self.gesture_commands and admitted.event.kind == KIND_GESTURE:
            self._decode_gesture(admitted)
        return self._record(admitted, outcome)

    def _decode_gesture(self, admitted):
        result = classify(admitted.event.points)
        if result.command != COMMAND_UNRECOGNIZED:
            self.command_log.append(
                (admitted.server_ts_ms, admitted.event.user, result.command, result.score)
            )
            self.emit_update({"gesture": result.command})

    def on_context(self, user, data):
        pass

    # -- tick loop ------------------------------------------------------------

    def tick(self, now_ms):
        """Advance to now_ms: move and snapshot the camera, then app logic."""
        self.now_ms = now_ms
        self.tick_count += 1
        self._move_camera(now_ms)
        snap = CameraState(center=self.center, extent=self.extent, snapshot_ts_ms=now_ms)
        self.camera.push_snapshot(snap)
        self.camera_history.append(snap)
        self._on_tick(now_ms)

    def seen_camera(self, ts_ms):
        """Ground truth for what a frame rendered at ts_ms showed (floor slot)."""
        latest = None
        for snap in self.camera_history:
            if snap.snapshot_ts_ms <= ts_ms:
                latest = snap
            else:
                break
        return latest if latest is not None else self.camera_history[0]

    # -- back-channel ----------------------------------------------------------

    def emit_update(self, payload, audience=None):
        self._updates.append(AppUpdate({k: str(v) for k, v in payload.items()}, audience=audience))

    def drain_updates(self) -> list:
        out, self._updates = self._updates, []
        return out

    # -- introspection -----------------------------------------------------------

    def state_snapshot(self) -> dict:
        return {
            "kind": self.kind,
            "now_ms": self.now_ms,
            "camera": {"center": list(self.center), "extent": list(self.extent)},
            "outcomes": dict(sorted(self.outcomes.items())),
        }

    def snapshot_json(self) -> str:
        return json.dumps(self.state_snapshot(), sort_keys=True, separators=(",", ":"))

    def export_event_log(self) -> bytes:
        lines = [json.dumps(entry, sort_keys=True, separators=(",", ":")) for entry in self.event_log]
        return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")

    # -- subclass hooks ------------------------------------------------------------

    def _move_camera(self, now_ms):
        pass

    def _on_tick(self, now_ms):
        pass

    def _apply_event(self, admitted, world_points) -> str:
        raise NotImplementedError

    def _record(self, admitted, outcome) -> str:
        self.outcomes[outcome] = self.outcomes.get(outcome, 0) + 1
        self.event_log.append(
            {
                "ts": admitted.server_ts_ms,
                "user": admitted.event.user,
                "kind": admitted.event.kind,
                "outcome": outcome,
            }
        )
        return outcome
