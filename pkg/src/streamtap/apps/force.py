"""Ball-flick playground: drags prime forces, averaged and applied at close.

Each round anchors on the balls' current positions. A drag starting within
snap_radius of a ball primes (direction, magnitude) for it; at the deadline
every ball receives the arithmetic mean of its primed vectors, clamped to
max_impulse (direction preserved), as a velocity impulse.
"""

from __future__ import annotations

import math

from .base import BaseApp, OUTCOME_IGNORED_KIND, OUTCOME_NO_ANCHOR, OUTCOME_NO_ROUND, OUTCOME_OK
from ..aggregation import ForceRound, NoAnchor, close_force, prime_force
from ..protocol import KIND_GESTURE


class ForceApp(BaseApp):
    kind = "force"

    def __init__(
        self,
        balls=((-3.0, 0.0), (3.0, 0.0)),
        snap_radius=1.0,
        round_duration_ms=8_000,
        gap_ms=2_000,
        max_impulse=10.0,
        **kw,
    ):
        super().__init__(**kw)
        self.positions = [(float(x), float(y)) for x, y in balls]
        self.velocities = [(0.0, 0.0) for _ in self.positions]
        self.snap_radius = snap_radius
        self.round_duration_ms = round_duration_ms
        self.gap_ms = gap_ms
        self.max_impulse = max_impulse
        self.round = None
        self.round_index = 0
        self._next_open_ms = None

    def _on_tick(self, now_ms):
        dt_s = self.tick_period_ms / 1000.0
        self.positions = [
            (p[0] + v[0] * dt_s, p[1] + v[1] * dt_s)
            for p, v in zip(self.positions, self.velocities)
        ]
        if self.round is None and self._next_open_ms is None:
            self._next_open_ms = now_ms
        if self.round is not None and now_ms >= self.round.deadline_ms:
            self._close_round()
        if self.round is None and self._next_open_ms is not None and now_ms >= self._next_open_ms:
            self.round = ForceRound(
                anchors=self.positions,
                snap_radius=self.snap_radius,
                deadline_ms=now_ms + self.round_duration_ms,
            )
            self.emit_update({"round": "open"})

    def _close_round(self):
        for i, impulse in enumerate(close_force(self.round)):
            impulse = self._clamp(impulse)
            vx, vy = self.velocities[i]
            self.velocities[i] = (vx + impulse[0], vy + impulse[1])
        self.round_index += 1
        self.round = None
        self._next_open_ms = self.now_ms + self.gap_ms
        self.emit_update({"round": "closed"})

    def _clamp(self, impulse):
        mag = math.hypot(*impulse)
        if mag <= self.max_impulse or mag == 0.0:
            return impulse
        scale = self.max_impulse / mag
        return (impulse[0] * scale, impulse[1] * scale)

    def _apply_event(self, admitted, world_points) -> str:
        if admitted.event.kind != KIND_GESTURE:
            return OUTCOME_IGNORED_KIND
        if self.round is None:
            return OUTCOME_NO_ROUND
        try:
            prime_force(self.round, admitted.event.user, world_points, admitted.server_ts_ms)
        except NoAnchor:
            return OUTCOME_NO_ANCHOR
        return OUTCOME_OK

    def state_snapshot(self) -> dict:
        snap = super().state_snapshot()
        snap["balls"] = [
            {"pos": list(p), "vel": list(v)} for p, v in zip(self.positions, self.velocities)
        ]
        snap["round_open"] = self.round is not None
        if self.round is not None:
            snap["primes"] = {
                u: {"anchor": a, "vector": list(v)} for u, (a, v) in sorted(self.round.primes.items())
            }
            snap["deadline_ms"] = self.round.deadline_ms
        return snap
