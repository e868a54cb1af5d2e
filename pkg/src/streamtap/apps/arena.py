"""Top-down spawn arena: viewers spawn items/enemies and drop messages.

The camera tracks the streamer, who drifts at a configurable velocity, so
every spatial event exercises latency compensation. Spawns cost funds that
accrue per user (constant rate, or a shared pool split across the audience);
enemy spawns must respect a minimum distance from the streamer. Defeating
enemies levels the streamer up, which is broadcast to all viewers.
"""

from __future__ import annotations

import math

from .base import (
    BaseApp,
    OUTCOME_IGNORED_KIND,
    OUTCOME_INSUFFICIENT_FUNDS,
    OUTCOME_NO_ACTION,
    OUTCOME_OK,
    OUTCOME_TOO_CLOSE,
    OUTCOME_UNKNOWN_ITEM,
)
from ..policy import AccrualPolicy, FundsAccount, InsufficientFunds, accrue, spend
from ..protocol import KIND_CLICK

DEFAULT_ITEMS = {
    "zombie": {"cost": 5.0, "enemy": True},
    "skeleton": {"cost": 8.0, "enemy": True},
    "crate": {"cost": 3.0, "enemy": False},
    "medkit": {"cost": 4.0, "enemy": False},
}


class ArenaApp(BaseApp):
    kind = "arena"

    def __init__(
        self,
        items=None,
        min_spawn_distance=10.0,
        message_ttl_ms=4000,
        kills_per_level=10,
        defeat_interval_ticks=10,
        streamer_velocity=(0.0, 0.0),
        accrual=None,
        starting_balance=0.0,
        viewer_count=None,
        **kw,
    ):
        super().__init__(**kw)
        self.items = dict(DEFAULT_ITEMS if items is None else items)
        self.min_spawn_distance = min_spawn_distance
        self.message_ttl_ms = message_ttl_ms
        self.kills_per_level = kills_per_level
        self.defeat_interval_ticks = defeat_interval_ticks
        self.streamer_pos = self.center
        self.streamer_velocity = (float(streamer_velocity[0]), float(streamer_velocity[1]))
        self.accrual = accrual or AccrualPolicy.inverse_viewers(10.0)
        self.starting_balance = starting_balance
        self.viewer_count = viewer_count or (lambda: 1)
        self.accounts = {}
        self.entities = []  # (kind, (x, y), user)
        self.messages = []  # (text, (x, y), expiry_ms)
        self.kills = 0
        self.level = 1

    # -- camera follows the streamer -----------------------------------------

    def _move_camera(self, now_ms):
        if self.tick_count > 1:
            self.streamer_pos = (
                self.streamer_pos[0] + self.streamer_velocity[0],
                self.streamer_pos[1] + self.streamer_velocity[1],
            )
        self.center = self.streamer_pos

    def _on_tick(self, now_ms):
        self.messages = [m for m in self.messages if m[2] > now_ms]
        if self.defeat_interval_ticks and self.tick_count % self.defeat_interval_ticks == 0:
            self._defeat_oldest_enemy()

    def _defeat_oldest_enemy(self):
        for i, (kind, _, _) in enumerate(self.entities):
            if self.items.get(kind, {}).get("enemy"):
                del self.entities[i]
                self.kills += 1
                new_level = 1 + self.kills // self.kills_per_level
                if new_level != self.level:
                    self.level = new_level
                    self.emit_update({"level": self.level})
                return

    # -- funds ------------------------------------------------------------------

    def account(self, user) -> FundsAccount:
        acct = self.accounts.get(user)
        if acct is None:
            acct = FundsAccount(
                user, balance=self.starting_balance, last_accrual_ts_ms=self.now_ms or 0
            )
            self.accounts[user] = acct
        return acct

    # -- event handling -----------------------------------------------------------

    def _apply_event(self, admitted, world_points) -> str:
        if admitted.event.kind != KIND_CLICK:
            return OUTCOME_IGNORED_KIND
        point = world_points[0]
        snapshot = admitted.context_snapshot
        user = admitted.event.user
        if "item" in snapshot:
            return self._spawn_item(user, snapshot["item"], point, admitted.server_ts_ms)
        if "message" in snapshot:
            self.messages.append(
                (snapshot["message"], point, admitted.server_ts_ms + self.message_ttl_ms)
            )
            return OUTCOME_OK
        return OUTCOME_NO_ACTION

    def _spawn_item(self, user, item, point, now_ms) -> str:
        item_def = self.items.get(item)
        if item_def is None:
            return OUTCOME_UNKNOWN_ITEM
        acct = self.account(user)
        accrue(acct, self.accrual, max(1, self.viewer_count()), now_ms)
        if item_def.get("enemy"):
            dist = math.dist(point, self.streamer_pos)
            if dist < self.min_spawn_distance:
                return OUTCOME_TOO_CLOSE  # checked before the debit: full-refund semantics
        try:
            spend(acct, item_def["cost"])
        except InsufficientFunds:
            return OUTCOME_INSUFFICIENT_FUNDS
        self.entities.append((item, point, user))
        return OUTCOME_OK

    def state_snapshot(self) -> dict:
        snap = super().state_snapshot()
        snap["streamer_pos"] = list(self.streamer_pos)
        snap["entities"] = [
            {"kind": k, "pos": list(p), "user": u} for k, p, u in self.entities
        ]
        snap["messages"] = [
            {"text": t, "pos": list(p), "expires_ms": e} for t, p, e in self.messages
        ]
        snap["kills"] = self.kills
        snap["level"] = self.level
        snap["balances"] = {
            u: {"balance": a.balance, "last_accrual_ts_ms": a.last_accrual_ts_ms}
            for u, a in sorted(self.accounts.items())
        }
        return snap
