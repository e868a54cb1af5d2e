"""Spatial click polling: tic-tac-toe squares, upgrade cards, or NPC choices.

One app covers all three: the configured region set is either a grid or a
list of labeled option rectangles. Rounds open on a fixed schedule; at the
deadline the most-voted region wins (ties to the lowest index) and the result
is broadcast, then the next round opens after a gap.
"""

from __future__ import annotations

from .base import (
    BaseApp,
    OUTCOME_IGNORED_KIND,
    OUTCOME_MISSED_REGION,
    OUTCOME_NO_ROUND,
    OUTCOME_OK,
)
from ..aggregation import NoVotes, PollRound, RegionMap, Rect, cast_vote, close_poll, grid_regions
from ..protocol import KIND_CLICK


class PollApp(BaseApp):
    kind = "poll"

    def __init__(
        self,
        rows=3,
        cols=3,
        board=(-4.5, -4.5, 4.5, 4.5),
        options=None,
        labels=None,
        round_duration_ms=10_000,
        gap_ms=2_000,
        lock_first=False,
        **kw,
    ):
        super().__init__(**kw)
        if options is not None:
            self.region_map = RegionMap([Rect(*r) for r in options])
        else:
            self.region_map = grid_regions(rows, cols, *board)
        self.labels = list(labels) if labels else [str(i) for i in range(len(self.region_map))]
        if len(self.labels) != len(self.region_map):
            raise ValueError("one label per region required")
        self.round_duration_ms = round_duration_ms
        self.gap_ms = gap_ms
        self.lock_first = lock_first
        self.round = None
        self.round_index = 0
        self._next_open_ms = None
        self.placed = []  # (round_index, winning region or None)

    def _on_tick(self, now_ms):
        if self.round is None and self._next_open_ms is None:
            self._next_open_ms = now_ms  # first round opens on the first tick
        if self.round is not None and now_ms >= self.round.deadline_ms:
            self._close_round()
        if self.round is None and self._next_open_ms is not None and now_ms >= self._next_open_ms:
            self.round = PollRound(
                self.region_map,
                deadline_ms=now_ms + self.round_duration_ms,
                lock_first=self.lock_first,
            )
            self.emit_update({"round": "open"})

    def _close_round(self):
        try:
            winner = close_poll(self.round)
            self.placed.append((self.round_index, winner))
            self.emit_update({"round": "closed", "winner": self.labels[winner]})
        except NoVotes:
            self.placed.append((self.round_index, None))
            self.emit_update({"round": "closed", "winner": "none"})
        self.round_index += 1
        self.round = None
        self._next_open_ms = self.now_ms + self.gap_ms

    def _apply_event(self, admitted, world_points) -> str:
        if admitted.event.kind != KIND_CLICK:
            return OUTCOME_IGNORED_KIND
        if self.round is None:
            return OUTCOME_NO_ROUND
        region = cast_vote(
            self.round, admitted.event.user, world_points[0], admitted.server_ts_ms
        )
        return OUTCOME_OK if region is not None else OUTCOME_MISSED_REGION

    def state_snapshot(self) -> dict:
        snap = super().state_snapshot()
        snap["placed"] = [
            {"round": i, "winner": None if w is None else self.labels[w]} for i, w in self.placed
        ]
        snap["round_open"] = self.round is not None
        if self.round is not None:
            snap["counts"] = self.round.counts()
            snap["deadline_ms"] = self.round.deadline_ms
        return snap
