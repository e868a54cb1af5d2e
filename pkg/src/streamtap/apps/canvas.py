"""Shared drawing canvas: viewers and streamer draw together.

Gesture strokes become colored polylines (color from the sender's context
panel); the panel's undo/clear commands arrive as context messages and only
ever touch the acting user's own strokes.
"""

from __future__ import annotations

from .base import BaseApp, OUTCOME_IGNORED_KIND, OUTCOME_OK
from ..protocol import KIND_GESTURE

DEFAULT_COLOR = "#000000"


class CanvasApp(BaseApp):
    kind = "canvas"

    def __init__(self, default_color=DEFAULT_COLOR, **kw):
        super().__init__(**kw)
        self.default_color = default_color
        self.strokes = []  # (user, color, [world points]) in draw order

    def _apply_event(self, admitted, world_points) -> str:
        if admitted.event.kind != KIND_GESTURE:
            return OUTCOME_IGNORED_KIND
        color = admitted.context_snapshot.get("color", self.default_color)
        self.strokes.append((admitted.event.user, color, world_points))
        return OUTCOME_OK

    def on_context(self, user, data):
        command = data.get("command")
        if command == "undo":
            for i in range(len(self.strokes) - 1, -1, -1):
                if self.strokes[i][0] == user:
                    del self.strokes[i]
                    break
        elif command == "clear":
            self.strokes = [s for s in self.strokes if s[0] != user]

    def strokes_of(self, user) -> list:
        return [s for s in self.strokes if s[0] == user]

    def state_snapshot(self) -> dict:
        snap = super().state_snapshot()
        snap["strokes"] = [
            {"user": u, "color": c, "points": [list(p) for p in pts]}
            for u, c, pts in self.strokes
        ]
        return snap
